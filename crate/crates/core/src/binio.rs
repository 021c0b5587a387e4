//! Little-endian helpers shared by the index file formats.

use crate::error::{Error, Result};

/// Encodes an absent id.
pub(crate) const NONE: u32 = u32::MAX;

pub(crate) fn opt(x: Option<u32>) -> u32 {
    x.unwrap_or(NONE)
}

pub(crate) fn from_opt(raw: u32) -> Option<u32> {
    (raw != NONE).then_some(raw)
}

pub(crate) fn put_u32(out: &mut Vec<u8>, x: u32) {
    out.extend_from_slice(&x.to_le_bytes());
}

pub(crate) fn put_u64(out: &mut Vec<u8>, x: u64) {
    out.extend_from_slice(&x.to_le_bytes());
}

pub(crate) fn put_labels(out: &mut Vec<u8>, labels: &[String]) {
    for l in labels {
        put_u32(out, l.len() as u32);
        out.extend_from_slice(l.as_bytes());
    }
}

pub(crate) fn labels_len(labels: &[String]) -> usize {
    labels.iter().map(|l| 4 + l.len()).sum()
}

pub(crate) struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Self {
        Reader { bytes, pos: 0 }
    }

    pub(crate) fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len());
        let Some(end) = end else {
            return Err(Error::Format(format!("truncated while reading {what}")));
        };
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    pub(crate) fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    pub(crate) fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    /// Reads a record count, rejecting counts the remaining bytes cannot
    /// hold so corrupt files never trigger huge allocations.
    pub(crate) fn count(&mut self, what: &str, record_len: usize) -> Result<usize> {
        let raw = self.u64(what)?;
        let remaining = (self.bytes.len() - self.pos) as u64;
        if raw.saturating_mul(record_len as u64) > remaining {
            return Err(Error::Format(format!("{what} count {raw} exceeds file size")));
        }
        Ok(raw as usize)
    }

    pub(crate) fn u32s(&mut self, len: usize, what: &str) -> Result<Vec<u32>> {
        let bytes = len.checked_mul(4).ok_or_else(|| Error::Format(format!("{what} too long")))?;
        let raw = self.take(bytes, what)?;
        Ok(raw.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect())
    }

    pub(crate) fn labels(&mut self, n: u32) -> Result<Vec<String>> {
        let mut labels = Vec::with_capacity(n.min(1 << 20) as usize);
        for _ in 0..n {
            let len = self.u32("label length")? as usize;
            let raw = self.take(len, "label")?;
            let label = std::str::from_utf8(raw).map_err(|_| Error::Format("label is not UTF-8".into()))?;
            labels.push(label.to_owned());
        }
        Ok(labels)
    }

    pub(crate) fn finish(self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(Error::Format(format!("{} trailing bytes", self.bytes.len() - self.pos)));
        }
        Ok(())
    }
}

pub(crate) fn check_offsets(offsets: &[u32], total: usize, what: &str) -> Result<()> {
    if offsets.first() != Some(&0) || offsets.last().map(|&o| o as usize) != Some(total) {
        return Err(Error::Format(format!("{what} offsets do not span the records")));
    }
    if offsets.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Format(format!("{what} offsets decrease")));
    }
    Ok(())
}

pub(crate) fn check_timestamps(timestamps: &[u32], t_max: u32) -> Result<()> {
    if timestamps.windows(2).any(|w| w[0] >= w[1]) || timestamps.iter().any(|&t| t == 0 || t > t_max) {
        return Err(Error::Format("timestamps not strictly ascending in 1..=t_max".into()));
    }
    Ok(())
}
