use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

const MAGIC: &[u8; 4] = b"ZRC1";
const VERSION: u32 = 1;

/// On-disk store of squared sphere-family 6j values, keyed by
/// (N, sorted index triple). Values travel as exact "p/q" strings; the
/// whole file is sealed by a trailing FNV-1a 64-bit checksum, and any
/// structural mismatch is reported as corruption rather than read past.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Cache {
    pub entries: BTreeMap<(u32, u32, u32, u32), String>,
}

#[derive(Debug)]
pub enum CacheError {
    Io(std::io::Error),
    Corrupt(String),
}

impl std::fmt::Display for CacheError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CacheError::Io(e) => write!(f, "cache i/o failure: {e}"),
            CacheError::Corrupt(why) => write!(f, "cache rejected: {why}"),
        }
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl Cache {
    pub fn read(path: &Path) -> Result<Cache, CacheError> {
        let data = fs::read(path).map_err(CacheError::Io)?;
        let corrupt = |why: &str| CacheError::Corrupt(format!("{why} in {}", path.display()));
        if data.len() < 4 + 4 + 8 + 8 {
            return Err(corrupt("file too short for header and checksum"));
        }
        let (body, tail) = data.split_at(data.len() - 8);
        let stored = u64::from_le_bytes(tail.try_into().unwrap());
        if fnv1a64(body) != stored {
            return Err(corrupt("checksum mismatch"));
        }
        if &body[..4] != MAGIC {
            return Err(corrupt("bad magic"));
        }
        let version = u32::from_le_bytes(body[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(corrupt(&format!("unsupported version {version}")));
        }
        let count = u64::from_le_bytes(body[8..16].try_into().unwrap());
        let mut at = 16usize;
        let mut entries = BTreeMap::new();
        for _ in 0..count {
            if body.len() - at < 20 {
                return Err(corrupt("truncated entry"));
            }
            let word = |at: &mut usize| {
                let v = u32::from_le_bytes(body[*at..*at + 4].try_into().unwrap());
                *at += 4;
                v
            };
            let key = (word(&mut at), word(&mut at), word(&mut at), word(&mut at));
            let len = word(&mut at) as usize;
            if body.len() - at < len {
                return Err(corrupt("entry payload runs past the end"));
            }
            let value = std::str::from_utf8(&body[at..at + len])
                .map_err(|_| corrupt("entry payload is not UTF-8"))?
                .to_string();
            zeitlin_core::rational::parse_ratio(&value)
                .map_err(|_| corrupt("entry payload is not a p/q rational"))?;
            at += len;
            entries.insert(key, value);
        }
        if at != body.len() {
            return Err(corrupt("trailing bytes after the last entry"));
        }
        Ok(Cache { entries })
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut body = Vec::new();
        body.extend_from_slice(MAGIC);
        body.extend_from_slice(&VERSION.to_le_bytes());
        body.extend_from_slice(&(self.entries.len() as u64).to_le_bytes());
        for (&(n, i, j, l), value) in &self.entries {
            for word in [n, i, j, l, value.len() as u32] {
                body.extend_from_slice(&word.to_le_bytes());
            }
            body.extend_from_slice(value.as_bytes());
        }
        let sum = fnv1a64(&body);
        body.extend_from_slice(&sum.to_le_bytes());
        fs::write(path, body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Cache {
        let mut c = Cache::default();
        c.entries.insert((5, 1, 2, 3), "1/54".to_string());
        c.entries.insert((3, 1, 1, 1), "-2/15".to_string());
        c.entries.insert((3, 1, 1, 2), "7".to_string());
        c
    }

    #[test]
    fn round_trips_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("squares.zrc");
        let cache = sample();
        cache.write(&path).unwrap();
        assert_eq!(Cache::read(&path).unwrap(), cache);
    }

    #[test]
    fn any_flipped_byte_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("squares.zrc");
        sample().write(&path).unwrap();
        let clean = fs::read(&path).unwrap();
        for at in 0..clean.len() {
            let mut broken = clean.clone();
            broken[at] ^= 0x20;
            fs::write(&path, &broken).unwrap();
            assert!(
                matches!(Cache::read(&path), Err(CacheError::Corrupt(_))),
                "byte {at} slipped through"
            );
        }
    }

    #[test]
    fn truncation_and_padding_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("squares.zrc");
        sample().write(&path).unwrap();
        let clean = fs::read(&path).unwrap();

        fs::write(&path, &clean[..clean.len() - 3]).unwrap();
        assert!(matches!(Cache::read(&path), Err(CacheError::Corrupt(_))));

        let mut padded = clean.clone();
        padded.push(0);
        fs::write(&path, &padded).unwrap();
        assert!(matches!(Cache::read(&path), Err(CacheError::Corrupt(_))));
    }

    #[test]
    fn missing_file_is_io_not_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("absent.zrc");
        assert!(matches!(Cache::read(&path), Err(CacheError::Io(_))));
    }
}
