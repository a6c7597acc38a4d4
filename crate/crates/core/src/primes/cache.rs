//! Binary prime-cache files.
//!
//! Layout (little endian): magic `PPLB1`, `limit: u64`, `count: u64`, then
//! `count` primes as `u64`. Opening a cache validates the header, the exact
//! file size, and strict monotonicity of the stored primes.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 5] = b"PPLB1";
const HEADER_LEN: u64 = 5 + 8 + 8;

/// A validated prime-cache file on disk.
#[derive(Debug, Clone)]
pub struct PrimeCacheFile {
    path: PathBuf,
    limit: u64,
    count: u64,
}

impl PrimeCacheFile {
    /// Writes `primes` (ascending, all `< limit`) to `path`.
    pub fn write(path: &Path, limit: u64, primes: impl Iterator<Item = u64>) -> Result<Self> {
        let file = File::create(path)?;
        let mut w = BufWriter::new(file);
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&limit.to_le_bytes())?;
        w.write_all(&0u64.to_le_bytes())?; // count patched below
        let mut count = 0u64;
        let mut prev = 0u64;
        for p in primes {
            if p <= prev {
                return Err(Error::InvalidArgument(format!(
                    "cache primes must be strictly increasing ({prev} then {p})"
                )));
            }
            if p >= limit {
                return Err(Error::InvalidArgument(format!(
                    "cache prime {p} is not below the declared limit {limit}"
                )));
            }
            prev = p;
            w.write_all(&p.to_le_bytes())?;
            count += 1;
        }
        let mut file = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        file.seek(SeekFrom::Start(5 + 8))?;
        file.write_all(&count.to_le_bytes())?;
        file.sync_all()?;
        Ok(PrimeCacheFile {
            path: path.to_path_buf(),
            limit,
            count,
        })
    }

    /// Opens and fully validates a cache file.
    pub fn open(path: &Path) -> Result<Self> {
        let file = File::open(path)?;
        let file_len = file.metadata()?.len();
        let mut r = BufReader::new(file);

        let mut magic = [0u8; 5];
        r.read_exact(&mut magic)
            .map_err(|_| Error::BadCache("file shorter than header".into()))?;
        if &magic != CACHE_MAGIC {
            return Err(Error::BadCache(format!(
                "bad magic {:?}, expected {:?}",
                magic, CACHE_MAGIC
            )));
        }
        let limit = read_u64(&mut r)?;
        let count = read_u64(&mut r)?;
        let expected_len = HEADER_LEN + 8 * count;
        if file_len != expected_len {
            return Err(Error::BadCache(format!(
                "file is {file_len} bytes, header implies {expected_len}"
            )));
        }

        let mut prev = 0u64;
        for i in 0..count {
            let p = read_u64(&mut r)?;
            if p <= prev {
                return Err(Error::BadCache(format!(
                    "primes not strictly increasing at entry {i}: {prev} then {p}"
                )));
            }
            if p >= limit {
                return Err(Error::BadCache(format!(
                    "entry {i} = {p} is not below the declared limit {limit}"
                )));
            }
            if i == 0 && p != 2 {
                return Err(Error::BadCache(format!("first prime must be 2, got {p}")));
            }
            prev = p;
        }

        Ok(PrimeCacheFile {
            path: path.to_path_buf(),
            limit,
            count,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Every cached prime is strictly below this.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Streams `(index, prime)` pairs from the file in ascending order.
    pub fn stream(&self) -> Result<CacheStream> {
        let mut r = BufReader::with_capacity(1 << 20, File::open(&self.path)?);
        r.seek(SeekFrom::Start(HEADER_LEN))?;
        Ok(CacheStream {
            r,
            remaining: self.count,
            next_index: 1,
        })
    }
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)
        .map_err(|_| Error::BadCache("unexpected end of file".into()))?;
    Ok(u64::from_le_bytes(buf))
}

/// Iterator over a validated cache file.
pub struct CacheStream {
    r: BufReader<File>,
    remaining: u64,
    next_index: u64,
}

impl Iterator for CacheStream {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        if self.remaining == 0 {
            return None;
        }
        let mut buf = [0u8; 8];
        // The file was validated at open; a short read here means it was
        // truncated underneath us, so ending the stream is the sane option.
        if self.r.read_exact(&mut buf).is_err() {
            self.remaining = 0;
            return None;
        }
        self.remaining -= 1;
        let idx = self.next_index;
        self.next_index += 1;
        Some((idx, u64::from_le_bytes(buf)))
    }
}
