//! Binary PGM (P5) reader and writer, 8-bit only.

use dwt97::dwt2d::ImagePlane;
use std::fs;
use std::io;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("{0}")]
    Io(#[from] io::Error),

    #[error("malformed PGM at byte {offset}: {message}")]
    Malformed { offset: usize, message: String },

    #[error("truncated PGM payload: {missing} byte(s) missing")]
    Truncated { missing: usize },

    #[error("unsupported PGM depth: maxval {maxval} (only maxval <= 255)")]
    UnsupportedDepth { maxval: u32 },
}

fn malformed(offset: usize, message: &str) -> PgmError {
    PgmError::Malformed {
        offset,
        message: message.to_string(),
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Skip whitespace and `#` comment lines.
    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn decimal(&mut self, what: &str) -> Result<u32, PgmError> {
        self.skip_space();
        let start = self.pos;
        let mut v: u64 = 0;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            v = v * 10 + (self.bytes[self.pos] - b'0') as u64;
            if v > u32::MAX as u64 {
                return Err(malformed(start, &format!("{what} out of range")));
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(malformed(self.pos, &format!("expected {what}")));
        }
        Ok(v as u32)
    }
}

/// Parse a binary PGM: magic `P5`, whitespace-separated width, height and
/// maxval (<= 255), one whitespace byte, then the raw raster.
pub fn parse_pgm(bytes: &[u8]) -> Result<(usize, usize, Vec<u8>), PgmError> {
    if bytes.len() < 2 || &bytes[0..2] != b"P5" {
        return Err(malformed(0, "missing P5 magic"));
    }
    let mut c = Cursor { bytes, pos: 2 };
    let width = c.decimal("width")? as usize;
    let height = c.decimal("height")? as usize;
    let maxval = c.decimal("maxval")?;
    if maxval > 255 {
        return Err(PgmError::UnsupportedDepth { maxval });
    }
    if maxval == 0 {
        return Err(malformed(c.pos, "maxval must be positive"));
    }
    if width == 0 || height == 0 {
        return Err(malformed(c.pos, "zero dimension"));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if c.pos >= bytes.len() || !bytes[c.pos].is_ascii_whitespace() {
        return Err(malformed(c.pos, "expected whitespace before raster"));
    }
    c.pos += 1;
    let need = width * height;
    let have = bytes.len() - c.pos;
    if have < need {
        return Err(PgmError::Truncated { missing: need - have });
    }
    if have > need {
        return Err(malformed(c.pos + need, "trailing bytes after raster"));
    }
    Ok((width, height, bytes[c.pos..].to_vec()))
}

/// Read a PGM file into a level-shifted image plane.
pub fn read_pgm(path: &Path) -> Result<ImagePlane, PgmError> {
    let bytes = fs::read(path)?;
    let (w, h, pixels) = parse_pgm(&bytes)?;
    ImagePlane::from_pixels(w, h, &pixels)
        .map_err(|e| malformed(0, &e.to_string()))
}

/// Canonical P5 encoding: `P5\n<w> <h>\n255\n` followed by the raster.
pub fn encode_pgm(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

pub fn write_pgm(path: &Path, width: usize, height: usize, pixels: &[u8]) -> io::Result<()> {
    fs::write(path, encode_pgm(width, height, pixels))
}
