//! Multi-octave 2D transform by recursive row/column application of the 1D
//! transform, with the image-sized memory model and its address schedules.
//!
//! Each octave rewrites the active region in place: the rows pass
//! de-interleaves every row into a low half and a high half, the columns
//! pass does the same vertically. That leaves the standard quadrant layout
//! (LL top-left, HL top-right, LH bottom-left, HH bottom-right) inside one
//! image-sized buffer; the next octave consumes the shrinking LL quadrant.

use crate::error::{Error, Result};
use crate::fixpoint::CoeffSet;
use crate::lifting::{self, BandPair, Mode, INPUT_MAX, INPUT_MIN};

/// Row-major rectangular plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane<T> {
    pub width: usize,
    pub height: usize,
    pub data: Vec<T>,
}

impl<T: Copy + Default> Plane<T> {
    pub fn new(width: usize, height: usize) -> Self {
        Plane {
            width,
            height,
            data: vec![T::default(); width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Shape(format!(
                "{}x{} plane needs {} samples, got {}",
                width,
                height,
                width * height,
                data.len()
            )));
        }
        Ok(Plane { width, height, data })
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: T) {
        self.data[y * self.width + x] = v;
    }

    /// Copy of the `w`-by-`h` top-left subregion offset by (x0, y0).
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Plane<T> {
        let mut out = Plane::new(w, h);
        for y in 0..h {
            for x in 0..w {
                out.set(x, y, self.get(x0 + x, y0 + y));
            }
        }
        out
    }
}

/// Image plane of level-shifted 8-bit pixels.
pub type ImagePlane = Plane<i32>;

impl ImagePlane {
    /// Build from raw 8-bit pixels, shifting into signed range.
    pub fn from_pixels(width: usize, height: usize, pixels: &[u8]) -> Result<Self> {
        let data = pixels.iter().map(|&p| p as i32 - 128).collect();
        Plane::from_vec(width, height, data)
    }

    /// Undo the level shift and clamp back to 8-bit pixels.
    pub fn to_pixels(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|&v| (v + 128).clamp(0, 255) as u8)
            .collect()
    }
}

/// Sample domain a 2D transform runs in: real or integer datapath.
pub trait Sample: Copy + Default + PartialEq + std::fmt::Debug {
    const MODE: Mode;
    fn forward_1d(s: &[Self], coeffs: &CoeffSet) -> Result<BandPair<Self>>;
    fn inverse_1d(b: &BandPair<Self>, coeffs: &CoeffSet) -> Result<Vec<Self>>;
    fn from_pixel(v: i32) -> Self;
    fn dump_i16(self) -> i16;
    fn validate_input(p: &Plane<Self>) -> Result<()>;
}

impl Sample for f64 {
    const MODE: Mode = Mode::Float;

    fn forward_1d(s: &[f64], coeffs: &CoeffSet) -> Result<BandPair<f64>> {
        lifting::forward_float(s, coeffs)
    }

    fn inverse_1d(b: &BandPair<f64>, coeffs: &CoeffSet) -> Result<Vec<f64>> {
        lifting::inverse_float(b, coeffs)
    }

    fn from_pixel(v: i32) -> f64 {
        v as f64
    }

    fn dump_i16(self) -> i16 {
        self.round().clamp(i16::MIN as f64, i16::MAX as f64) as i16
    }

    fn validate_input(_p: &Plane<f64>) -> Result<()> {
        Ok(())
    }
}

impl Sample for i32 {
    const MODE: Mode = Mode::Fixed;

    // Octaves beyond the first feed LL coefficients wider than 8 bits back
    // through the datapath, so the width guard stays at the 2D entry.
    fn forward_1d(s: &[i32], coeffs: &CoeffSet) -> Result<BandPair<i32>> {
        lifting::forward_fixed_wide(s, coeffs)
    }

    fn inverse_1d(b: &BandPair<i32>, coeffs: &CoeffSet) -> Result<Vec<i32>> {
        lifting::inverse_fixed(b, coeffs)
    }

    fn from_pixel(v: i32) -> i32 {
        v
    }

    fn dump_i16(self) -> i16 {
        self.clamp(i16::MIN as i32, i16::MAX as i32) as i16
    }

    fn validate_input(p: &Plane<i32>) -> Result<()> {
        for (index, &value) in p.data.iter().enumerate() {
            if !(INPUT_MIN..=INPUT_MAX).contains(&value) {
                return Err(Error::SampleOutOfRange {
                    index,
                    value: value as i64,
                });
            }
        }
        Ok(())
    }
}

/// The four sub-band planes of one octave.
#[derive(Debug, Clone, PartialEq)]
pub struct OctaveBands<T> {
    pub ll: Plane<T>,
    pub lh: Plane<T>,
    pub hl: Plane<T>,
    pub hh: Plane<T>,
}

/// Quadrant-layout coefficient buffer of a multi-octave transform.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandImage<T> {
    pub buffer: Plane<T>,
    pub octaves: u32,
}

impl<T: Copy + Default> SubbandImage<T> {
    fn active(&self, octave: u32) -> (usize, usize) {
        (
            self.buffer.width >> (octave - 1),
            self.buffer.height >> (octave - 1),
        )
    }

    /// Deepest-octave LL plane.
    pub fn ll_deep(&self) -> Plane<T> {
        let (w, h) = self.active(self.octaves);
        self.buffer.crop(0, 0, w / 2, h / 2)
    }

    /// Horizontal-detail plane of an octave (1-based): top-right quadrant.
    pub fn hl(&self, octave: u32) -> Plane<T> {
        let (w, h) = self.active(octave);
        self.buffer.crop(w / 2, 0, w / 2, h / 2)
    }

    /// Vertical-detail plane: bottom-left quadrant.
    pub fn lh(&self, octave: u32) -> Plane<T> {
        let (w, h) = self.active(octave);
        self.buffer.crop(0, h / 2, w / 2, h / 2)
    }

    /// Diagonal-detail plane: bottom-right quadrant.
    pub fn hh(&self, octave: u32) -> Plane<T> {
        let (w, h) = self.active(octave);
        self.buffer.crop(w / 2, h / 2, w / 2, h / 2)
    }

    /// Total coefficient count equals the pixel count at any depth.
    pub fn coefficient_count(&self) -> usize {
        self.buffer.data.len()
    }
}

fn check_region(w: usize, h: usize) -> Result<()> {
    if w < 2 || h < 2 || !w.is_multiple_of(2) || !h.is_multiple_of(2) {
        return Err(Error::Shape(format!(
            "active region {w}x{h} must have even dimensions >= 2"
        )));
    }
    Ok(())
}

fn check_octaves(w: usize, h: usize, octaves: u32) -> Result<()> {
    if octaves < 1 {
        return Err(Error::Shape("octave count must be >= 1".into()));
    }
    let d = 1usize << octaves;
    if !w.is_multiple_of(d) || !h.is_multiple_of(d) || w / d == 0 || h / d == 0 {
        return Err(Error::Shape(format!(
            "{w}x{h} does not support {octaves} octave(s)"
        )));
    }
    Ok(())
}

/// Largest supported octave count for an image, capped at 5.
pub fn default_octaves(w: usize, h: usize) -> u32 {
    let mut d = 0;
    while d < 5 && check_octaves(w, h, d + 1).is_ok() {
        d += 1;
    }
    d
}

/// One in-place pass pair (rows then columns) over the active region,
/// using an arbitrary 1D forward transform.
pub(crate) fn forward_region_with<T: Copy + Default>(
    buf: &mut Plane<T>,
    w: usize,
    h: usize,
    fwd: &dyn Fn(&[T]) -> Result<BandPair<T>>,
) -> Result<()> {
    check_region(w, h)?;
    let stride = buf.width;
    let mut line: Vec<T> = Vec::new();
    for y in 0..h {
        line.clear();
        line.extend_from_slice(&buf.data[y * stride..y * stride + w]);
        let bp = fwd(&line)?;
        buf.data[y * stride..y * stride + w / 2].copy_from_slice(&bp.low);
        buf.data[y * stride + w / 2..y * stride + w].copy_from_slice(&bp.high);
    }
    for x in 0..w {
        line.clear();
        line.extend((0..h).map(|y| buf.data[y * stride + x]));
        let bp = fwd(&line)?;
        for (y, &v) in bp.low.iter().enumerate() {
            buf.data[y * stride + x] = v;
        }
        for (y, &v) in bp.high.iter().enumerate() {
            buf.data[(h / 2 + y) * stride + x] = v;
        }
    }
    Ok(())
}

/// Inverse of `forward_region_with`: columns, then rows.
pub(crate) fn inverse_region_with<T: Copy + Default>(
    buf: &mut Plane<T>,
    w: usize,
    h: usize,
    inv: &dyn Fn(&BandPair<T>) -> Result<Vec<T>>,
) -> Result<()> {
    check_region(w, h)?;
    let stride = buf.width;
    for x in 0..w {
        let low: Vec<T> = (0..h / 2).map(|y| buf.data[y * stride + x]).collect();
        let high: Vec<T> = (0..h / 2)
            .map(|y| buf.data[(h / 2 + y) * stride + x])
            .collect();
        let col = inv(&BandPair { low, high })?;
        for (y, &v) in col.iter().enumerate() {
            buf.data[y * stride + x] = v;
        }
    }
    for y in 0..h {
        let low = buf.data[y * stride..y * stride + w / 2].to_vec();
        let high = buf.data[y * stride + w / 2..y * stride + w].to_vec();
        let row = inv(&BandPair { low, high })?;
        buf.data[y * stride..y * stride + w].copy_from_slice(&row);
    }
    Ok(())
}

/// Transform one octave and return its four quarter-size planes.
pub fn forward_octave<T: Sample>(img: &Plane<T>, coeffs: &CoeffSet) -> Result<OctaveBands<T>> {
    T::validate_input(img)?;
    let sb = forward_multi_unchecked(img, 1, coeffs)?;
    Ok(OctaveBands {
        ll: sb.ll_deep(),
        lh: sb.lh(1),
        hl: sb.hl(1),
        hh: sb.hh(1),
    })
}

/// Rebuild an octave's input plane from its four sub-band planes.
pub fn inverse_octave<T: Sample>(bands: &OctaveBands<T>, coeffs: &CoeffSet) -> Result<Plane<T>> {
    let (bw, bh) = (bands.ll.width, bands.ll.height);
    for p in [&bands.lh, &bands.hl, &bands.hh] {
        if p.width != bw || p.height != bh {
            return Err(Error::Shape(format!(
                "sub-band {}x{} does not match LL {}x{}",
                p.width, p.height, bw, bh
            )));
        }
    }
    let mut buf = Plane::new(bw * 2, bh * 2);
    blit(&mut buf, &bands.ll, 0, 0);
    blit(&mut buf, &bands.hl, bw, 0);
    blit(&mut buf, &bands.lh, 0, bh);
    blit(&mut buf, &bands.hh, bw, bh);
    let sb = SubbandImage { buffer: buf, octaves: 1 };
    inverse_multi(&sb, coeffs)
}

fn blit<T: Copy + Default>(dst: &mut Plane<T>, src: &Plane<T>, x0: usize, y0: usize) {
    for y in 0..src.height {
        for x in 0..src.width {
            dst.set(x0 + x, y0 + y, src.get(x, y));
        }
    }
}

/// Multi-octave forward transform; octave o+1 consumes octave o's LL.
pub fn forward_multi<T: Sample>(
    img: &Plane<T>,
    octaves: u32,
    coeffs: &CoeffSet,
) -> Result<SubbandImage<T>> {
    T::validate_input(img)?;
    forward_multi_unchecked(img, octaves, coeffs)
}

fn forward_multi_unchecked<T: Sample>(
    img: &Plane<T>,
    octaves: u32,
    coeffs: &CoeffSet,
) -> Result<SubbandImage<T>> {
    check_octaves(img.width, img.height, octaves)?;
    let mut buf = img.clone();
    for o in 0..octaves {
        let (w, h) = (img.width >> o, img.height >> o);
        forward_region_with(&mut buf, w, h, &|s| T::forward_1d(s, coeffs))?;
    }
    Ok(SubbandImage { buffer: buf, octaves })
}

/// Multi-octave inverse transform.
pub fn inverse_multi<T: Sample>(sb: &SubbandImage<T>, coeffs: &CoeffSet) -> Result<Plane<T>> {
    check_octaves(sb.buffer.width, sb.buffer.height, sb.octaves)?;
    let mut buf = sb.buffer.clone();
    for o in (0..sb.octaves).rev() {
        let (w, h) = (buf.width >> o, buf.height >> o);
        inverse_region_with(&mut buf, w, h, &|b| T::inverse_1d(b, coeffs))?;
    }
    Ok(buf)
}

/// Which direction a 1D pass sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PassDir {
    Rows,
    Columns,
}

/// Addresses of one 1D line inside the image-sized memory: the cells read
/// in order, and the cells written in transform-output order (low half
/// first, then high half).
#[derive(Debug, Clone, PartialEq)]
pub struct LineSchedule {
    pub reads: Vec<usize>,
    pub writes: Vec<usize>,
}

/// Deterministic per-line address sequence of one pass of one octave.
/// Reads and writes each touch every active cell exactly once.
pub fn address_schedule(
    w: usize,
    h: usize,
    octave: u32,
    pass: PassDir,
) -> Result<Vec<LineSchedule>> {
    check_octaves(w, h, octave)?;
    let aw = w >> (octave - 1);
    let ah = h >> (octave - 1);
    let mut lines = Vec::new();
    match pass {
        PassDir::Rows => {
            for y in 0..ah {
                let addrs: Vec<usize> = (0..aw).map(|x| y * w + x).collect();
                lines.push(LineSchedule {
                    reads: addrs.clone(),
                    writes: addrs,
                });
            }
        }
        PassDir::Columns => {
            for x in 0..aw {
                let addrs: Vec<usize> = (0..ah).map(|y| y * w + x).collect();
                lines.push(LineSchedule {
                    reads: addrs.clone(),
                    writes: addrs,
                });
            }
        }
    }
    Ok(lines)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccessKind {
    Read,
    Write,
}

/// Image-sized coefficient memory with an access log for hazard checking.
#[derive(Debug, Clone)]
pub struct MemoryModel {
    pub cells: Vec<i32>,
    pub width: usize,
    pub height: usize,
    pub access_log: Vec<(u64, AccessKind, usize)>,
    /// Log ranges of the completed passes, in replay order.
    pub pass_ranges: Vec<(usize, usize)>,
    clock: u64,
}

impl MemoryModel {
    pub fn from_plane(img: &ImagePlane) -> Self {
        MemoryModel {
            cells: img.data.clone(),
            width: img.width,
            height: img.height,
            access_log: Vec::new(),
            pass_ranges: Vec::new(),
            clock: 0,
        }
    }

    fn read(&mut self, addr: usize) -> i32 {
        self.access_log.push((self.clock, AccessKind::Read, addr));
        self.clock += 1;
        self.cells[addr]
    }

    fn write(&mut self, addr: usize, v: i32) {
        self.access_log.push((self.clock, AccessKind::Write, addr));
        self.clock += 1;
        self.cells[addr] = v;
    }

    /// Run one pass: each line is read into the line buffer, transformed,
    /// and written back de-interleaved. Returns the log range of the pass.
    pub fn replay_pass(
        &mut self,
        schedule: &[LineSchedule],
        transform: &dyn Fn(&[i32]) -> Result<Vec<i32>>,
    ) -> Result<(usize, usize)> {
        let start = self.access_log.len();
        let mut line: Vec<i32> = Vec::new();
        for ls in schedule {
            line.clear();
            for &a in &ls.reads {
                line.push(self.read(a));
            }
            let out = transform(&line)?;
            debug_assert_eq!(out.len(), ls.writes.len());
            for (&a, &v) in ls.writes.iter().zip(&out) {
                self.write(a, v);
            }
        }
        let range = (start, self.access_log.len());
        self.pass_ranges.push(range);
        Ok(range)
    }

    /// Within a log range, check that no cell is read after it was written.
    pub fn pass_is_hazard_free(&self, range: (usize, usize)) -> bool {
        use std::collections::HashMap;
        let mut first_write: HashMap<usize, u64> = HashMap::new();
        for &(clk, kind, addr) in &self.access_log[range.0..range.1] {
            match kind {
                AccessKind::Write => {
                    first_write.entry(addr).or_insert(clk);
                }
                AccessKind::Read => {
                    if let Some(&w) = first_write.get(&addr) {
                        if w < clk {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Check that a pass schedule reads and writes every cell of the active
/// region exactly once.
pub fn schedule_is_permutation(
    schedule: &[LineSchedule],
    stride: usize,
    active: (usize, usize),
) -> bool {
    use std::collections::BTreeSet;
    let (aw, ah) = active;
    let expected: BTreeSet<usize> = (0..ah)
        .flat_map(|y| (0..aw).map(move |x| y * stride + x))
        .collect();
    let mut seen_r = BTreeSet::new();
    let mut seen_w = BTreeSet::new();
    for ls in schedule {
        for &a in &ls.reads {
            if !expected.contains(&a) || !seen_r.insert(a) {
                return false;
            }
        }
        for &a in &ls.writes {
            if !expected.contains(&a) || !seen_w.insert(a) {
                return false;
            }
        }
    }
    seen_r == expected && seen_w == expected
}

/// Fixed-mode multi-octave transform executed through the memory model and
/// its address schedules; returns the coefficients and the replayed memory.
pub fn forward_multi_inplace(
    img: &ImagePlane,
    octaves: u32,
    coeffs: &CoeffSet,
) -> Result<(SubbandImage<i32>, MemoryModel)> {
    <i32 as Sample>::validate_input(img)?;
    check_octaves(img.width, img.height, octaves)?;
    let mut mem = MemoryModel::from_plane(img);
    let fwd = |s: &[i32]| -> Result<Vec<i32>> {
        let bp = lifting::forward_fixed_wide(s, coeffs)?;
        let mut out = bp.low;
        out.extend(bp.high);
        Ok(out)
    };
    for o in 1..=octaves {
        for pass in [PassDir::Rows, PassDir::Columns] {
            let sched = address_schedule(img.width, img.height, o, pass)?;
            mem.replay_pass(&sched, &fwd)?;
        }
    }
    let buffer = Plane::from_vec(img.width, img.height, mem.cells.clone())?;
    Ok((SubbandImage { buffer, octaves }, mem))
}

/// Magic prefix of the coefficient dump format.
pub const DUMP_MAGIC: [u8; 4] = *b"DW97";

/// Serialize a coefficient buffer: magic, width/height (u32 LE), octave
/// count and mode (one byte each), then row-major i16 LE words in quadrant
/// layout. Bit-exact across platforms.
pub fn write_dump<T: Sample>(sb: &SubbandImage<T>) -> Vec<u8> {
    let mut out = Vec::with_capacity(14 + sb.buffer.data.len() * 2);
    out.extend_from_slice(&DUMP_MAGIC);
    out.extend_from_slice(&(sb.buffer.width as u32).to_le_bytes());
    out.extend_from_slice(&(sb.buffer.height as u32).to_le_bytes());
    out.push(sb.octaves as u8);
    out.push(match T::MODE {
        Mode::Fixed => 0,
        Mode::Float => 1,
    });
    for &v in &sb.buffer.data {
        out.extend_from_slice(&v.dump_i16().to_le_bytes());
    }
    out
}

/// Parsed dump header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DumpHeader {
    pub width: usize,
    pub height: usize,
    pub octaves: u32,
    pub mode: Mode,
}

/// Parse a coefficient dump produced by `write_dump`.
pub fn read_dump(bytes: &[u8]) -> Result<(DumpHeader, Vec<i16>)> {
    let err = |offset: usize, message: &str| Error::DumpParse {
        offset,
        message: message.to_string(),
    };
    if bytes.len() < 14 {
        return Err(err(bytes.len(), "truncated header"));
    }
    if bytes[0..4] != DUMP_MAGIC {
        return Err(err(0, "bad magic"));
    }
    let width = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let octaves = bytes[12] as u32;
    let mode = match bytes[13] {
        0 => Mode::Fixed,
        1 => Mode::Float,
        _ => return Err(err(13, "unknown mode byte")),
    };
    let want = width * height * 2;
    if bytes.len() - 14 != want {
        return Err(err(bytes.len(), "payload size mismatch"));
    }
    let words = bytes[14..]
        .chunks_exact(2)
        .map(|c| i16::from_le_bytes([c[0], c[1]]))
        .collect();
    Ok((DumpHeader { width, height, octaves, mode }, words))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::canonical_coeffs;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(w: usize, h: usize, seed: u64) -> ImagePlane {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Plane::from_vec(w, h, (0..w * h).map(|_| rng.gen_range(-128..=127)).collect()).unwrap()
    }

    fn to_float(p: &ImagePlane) -> Plane<f64> {
        Plane::from_vec(p.width, p.height, p.data.iter().map(|&v| v as f64).collect()).unwrap()
    }

    #[test]
    fn zero_image_zero_bands() {
        let coeffs = canonical_coeffs();
        let img: Plane<f64> = Plane::new(8, 8);
        let b = forward_octave(&img, &coeffs).unwrap();
        for p in [&b.ll, &b.lh, &b.hl, &b.hh] {
            assert_eq!((p.width, p.height), (4, 4));
            assert!(p.data.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn constant_image_detail_bands_vanish() {
        let coeffs = canonical_coeffs();
        let img = Plane::from_vec(8, 8, vec![19.0; 64]).unwrap();
        let b = forward_octave(&img, &coeffs).unwrap();
        for p in [&b.lh, &b.hl, &b.hh] {
            assert!(p.data.iter().all(|&v: &f64| v.abs() < 1e-9));
        }
    }

    #[test]
    fn octave_round_trip_float() {
        let coeffs = canonical_coeffs();
        let img = to_float(&random_image(8, 8, 1));
        let b = forward_octave(&img, &coeffs).unwrap();
        let r = inverse_octave(&b, &coeffs).unwrap();
        let rms = rms(&img.data, &r.data);
        assert!(rms < 1e-9, "rms {rms}");
    }

    fn rms(a: &[f64], b: &[f64]) -> f64 {
        (a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64).sqrt()
    }

    #[test]
    fn multi_octave_shapes() {
        let coeffs = canonical_coeffs();
        let img = to_float(&random_image(16, 16, 2));
        let sb = forward_multi(&img, 2, &coeffs).unwrap();
        assert_eq!(sb.coefficient_count(), 256);
        assert_eq!((sb.hl(1).width, sb.hl(1).height), (8, 8));
        assert_eq!((sb.hl(2).width, sb.hl(2).height), (4, 4));
        assert_eq!((sb.ll_deep().width, sb.ll_deep().height), (4, 4));
    }

    #[test]
    fn multi_octave_round_trip_float() {
        let coeffs = canonical_coeffs();
        for (w, h, oct) in [(16, 16, 2), (64, 64, 3), (32, 16, 2)] {
            let img = to_float(&random_image(w, h, w as u64));
            let sb = forward_multi(&img, oct, &coeffs).unwrap();
            let r = inverse_multi(&sb, &coeffs).unwrap();
            let e = rms(&img.data, &r.data);
            assert!(e < 1e-9, "{w}x{h} oct {oct}: rms {e}");
        }
    }

    #[test]
    fn single_octave_multi_matches_forward_octave() {
        let coeffs = canonical_coeffs();
        let img = random_image(8, 8, 3);
        let sb = forward_multi(&img, 1, &coeffs).unwrap();
        let b = forward_octave(&img, &coeffs).unwrap();
        assert_eq!(sb.ll_deep(), b.ll);
        assert_eq!(sb.lh(1), b.lh);
        assert_eq!(sb.hl(1), b.hl);
        assert_eq!(sb.hh(1), b.hh);
    }

    #[test]
    fn odd_dimensions_rejected() {
        let coeffs = canonical_coeffs();
        let img: Plane<f64> = Plane::new(7, 8);
        assert!(forward_octave(&img, &coeffs).is_err());
        let img: Plane<f64> = Plane::new(8, 8);
        assert!(forward_multi(&img, 4, &coeffs).is_err());
    }

    #[test]
    fn default_octave_choice() {
        assert_eq!(default_octaves(256, 256), 5);
        assert_eq!(default_octaves(16, 16), 4);
        assert_eq!(default_octaves(12, 8), 2);
        assert_eq!(default_octaves(7, 8), 0);
    }

    #[test]
    fn fixed_input_validation() {
        let coeffs = canonical_coeffs();
        let img = Plane::from_vec(2, 2, vec![0, 0, 0, 300]).unwrap();
        assert!(forward_octave(&img, &coeffs).is_err());
    }

    #[test]
    fn address_schedule_permutation_small() {
        let sched = address_schedule(4, 4, 1, PassDir::Rows).unwrap();
        let reads: usize = sched.iter().map(|l| l.reads.len()).sum();
        let writes: usize = sched.iter().map(|l| l.writes.len()).sum();
        assert_eq!((reads, writes), (16, 16));
        assert!(schedule_is_permutation(&sched, 4, (4, 4)));
    }

    #[test]
    fn octave_two_addresses_confined_to_ll_quadrant() {
        for pass in [PassDir::Rows, PassDir::Columns] {
            let sched = address_schedule(8, 8, 2, pass).unwrap();
            for ls in &sched {
                for &a in ls.reads.iter().chain(&ls.writes) {
                    let (x, y) = (a % 8, a / 8);
                    assert!(x < 4 && y < 4, "address ({x},{y}) outside LL quadrant");
                }
            }
        }
    }

    #[test]
    fn total_write_count_over_all_passes() {
        let (w, h, octaves) = (16, 8, 3);
        let mut writes = 0usize;
        for o in 1..=octaves {
            for pass in [PassDir::Rows, PassDir::Columns] {
                let sched = address_schedule(w, h, o, pass).unwrap();
                writes += sched.iter().map(|l| l.writes.len()).sum::<usize>();
            }
        }
        // Two passes per octave over the shrinking active region.
        let expect: usize = (0..octaves).map(|o| 2 * (w >> o) * (h >> o)).sum();
        assert_eq!(writes, expect);
    }

    #[test]
    fn inplace_transform_matches_plain_and_is_hazard_free() {
        let coeffs = canonical_coeffs();
        let img = random_image(16, 16, 9);
        let plain = forward_multi(&img, 2, &coeffs).unwrap();
        let (sb, mem) = forward_multi_inplace(&img, 2, &coeffs).unwrap();
        assert_eq!(sb.buffer, plain.buffer);
        assert_eq!(mem.cells.len(), 256);
        assert_eq!(mem.pass_ranges.len(), 4);
        for &range in &mem.pass_ranges {
            assert!(mem.pass_is_hazard_free(range));
        }
    }

    #[test]
    fn dump_round_trip() {
        let coeffs = canonical_coeffs();
        let img = random_image(16, 16, 4);
        let sb = forward_multi(&img, 2, &coeffs).unwrap();
        let bytes = write_dump(&sb);
        let (hdr, words) = read_dump(&bytes).unwrap();
        assert_eq!(hdr, DumpHeader { width: 16, height: 16, octaves: 2, mode: Mode::Fixed });
        assert_eq!(words.len(), 256);
        for (&w, &v) in words.iter().zip(&sb.buffer.data) {
            assert_eq!(w as i32, v);
        }
        assert!(read_dump(&bytes[..10]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(read_dump(&bad).is_err());
    }
}
