//! Deterministic synthetic grayscale tiles with natural-image statistics:
//! smooth large-scale structure, mid-scale texture, and light grain.
//! Integer arithmetic only, so the pixels are identical on every platform.

use crate::dwt2d::{ImagePlane, Plane};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bilinear interpolation of a coarse random grid, cell size `cell`.
fn smooth_layer(
    rng: &mut ChaCha8Rng,
    width: usize,
    height: usize,
    cell: usize,
    amplitude: i32,
) -> Vec<i32> {
    let gw = width / cell + 2;
    let gh = height / cell + 2;
    let grid: Vec<i32> = (0..gw * gh)
        .map(|_| rng.gen_range(-amplitude..=amplitude))
        .collect();
    let mut out = Vec::with_capacity(width * height);
    let c = cell as i32;
    for y in 0..height {
        let (cy, fy) = (y / cell, (y % cell) as i32);
        for x in 0..width {
            let (cx, fx) = (x / cell, (x % cell) as i32);
            let g = |dx: usize, dy: usize| grid[(cy + dy) * gw + cx + dx];
            let top = g(0, 0) * (c - fx) + g(1, 0) * fx;
            let bot = g(0, 1) * (c - fx) + g(1, 1) * fx;
            out.push((top * (c - fy) + bot * fy) / (c * c));
        }
    }
    out
}

/// A width-by-height tile of level-shifted 8-bit pixels in [-128, 127].
/// The same (dimensions, seed) always produce the same pixels.
pub fn natural_tile(width: usize, height: usize, seed: u64) -> ImagePlane {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coarse = smooth_layer(&mut rng, width, height, 16.min(width).min(height), 96);
    let medium = smooth_layer(&mut rng, width, height, 4.min(width).min(height), 24);
    let data = coarse
        .iter()
        .zip(&medium)
        .map(|(&a, &b)| {
            let grain = rng.gen_range(-2..=2);
            (a + b + grain).clamp(-128, 127)
        })
        .collect();
    Plane::from_vec(width, height, data).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = natural_tile(64, 64, 42);
        let b = natural_tile(64, 64, 42);
        assert_eq!(a, b);
        let c = natural_tile(64, 64, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn pixels_cover_the_signed_range() {
        let t = natural_tile(256, 256, 7);
        assert!(t.data.iter().all(|&v| (-128..=127).contains(&v)));
        let lo = t.data.iter().min().unwrap();
        let hi = t.data.iter().max().unwrap();
        assert!(*lo < -40 && *hi > 40, "dynamic range too small: {lo}..{hi}");
    }

    #[test]
    fn neighboring_pixels_correlate() {
        // Natural-image statistics: adjacent pixels differ far less than
        // the full dynamic range on average.
        let t = natural_tile(128, 128, 3);
        let mut acc = 0i64;
        let mut n = 0i64;
        for y in 0..t.height {
            for x in 1..t.width {
                acc += (t.get(x, y) - t.get(x - 1, y)).abs() as i64;
                n += 1;
            }
        }
        let mean_step = acc as f64 / n as f64;
        assert!(mean_step < 12.0, "mean adjacent step {mean_step}");
    }
}
