//! Quality and cost metrics: PSNR, the coefficient-rounding-error study,
//! and the logic-element area / critical-path model of the five designs.

use crate::dwt2d::{forward_region_with, inverse_region_with, ImagePlane, Plane};
use crate::error::{Error, Result};
use crate::fir::{self, FirCoeffs};
use crate::fixpoint::CoeffSet;
use crate::lifting;
use crate::rtlsim::{build_design, DesignKind, PipelineModel};

/// One PSNR measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct PsnrResult {
    pub mse: f64,
    /// Decibels; infinite when the images are identical.
    pub psnr_db: f64,
    pub method: String,
}

/// Peak signal-to-noise ratio of two 8-bit images (pixel domain 0..=255).
pub fn psnr(original: &ImagePlane, reconstructed: &ImagePlane) -> Result<PsnrResult> {
    psnr_labeled(original, reconstructed, "psnr")
}

pub fn psnr_labeled(
    original: &ImagePlane,
    reconstructed: &ImagePlane,
    method: &str,
) -> Result<PsnrResult> {
    if original.width != reconstructed.width || original.height != reconstructed.height {
        return Err(Error::Shape(format!(
            "psnr dimensions differ: {}x{} vs {}x{}",
            original.width, original.height, reconstructed.width, reconstructed.height
        )));
    }
    let n = original.data.len() as f64;
    let sse: f64 = original
        .data
        .iter()
        .zip(&reconstructed.data)
        .map(|(&a, &b)| {
            let d = (a - b) as f64;
            d * d
        })
        .sum();
    let mse = sse / n;
    let psnr_db = if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0f64 * 255.0 / mse).log10()
    };
    Ok(PsnrResult {
        mse,
        psnr_db,
        method: method.to_string(),
    })
}

/// The four transform paths compared by the rounding-error study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyMethod {
    FirFloat,
    FirInteger,
    LiftingFloat,
    LiftingFixed,
}

impl StudyMethod {
    pub const ALL: [StudyMethod; 4] = [
        StudyMethod::FirFloat,
        StudyMethod::FirInteger,
        StudyMethod::LiftingFloat,
        StudyMethod::LiftingFixed,
    ];

    pub fn label(self) -> &'static str {
        match self {
            StudyMethod::FirFloat => "fir-float",
            StudyMethod::FirInteger => "fir-integer",
            StudyMethod::LiftingFloat => "lifting-float",
            StudyMethod::LiftingFixed => "lifting-fixed",
        }
    }
}

impl std::fmt::Display for StudyMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

fn round_half_away(x: f64) -> i32 {
    x.round() as i32
}

/// Forward-transform a tile with the given method, multi-octave, and
/// return the integer coefficient buffer the hardware would emit.
fn study_forward(
    tile: &ImagePlane,
    octaves: u32,
    method: StudyMethod,
    coeffs: &CoeffSet,
) -> Result<Plane<i32>> {
    match method {
        StudyMethod::FirFloat | StudyMethod::LiftingFloat => {
            let mut buf = Plane::from_vec(
                tile.width,
                tile.height,
                tile.data.iter().map(|&v| v as f64).collect(),
            )?;
            let taps = FirCoeffs::float_9_7();
            for o in 0..octaves {
                let (w, h) = (tile.width >> o, tile.height >> o);
                let fwd: &dyn Fn(&[f64]) -> crate::Result<lifting::BandPair<f64>> =
                    match method {
                        StudyMethod::FirFloat => &|s| fir::forward_float(s, &taps),
                        _ => &|s| lifting::forward_float(s, coeffs),
                    };
                forward_region_with(&mut buf, w, h, fwd)?;
            }
            Plane::from_vec(
                buf.width,
                buf.height,
                buf.data.iter().map(|&v| round_half_away(v)).collect(),
            )
        }
        StudyMethod::FirInteger | StudyMethod::LiftingFixed => {
            let mut buf = tile.clone();
            let taps = FirCoeffs::q8_9_7();
            for o in 0..octaves {
                let (w, h) = (tile.width >> o, tile.height >> o);
                let fwd: &dyn Fn(&[i32]) -> crate::Result<lifting::BandPair<i32>> =
                    match method {
                        StudyMethod::FirInteger => &|s| fir::forward_q8(s, &taps),
                        _ => &|s| lifting::forward_fixed_wide(s, coeffs),
                    };
                forward_region_with(&mut buf, w, h, fwd)?;
            }
            Ok(buf)
        }
    }
}

/// Reconstruct integer coefficients with the float inverse and clamp to
/// the 8-bit pixel range.
fn study_reconstruct(
    coeff_buf: &Plane<i32>,
    octaves: u32,
    coeffs: &CoeffSet,
) -> Result<ImagePlane> {
    let mut buf = Plane::from_vec(
        coeff_buf.width,
        coeff_buf.height,
        coeff_buf.data.iter().map(|&v| v as f64).collect(),
    )?;
    for o in (0..octaves).rev() {
        let (w, h) = (buf.width >> o, buf.height >> o);
        inverse_region_with(&mut buf, w, h, &|b| lifting::inverse_float(b, coeffs))?;
    }
    // Back to level-shifted integers, clamped to the pixel range.
    Plane::from_vec(
        buf.width,
        buf.height,
        buf.data
            .iter()
            .map(|&v| (round_half_away(v) + 128).clamp(0, 255) - 128)
            .collect(),
    )
}

/// Coefficient-rounding error study: transform the tile along the four
/// paths (coefficients rounded to integers at output, as the hardware
/// emits integers), reconstruct each with the float-coefficient inverse,
/// clamp, and report PSNR per path.
pub fn rounding_error_study(
    tile: &ImagePlane,
    octaves: u32,
    coeffs: &CoeffSet,
) -> Result<Vec<PsnrResult>> {
    let original_pixels = Plane::from_vec(
        tile.width,
        tile.height,
        tile.data.iter().map(|&v| v + 128).collect(),
    )?;
    let mut rows = Vec::with_capacity(4);
    for method in StudyMethod::ALL {
        let coeff_buf = study_forward(tile, octaves, method, coeffs)?;
        let rec = study_reconstruct(&coeff_buf, octaves, coeffs)?;
        let rec_pixels = Plane::from_vec(
            rec.width,
            rec.height,
            rec.data.iter().map(|&v| v + 128).collect(),
        )?;
        rows.push(psnr_labeled(&original_pixels, &rec_pixels, method.label())?);
    }
    Ok(rows)
}

/// Logic elements for one ripple adder of the given result width.
pub fn adder_le(width: u32, structural: bool) -> u32 {
    width * if structural { 2 } else { 1 }
}

/// Logic elements per register bit; the area model's assumption.
pub const REGISTER_LE_PER_BIT: u32 = 1;

/// Logic elements for a generic integer multiplier modeled as its full
/// partial-product adder array at behavioral rates.
pub fn multiplier_le(operand_width: u32, const_width: u32) -> u32 {
    (const_width - 1) * (operand_width + const_width)
}

/// Estimated logic-element cost of a built model.
pub fn area_estimate(model: &PipelineModel) -> u32 {
    let structural = model.is_structural();
    let adders: u32 = model
        .adder_widths()
        .iter()
        .map(|&(_, w)| adder_le(w, structural))
        .sum();
    let muls: u32 = model
        .multiplier_dims()
        .iter()
        .map(|&(ow, cw)| multiplier_le(ow, cw))
        .sum();
    adders + muls + model.register_bits() * REGISTER_LE_PER_BIT
}

/// Area, depth, and timing summary of one design.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignReport {
    pub kind: DesignKind,
    pub le_estimate: u32,
    pub adder_count: usize,
    pub multiplier_count: usize,
    pub critical_path_adders: u32,
    pub latency: u32,
    pub stage_count: u32,
    /// 1 / critical_path_adders: a dimensionless clock-rate stand-in.
    pub max_freq_proxy: f64,
}

/// Build all five designs and summarize their trade-offs.
pub fn tradeoff_report(coeffs: &CoeffSet) -> Vec<DesignReport> {
    DesignKind::ALL
        .iter()
        .map(|&kind| {
            let m = build_design(kind, coeffs);
            let cp = m.critical_path_adders();
            DesignReport {
                kind,
                le_estimate: area_estimate(&m),
                adder_count: m.adder_count(),
                multiplier_count: m.multiplier_dims().len(),
                critical_path_adders: cp,
                latency: m.latency(),
                stage_count: m.stage_count(),
                max_freq_proxy: 1.0 / cp as f64,
            }
        })
        .collect()
}

/// Aligned human-readable table of the trade-off report.
pub fn render_table(reports: &[DesignReport]) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "{:<9} {:>9} {:>7} {:>6} {:>10} {:>7} {:>10}\n",
        "design", "area(LE)", "adders", "muls", "crit.path", "stages", "freq.proxy"
    ));
    for r in reports {
        s.push_str(&format!(
            "{:<9} {:>9} {:>7} {:>6} {:>10} {:>7} {:>10.4}\n",
            format!("design {}", r.kind.index()),
            r.le_estimate,
            r.adder_count,
            r.multiplier_count,
            r.critical_path_adders,
            r.stage_count,
            r.max_freq_proxy,
        ));
    }
    s
}

/// Line-oriented key=value rendering of the trade-off report.
pub fn render_machine(reports: &[DesignReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&format!(
            "design={} area_le={} adders={} multipliers={} critical_path_adders={} \
             latency={} stages={} freq_proxy={:.6}\n",
            r.kind.index(),
            r.le_estimate,
            r.adder_count,
            r.multiplier_count,
            r.critical_path_adders,
            r.latency,
            r.stage_count,
            r.max_freq_proxy,
        ));
    }
    s
}
