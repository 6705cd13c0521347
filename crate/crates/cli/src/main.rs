//! Command-line front end: PGM in, coefficient dumps, round trips,
//! datapath simulation, the rounding-error study, and the design report.

mod pgm;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dwt97::dwt2d::{
    default_octaves, forward_multi, inverse_multi, write_dump, ImagePlane, Plane,
};
use dwt97::fixpoint::{CoeffSet, CoeffVariant};
use dwt97::lifting::Mode;
use dwt97::metrics;
use dwt97::rtlsim::{build_design, run_stream_with, DesignKind};
use dwt97::testimage;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dwt97",
    version,
    about = "9/7 lifting wavelet transform, datapath simulator and cost model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Float,
    Fixed,
}

impl ModeArg {
    fn mode(self) -> Mode {
        match self {
            ModeArg::Float => Mode::Float,
            ModeArg::Fixed => Mode::Fixed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoeffArg {
    /// Constants decoded from the binary two's-complement column.
    Binary,
    /// Constants from the integer-ratio column.
    Integer,
}

impl CoeffArg {
    fn set(self) -> CoeffSet {
        match self {
            CoeffArg::Binary => CoeffSet::new(CoeffVariant::BinaryColumn),
            CoeffArg::Integer => CoeffSet::new(CoeffVariant::IntegerColumn),
        }
    }
}

/// Octave count: a number or `auto` (largest supported depth, capped at 5).
#[derive(Clone, Copy)]
enum OctavesArg {
    Auto,
    Count(u32),
}

impl std::str::FromStr for OctavesArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(OctavesArg::Auto);
        }
        s.parse::<u32>()
            .map(OctavesArg::Count)
            .map_err(|_| format!("expected a number or `auto`, got `{s}`"))
    }
}

impl OctavesArg {
    fn resolve(self, w: usize, h: usize) -> Result<u32> {
        let o = match self {
            OctavesArg::Auto => default_octaves(w, h),
            OctavesArg::Count(n) => n,
        };
        if o == 0 {
            bail!("{w}x{h} image does not support any transform octave");
        }
        Ok(o)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Forward-transform a PGM image and write the coefficient dump.
    Transform {
        /// Input PGM (binary P5).
        input: PathBuf,
        /// Output coefficient dump path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "fixed")]
        mode: ModeArg,
        #[arg(long, default_value = "auto")]
        octaves: OctavesArg,
        #[arg(long, value_enum, default_value = "binary")]
        coeffs: CoeffArg,
    },
    /// Transform, reconstruct, report PSNR, and write the result PGM.
    Roundtrip {
        input: PathBuf,
        /// Output PGM path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "fixed")]
        mode: ModeArg,
        #[arg(long, default_value = "auto")]
        octaves: OctavesArg,
        #[arg(long, value_enum, default_value = "binary")]
        coeffs: CoeffArg,
    },
    /// Stream image rows through one datapath design and verify the
    /// output against the combinational transform.
    Simulate {
        /// Input PGM; omitted: a synthetic 64x64 tile from --seed.
        input: Option<PathBuf>,
        /// Design index 1-5.
        #[arg(long, default_value_t = 1)]
        design: u8,
        #[arg(long, value_enum, default_value = "binary")]
        coeffs: CoeffArg,
        /// Write a register trace of the first row (one line per cycle).
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Coefficient-rounding error study: four PSNR rows.
    Study {
        /// Input PGM; omitted: a synthetic 256x256 tile from --seed.
        input: Option<PathBuf>,
        /// Octave depth of the study (default 1).
        #[arg(long, default_value = "1")]
        octaves: OctavesArg,
        #[arg(long, value_enum, default_value = "binary")]
        coeffs: CoeffArg,
        /// Also write the rows in key=value form to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Area / critical-path / stage-count report over all five designs.
    Report {
        #[arg(long, value_enum, default_value = "binary")]
        coeffs: CoeffArg,
        /// Also write the machine-readable key=value report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dwt97: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_image(path: &Path) -> Result<ImagePlane> {
    pgm::read_pgm(path).with_context(|| format!("reading {}", path.display()))
}

fn to_float(img: &ImagePlane) -> Plane<f64> {
    Plane::from_vec(
        img.width,
        img.height,
        img.data.iter().map(|&v| v as f64).collect(),
    )
    .expect("same shape")
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Transform { input, out, mode, octaves, coeffs } => {
            let img = load_image(&input)?;
            let octaves = octaves.resolve(img.width, img.height)?;
            let set = coeffs.set();
            let bytes = match mode.mode() {
                Mode::Fixed => write_dump(&forward_multi(&img, octaves, &set)?),
                Mode::Float => write_dump(&forward_multi(&to_float(&img), octaves, &set)?),
            };
            fs::write(&out, &bytes).with_context(|| format!("writing {}", out.display()))?;
            println!(
                "transform: {}x{} octaves={} mode={} -> {} ({} bytes)",
                img.width,
                img.height,
                octaves,
                mode.mode(),
                out.display(),
                bytes.len()
            );
            Ok(())
        }
        Command::Roundtrip { input, out, mode, octaves, coeffs } => {
            let img = load_image(&input)?;
            let octaves = octaves.resolve(img.width, img.height)?;
            let set = coeffs.set();
            let rec_pixels: Vec<u8> = match mode.mode() {
                Mode::Fixed => {
                    let sb = forward_multi(&img, octaves, &set)?;
                    inverse_multi(&sb, &set)?.to_pixels()
                }
                Mode::Float => {
                    let sb = forward_multi(&to_float(&img), octaves, &set)?;
                    let rec = inverse_multi(&sb, &set)?;
                    rec.data
                        .iter()
                        .map(|&v| (v.round() as i32 + 128).clamp(0, 255) as u8)
                        .collect()
                }
            };
            let rec = ImagePlane::from_pixels(img.width, img.height, &rec_pixels)?;
            let orig_px = Plane::from_vec(
                img.width,
                img.height,
                img.data.iter().map(|&v| v + 128).collect(),
            )?;
            let rec_px = Plane::from_vec(
                img.width,
                img.height,
                rec.data.iter().map(|&v| v + 128).collect(),
            )?;
            let q = metrics::psnr(&orig_px, &rec_px)?;
            pgm::write_pgm(&out, img.width, img.height, &rec_pixels)
                .with_context(|| format!("writing {}", out.display()))?;
            println!(
                "roundtrip: {}x{} octaves={} mode={} psnr_db={:.4} mse={:.6} -> {}",
                img.width,
                img.height,
                octaves,
                mode.mode(),
                q.psnr_db,
                q.mse,
                out.display()
            );
            Ok(())
        }
        Command::Simulate { input, design, coeffs, trace, seed } => {
            let kind = DesignKind::from_index(design)
                .ok_or_else(|| anyhow::anyhow!("design index must be 1..=5, got {design}"))?;
            let img = match &input {
                Some(p) => load_image(p)?,
                None => testimage::natural_tile(64, 64, seed),
            };
            let set = coeffs.set();
            let mut model = build_design(kind, &set);
            let mut trace_file = trace
                .as_ref()
                .map(|p| {
                    fs::File::create(p).with_context(|| format!("creating {}", p.display()))
                })
                .transpose()?;
            let mut total_cycles = 0u64;
            let mut mismatches = 0usize;
            for y in 0..img.height {
                let row: Vec<i32> = (0..img.width).map(|x| img.get(x, y)).collect();
                let expect = dwt97::lifting::forward_fixed(&row, &set)?;
                let got = if y == 0 {
                    run_stream_with(&mut model, &row, |cycle, m| {
                        if let Some(f) = trace_file.as_mut() {
                            let mut line = format!("{cycle}");
                            for (name, value) in m.register_values() {
                                let _ = write!(line, "\t{name}={value}");
                            }
                            let _ = writeln!(f, "{line}");
                        }
                    })?
                } else {
                    dwt97::rtlsim::run_stream(&mut model, &row)?
                };
                total_cycles += model.cycle();
                if got != expect {
                    mismatches += 1;
                }
            }
            println!(
                "simulate: {} latency={} rows={} pairs_per_row={} cycles_per_row={} \
                 total_cycles={} oracle_match={}",
                kind,
                model.latency(),
                img.height,
                img.width / 2,
                model.latency() as usize + img.width / 2 + 2,
                total_cycles,
                mismatches == 0
            );
            if mismatches > 0 {
                bail!("{mismatches} row(s) diverged from the combinational transform");
            }
            Ok(())
        }
        Command::Study { input, octaves, coeffs, out, seed } => {
            let img = match &input {
                Some(p) => load_image(p)?,
                None => testimage::natural_tile(256, 256, seed),
            };
            let octaves = octaves.resolve(img.width, img.height)?;
            let set = coeffs.set();
            let rows = metrics::rounding_error_study(&img, octaves, &set)?;
            println!(
                "study: {}x{} octaves={octaves}",
                img.width, img.height
            );
            println!("{:<16} {:>10} {:>14}", "method", "psnr_db", "mse");
            let mut machine = String::new();
            for r in &rows {
                println!("{:<16} {:>10.4} {:>14.6}", r.method, r.psnr_db, r.mse);
                let _ = writeln!(
                    machine,
                    "method={} psnr_db={:.4} mse={:.6}",
                    r.method, r.psnr_db, r.mse
                );
            }
            if let Some(p) = out {
                fs::write(&p, machine).with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(())
        }
        Command::Report { coeffs, out } => {
            let reports = metrics::tradeoff_report(&coeffs.set());
            print!("{}", metrics::render_table(&reports));
            if let Some(p) = out {
                fs::write(&p, metrics::render_machine(&reports))
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(())
        }
    }
}
