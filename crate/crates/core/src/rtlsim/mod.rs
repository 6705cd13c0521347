//! Cycle-accurate register-transfer simulation of the five 1D datapath
//! designs: timed stage networks, per-register range enforcement, and
//! gate-level full-adder arithmetic for the structural variants.

mod build;
mod gates;
mod netlist;

pub use gates::{full_adder, ripple_add, width_for_range, Word};
pub use netlist::RegisterSpec;

use crate::error::{Error, Result};
use crate::fixpoint::{CoeffName, CoeffSet};
use crate::lifting::{check_even, extend_unchecked, BandPair, INPUT_MAX, INPUT_MIN};
use netlist::{Netlist, NodeOp, Src};

/// The five implementation variants, indexed 1-5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DesignKind {
    /// Behavioral description with generic integer multipliers.
    BehavioralMultiplier,
    /// Behavioral description with shifted integer adders.
    BehavioralShiftAdd,
    /// Behavioral description with pipelined shifted integer adders.
    BehavioralPipelinedShiftAdd,
    /// Structural (full-adder) description with shifted integer adders.
    StructuralShiftAdd,
    /// Structural description with pipelined shifted integer adders.
    StructuralPipelinedShiftAdd,
}

impl DesignKind {
    pub const ALL: [DesignKind; 5] = [
        DesignKind::BehavioralMultiplier,
        DesignKind::BehavioralShiftAdd,
        DesignKind::BehavioralPipelinedShiftAdd,
        DesignKind::StructuralShiftAdd,
        DesignKind::StructuralPipelinedShiftAdd,
    ];

    pub fn index(self) -> u8 {
        match self {
            DesignKind::BehavioralMultiplier => 1,
            DesignKind::BehavioralShiftAdd => 2,
            DesignKind::BehavioralPipelinedShiftAdd => 3,
            DesignKind::StructuralShiftAdd => 4,
            DesignKind::StructuralPipelinedShiftAdd => 5,
        }
    }

    pub fn from_index(i: u8) -> Option<DesignKind> {
        DesignKind::ALL.get(i.checked_sub(1)? as usize).copied()
    }

    pub fn is_structural(self) -> bool {
        matches!(
            self,
            DesignKind::StructuralShiftAdd | DesignKind::StructuralPipelinedShiftAdd
        )
    }

    pub fn is_pipelined(self) -> bool {
        matches!(
            self,
            DesignKind::BehavioralPipelinedShiftAdd | DesignKind::StructuralPipelinedShiftAdd
        )
    }
}

impl std::fmt::Display for DesignKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "design {}", self.index())
    }
}

/// One pipeline stage: its registers and the additions it performs.
#[derive(Debug, Clone)]
pub struct StageDesc {
    pub index: u8,
    pub additions: Vec<String>,
    pub registers: Vec<String>,
}

/// A timed register/stage network for one design.
///
/// Single-owner mutable state; clone to run copies on other threads.
#[derive(Debug, Clone)]
pub struct PipelineModel {
    kind: DesignKind,
    nets: Netlist,
    reg_vals: Vec<i64>,
    wires: Vec<i64>,
    next: Vec<i64>,
    cycle: u64,
    range_check: bool,
    halted: Option<Error>,
}

/// Build the timed model of one design from a constant set.
pub fn build_design(kind: DesignKind, coeffs: &CoeffSet) -> PipelineModel {
    let nets = match kind {
        DesignKind::BehavioralMultiplier => build::build_8stage(coeffs, true, false),
        DesignKind::BehavioralShiftAdd => build::build_8stage(coeffs, false, false),
        DesignKind::BehavioralPipelinedShiftAdd => build::build_21stage(coeffs, false),
        DesignKind::StructuralShiftAdd => build::build_8stage(coeffs, false, true),
        DesignKind::StructuralPipelinedShiftAdd => build::build_21stage(coeffs, true),
    };
    let n_regs = nets.regs.len();
    PipelineModel {
        kind,
        nets,
        reg_vals: vec![0; n_regs],
        wires: Vec::new(),
        next: Vec::new(),
        cycle: 0,
        range_check: true,
        halted: None,
    }
}

impl PipelineModel {
    pub fn kind(&self) -> DesignKind {
        self.kind
    }

    /// Cycles from an input pair entering to its output pair emerging.
    pub fn latency(&self) -> u32 {
        self.nets.latency
    }

    /// Stage count equals the latency for these designs.
    pub fn stage_count(&self) -> u32 {
        self.nets.latency
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    /// Enable or disable the declared-range overflow fault check.
    pub fn set_range_check(&mut self, on: bool) {
        self.range_check = on;
    }

    /// Clear all registers and the cycle counter.
    pub fn reset(&mut self) {
        self.reg_vals.iter_mut().for_each(|v| *v = 0);
        self.cycle = 0;
        self.halted = None;
    }

    pub fn register_specs(&self) -> impl Iterator<Item = &RegisterSpec> {
        self.nets.regs.iter().map(|r| &r.spec)
    }

    /// Current register contents, for traces.
    pub fn register_values(&self) -> impl Iterator<Item = (&str, i64)> {
        self.nets
            .regs
            .iter()
            .zip(&self.reg_vals)
            .map(|(r, &v)| (r.spec.name.as_str(), v))
    }

    /// Advance one clock. `input` carries the next (even, odd) sample pair,
    /// or `None` to flush. Returns the output pair that emerged this cycle
    /// once the pipe has filled; the pair fed at call `c` (counting from 0
    /// after reset) is returned by call `c + latency`.
    pub fn step(&mut self, input: Option<(i8, i8)>) -> Result<Option<(i64, i64)>> {
        if let Some(e) = &self.halted {
            return Err(e.clone());
        }
        let iv = input
            .map(|(e, o)| (e as i64, o as i64))
            .unwrap_or((0, 0));
        let (regs, nets) = (&self.reg_vals, &self.nets);
        nets.eval_cycle(iv, regs, &mut self.wires, &mut self.next);
        if self.range_check {
            for (reg, &v) in self.nets.regs.iter().zip(&self.next) {
                let (min, max) = reg.spec.declared_range;
                if v < min || v > max {
                    let fault = Error::RegisterOverflow {
                        register: reg.spec.name.clone(),
                        cycle: self.cycle,
                        value: v,
                        min,
                        max,
                    };
                    self.halted = Some(fault.clone());
                    return Err(fault);
                }
            }
        }
        std::mem::swap(&mut self.reg_vals, &mut self.next);
        self.cycle += 1;
        if self.cycle > self.nets.latency as u64 {
            Ok(Some((
                self.reg_vals[self.nets.out_low],
                self.reg_vals[self.nets.out_high],
            )))
        } else {
            Ok(None)
        }
    }

    /// Ordered stage descriptions: registers and additions per stage.
    pub fn stages(&self) -> Vec<StageDesc> {
        let mut stages: Vec<StageDesc> = (1..=self.nets.latency as u8)
            .map(|index| StageDesc {
                index,
                additions: Vec::new(),
                registers: Vec::new(),
            })
            .collect();
        for node in &self.nets.nodes {
            if let NodeOp::Add { a, b, block, .. } = &node.op {
                let s = &mut stages[node.stage as usize - 1];
                s.additions
                    .push(format!("{}: {} + {}", block, self.render(a), self.render(b)));
            }
        }
        for reg in &self.nets.regs {
            stages[reg.stage as usize - 1]
                .registers
                .push(reg.spec.name.clone());
        }
        stages
    }

    fn render(&self, r: &netlist::Ref) -> String {
        let base = match r.src {
            Src::InputEven => "even_in".to_string(),
            Src::InputOdd => "odd_in".to_string(),
            Src::Reg(i) => self.nets.regs[i].spec.name.clone(),
            Src::Wire(i) => format!("w{i}"),
        };
        let mut s = if r.negate { format!("-{base}") } else { base };
        if r.lshift > 0 {
            s = format!("{s}<<{}", r.lshift);
        }
        s
    }

    /// Longest adder chain between registers (generic multipliers count as
    /// their partial-product array depth).
    pub fn critical_path_adders(&self) -> u32 {
        self.nets.critical_path_adders()
    }

    /// Result width of every adder, with its coefficient block.
    pub fn adder_widths(&self) -> Vec<(CoeffName, u32)> {
        self.nets
            .nodes
            .iter()
            .filter_map(|n| match &n.op {
                NodeOp::Add { block, .. } => {
                    Some((*block, width_for_range(n.range.0, n.range.1)))
                }
                _ => None,
            })
            .collect()
    }

    pub fn adder_count(&self) -> usize {
        self.adder_widths().len()
    }

    pub fn adder_count_for(&self, block: CoeffName) -> usize {
        self.adder_widths().iter().filter(|(b, _)| *b == block).count()
    }

    /// (operand width, constant width) of each generic multiplier.
    pub fn multiplier_dims(&self) -> Vec<(u32, u32)> {
        self.nets
            .nodes
            .iter()
            .filter_map(|n| match &n.op {
                NodeOp::Mul { a_width, const_width, .. } => Some((*a_width, *const_width)),
                _ => None,
            })
            .collect()
    }

    /// Total register storage in bits (architectural widths).
    pub fn register_bits(&self) -> u32 {
        self.nets.regs.iter().map(|r| r.spec.width).sum()
    }

    pub fn is_structural(&self) -> bool {
        self.nets.structural
    }
}

/// The deterministic stage assignment of a pipelined design (3 or 5):
/// which additions run in which of the 21 stages. `None` for the
/// unpipelined designs.
pub fn stage_schedule(kind: DesignKind, coeffs: &CoeffSet) -> Option<Vec<StageDesc>> {
    if !kind.is_pipelined() {
        return None;
    }
    Some(build_design(kind, coeffs).stages())
}

/// Drive a whole signal through a model: symmetric extension, streaming,
/// flush, and edge-output trimming. The result is bit-identical to the
/// combinational fixed-mode transform of the same samples.
pub fn run_stream(model: &mut PipelineModel, s: &[i32]) -> Result<BandPair<i32>> {
    run_stream_with(model, s, |_, _| {})
}

/// `run_stream` with a per-cycle observer, called after every clock with
/// the cycle number and the latched model state (trace output).
pub fn run_stream_with<F>(
    model: &mut PipelineModel,
    s: &[i32],
    mut after_step: F,
) -> Result<BandPair<i32>>
where
    F: FnMut(u64, &PipelineModel),
{
    check_even(s.len())?;
    for (index, &value) in s.iter().enumerate() {
        if !(INPUT_MIN..=INPUT_MAX).contains(&value) {
            return Err(Error::SampleOutOfRange {
                index,
                value: value as i64,
            });
        }
    }
    model.reset();
    let half = s.len() / 2;
    // Depth-4 extension: two pairs of left context, two of right.
    let ext = extend_unchecked(s, 4, 4);
    let pairs: Vec<(i8, i8)> = ext
        .chunks_exact(2)
        .map(|p| (p[0] as i8, p[1] as i8))
        .collect();
    let latency = model.latency() as usize;
    let mut low = Vec::with_capacity(half);
    let mut high = Vec::with_capacity(half);
    // Output for stream pair j returns at call j + latency; the valid band
    // indices are stream pairs 2 ..= half + 1.
    for call in 0..latency + half + 2 {
        let input = pairs.get(call).copied();
        let out = model.step(input)?;
        after_step(model.cycle() - 1, model);
        if let Some((l, h)) = out {
            let j = call - latency;
            if (2..2 + half).contains(&j) {
                low.push(l as i32);
                high.push(h as i32);
            }
        }
    }
    Ok(BandPair { low, high })
}
