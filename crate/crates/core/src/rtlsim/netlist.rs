//! Register/wire network representation shared by the five datapath designs.
//!
//! A design is a list of combinational nodes (wires) plus a list of
//! registers. Every cycle the wires are evaluated in definition order from
//! the registers' current outputs, then all registers latch. Structural
//! designs evaluate each addition through the gate-level ripple-carry chain;
//! behavioral designs use host integer addition. Either way the carried
//! values are exact, so the five designs emit identical streams.
//!
//! Widths are sized from sound value intervals propagated at build time.
//! The named lifting-node registers additionally carry their architectural
//! declared ranges, which the runtime range check enforces.

use super::gates::{ripple_add, width_for_range, Word};
use crate::fixpoint::CoeffName;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Src {
    InputEven,
    InputOdd,
    Reg(usize),
    Wire(usize),
}

/// A value reference: a source optionally shifted left and/or negated.
/// Shifts and negation are wiring, not arithmetic stages.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Ref {
    pub src: Src,
    pub lshift: u8,
    pub negate: bool,
}

impl Ref {
    pub fn shl(self, s: u8) -> Ref {
        Ref {
            lshift: self.lshift + s,
            ..self
        }
    }

    pub fn neg(self) -> Ref {
        Ref {
            negate: !self.negate,
            ..self
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum NodeOp {
    /// One hardware adder.
    Add {
        a: Ref,
        b: Ref,
        block: CoeffName,
        a_width: u32,
        b_width: u32,
    },
    /// Behavioral generic constant multiplier (design 1 only).
    Mul {
        a: Ref,
        constant: i32,
        const_width: u32,
        a_width: u32,
    },
    /// 8-bit arithmetic right shift (scale restore; wiring).
    Sar8 { a: Ref },
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub op: NodeOp,
    pub stage: u8,
    pub range: (i64, i64),
}

/// Architectural description of one pipeline register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterSpec {
    pub name: String,
    /// Architectural storage width in bits.
    pub width: u32,
    /// Values the register is declared to hold; latching outside this
    /// range is an overflow fault when checking is enabled.
    pub declared_range: (i64, i64),
}

#[derive(Debug, Clone)]
pub(crate) struct RegDef {
    pub spec: RegisterSpec,
    pub input: Ref,
    pub stage: u8,
    /// Sound (worst-case) value interval; the gate-level width.
    pub sound: (i64, i64),
}

#[derive(Debug, Clone)]
pub(crate) struct Netlist {
    pub nodes: Vec<Node>,
    pub regs: Vec<RegDef>,
    pub out_low: usize,
    pub out_high: usize,
    pub latency: u32,
    pub structural: bool,
}

/// Architectural width + declared range for the named lifting registers.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ArchSpec {
    pub width: u32,
    pub min: i64,
    pub max: i64,
}

pub(crate) const INPUT_SPEC: ArchSpec = ArchSpec { width: 8, min: -128, max: 127 };
pub(crate) const ALPHA_SPEC: ArchSpec = ArchSpec { width: 11, min: -530, max: 530 };
pub(crate) const BETA_SPEC: ArchSpec = ArchSpec { width: 9, min: -184, max: 184 };
pub(crate) const GAMMA_SPEC: ArchSpec = ArchSpec { width: 9, min: -205, max: 205 };
pub(crate) const DELTA_SPEC: ArchSpec = ArchSpec { width: 10, min: -366, max: 366 };
pub(crate) const LOW_SPEC: ArchSpec = ArchSpec { width: 10, min: -298, max: 298 };
pub(crate) const HIGH_SPEC: ArchSpec = ArchSpec { width: 9, min: -252, max: 252 };

pub(crate) struct Builder {
    pub nodes: Vec<Node>,
    pub regs: Vec<RegDef>,
    pub structural: bool,
}

impl Builder {
    pub fn new(structural: bool) -> Self {
        Builder {
            nodes: Vec::new(),
            regs: Vec::new(),
            structural,
        }
    }

    fn src_range(&self, src: Src) -> (i64, i64) {
        match src {
            Src::InputEven | Src::InputOdd => (INPUT_SPEC.min, INPUT_SPEC.max),
            Src::Reg(i) => self.regs[i].sound,
            Src::Wire(i) => self.nodes[i].range,
        }
    }

    pub fn ref_range(&self, r: Ref) -> (i64, i64) {
        let (mut lo, mut hi) = self.src_range(r.src);
        if r.negate {
            (lo, hi) = (-hi, -lo);
        }
        (lo << r.lshift, hi << r.lshift)
    }

    fn push_node(&mut self, op: NodeOp, stage: u8, range: (i64, i64)) -> Ref {
        self.nodes.push(Node { op, stage, range });
        Ref {
            src: Src::Wire(self.nodes.len() - 1),
            lshift: 0,
            negate: false,
        }
    }

    pub fn add(&mut self, stage: u8, a: Ref, b: Ref, block: CoeffName) -> Ref {
        let (alo, ahi) = self.ref_range(a);
        let (blo, bhi) = self.ref_range(b);
        let a_width = width_for_range(alo, ahi);
        let b_width = width_for_range(blo, bhi);
        self.push_node(
            NodeOp::Add { a, b, block, a_width, b_width },
            stage,
            (alo + blo, ahi + bhi),
        )
    }

    pub fn mul(&mut self, stage: u8, a: Ref, constant: i32, const_width: u32) -> Ref {
        let (lo, hi) = self.ref_range(a);
        let a_width = width_for_range(lo, hi);
        let c = constant as i64;
        let ends = [lo * c, hi * c];
        self.push_node(
            NodeOp::Mul { a, constant, const_width, a_width },
            stage,
            (*ends.iter().min().unwrap(), *ends.iter().max().unwrap()),
        )
    }

    pub fn sar8(&mut self, stage: u8, a: Ref) -> Ref {
        let (lo, hi) = self.ref_range(a);
        self.push_node(NodeOp::Sar8 { a }, stage, (lo >> 8, hi >> 8))
    }

    /// Register with an architectural spec (the named lifting nodes).
    pub fn reg_arch(&mut self, name: &str, stage: u8, input: Ref, arch: ArchSpec) -> Ref {
        let sound = self.ref_range(input);
        self.regs.push(RegDef {
            spec: RegisterSpec {
                name: name.to_string(),
                width: arch.width,
                declared_range: (arch.min, arch.max),
            },
            input,
            stage,
            sound,
        });
        Ref {
            src: Src::Reg(self.regs.len() - 1),
            lshift: 0,
            negate: false,
        }
    }

    /// Register sized from its sound interval (partial sums, rides).
    pub fn reg_sound(&mut self, name: &str, stage: u8, input: Ref) -> Ref {
        let sound = self.ref_range(input);
        self.regs.push(RegDef {
            spec: RegisterSpec {
                name: name.to_string(),
                width: width_for_range(sound.0, sound.1),
                declared_range: sound,
            },
            input,
            stage,
            sound,
        });
        Ref {
            src: Src::Reg(self.regs.len() - 1),
            lshift: 0,
            negate: false,
        }
    }

    /// Delay register carrying the same architectural spec as its source.
    pub fn delay_arch(&mut self, name: &str, stage: u8, src: Ref, arch: ArchSpec) -> Ref {
        self.reg_arch(name, stage, src, arch)
    }

    pub fn finish(self, out_low: usize, out_high: usize, latency: u32) -> Netlist {
        Netlist {
            nodes: self.nodes,
            regs: self.regs,
            out_low,
            out_high,
            latency,
            structural: self.structural,
        }
    }

    pub fn reg_index(&self, r: Ref) -> usize {
        match r.src {
            Src::Reg(i) => i,
            _ => panic!("expected a register reference"),
        }
    }
}

impl Netlist {
    /// Evaluate one clock: wires from current register outputs, then the
    /// next register values. `wires` and `next` are caller-owned scratch.
    pub fn eval_cycle(
        &self,
        input: (i64, i64),
        reg_vals: &[i64],
        wires: &mut Vec<i64>,
        next: &mut Vec<i64>,
    ) {
        wires.clear();
        let read = |r: &Ref, wires: &[i64]| -> i64 {
            let base = match r.src {
                Src::InputEven => input.0,
                Src::InputOdd => input.1,
                Src::Reg(i) => reg_vals[i],
                Src::Wire(i) => wires[i],
            };
            let v = if r.negate { -base } else { base };
            v << r.lshift
        };
        for node in &self.nodes {
            let v = match &node.op {
                NodeOp::Add { a, b, a_width, b_width, .. } => {
                    let av = read(a, wires);
                    let bv = read(b, wires);
                    if self.structural {
                        ripple_add(Word::new(av, *a_width), Word::new(bv, *b_width)).value
                    } else {
                        av + bv
                    }
                }
                NodeOp::Mul { a, constant, .. } => read(a, wires) * *constant as i64,
                NodeOp::Sar8 { a } => read(a, wires) >> 8,
            };
            wires.push(v);
        }
        next.clear();
        for reg in &self.regs {
            next.push(read(&reg.input, wires));
        }
    }

    /// Longest adder chain between register boundaries, in adders. A
    /// behavioral multiplier counts as its partial-product array depth.
    pub fn critical_path_adders(&self) -> u32 {
        let mut depth = vec![0u32; self.nodes.len()];
        let ref_depth = |r: &Ref, depth: &[u32]| match r.src {
            Src::Wire(i) => depth[i],
            _ => 0,
        };
        let mut worst = 0;
        for (i, node) in self.nodes.iter().enumerate() {
            depth[i] = match &node.op {
                NodeOp::Add { a, b, .. } => 1 + ref_depth(a, &depth).max(ref_depth(b, &depth)),
                NodeOp::Mul { a, const_width, .. } => {
                    (const_width - 1) + ref_depth(a, &depth)
                }
                NodeOp::Sar8 { a } => ref_depth(a, &depth),
            };
            worst = worst.max(depth[i]);
        }
        for reg in &self.regs {
            worst = worst.max(ref_depth(&reg.input, &depth));
        }
        worst
    }
}
