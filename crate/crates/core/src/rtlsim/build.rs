//! Construction of the five datapath variants.
//!
//! All designs compute the same arithmetic; they differ in multiplier
//! realization (generic product vs shift-add), adder realization
//! (behavioral vs gate-level), and pipelining (8 vs 21 stages).
//!
//! 8-stage layout (designs 1, 2, 4): input capture, even/odd alignment,
//! one stage per lifting step, output scaling, output register. Each
//! lifting stage is one combinational cloud; shift-add stages chain their
//! partial products sequentially.
//!
//! 21-stage layout (designs 3, 5): every addition latches into its own
//! stage register, so no stage holds more than one adder on any path.
//! Partial products reduce in balanced levels; the lifting-side operand
//! joins the reduction pre-shifted by 8 so the floor shift can stay at the
//! stage output. The beta stage computes `z<<4 + z<<5` once and reuses it
//! shifted by two for the `<<6 + <<7` pair, saving one adder.

use super::netlist::{
    ArchSpec, Builder, Netlist, Ref, ALPHA_SPEC, BETA_SPEC, DELTA_SPEC, GAMMA_SPEC, HIGH_SPEC,
    INPUT_SPEC, LOW_SPEC,
};
use crate::fixpoint::{CoeffName, CoeffSet, ShiftAddPlan};
use crate::lifting::FixedPlans;

/// A detected shared sub-expression: bit pairs (a, a+1) and (b, b+1) with
/// the same gap, realizable as one adder output used twice.
struct Reuse {
    a: u32,
    b: u32,
}

fn find_adjacent_reuse(plan: &ShiftAddPlan) -> Option<Reuse> {
    let pos: Vec<u32> = plan
        .terms
        .iter()
        .filter(|t| t.sign > 0)
        .map(|t| t.shift)
        .collect();
    let has = |s: u32| pos.contains(&s);
    for &a in &pos {
        if has(a + 1) {
            for &b in &pos {
                if b > a + 1 && has(b + 1) {
                    return Some(Reuse { a, b });
                }
            }
        }
    }
    None
}

/// Partial products of `u`, ascending bit position, sign bit negative,
/// then the optional lifting-side operand pre-shifted by 8.
fn operand_list(plan: &ShiftAddPlan, u: Ref, lift: Option<Ref>) -> Vec<Ref> {
    let mut ops: Vec<Ref> = plan
        .terms
        .iter()
        .map(|t| {
            let r = u.shl(t.shift as u8);
            if t.sign < 0 {
                r.neg()
            } else {
                r
            }
        })
        .collect();
    if let Some(l) = lift {
        ops.push(l.shl(8));
    }
    ops
}

/// Remove the four reuse partial products from an operand list.
fn strip_reuse(plan: &ShiftAddPlan, u: Ref, lift: Option<Ref>, reuse: &Reuse) -> Vec<Ref> {
    let keep = |s: u32| s != reuse.a && s != reuse.a + 1 && s != reuse.b && s != reuse.b + 1;
    let mut ops: Vec<Ref> = plan
        .terms
        .iter()
        .filter(|t| t.sign < 0 || keep(t.shift))
        .map(|t| {
            let r = u.shl(t.shift as u8);
            if t.sign < 0 {
                r.neg()
            } else {
                r
            }
        })
        .collect();
    if let Some(l) = lift {
        ops.push(l.shl(8));
    }
    ops
}

/// One multiplication cloud of an 8-stage design: all arithmetic in a
/// single combinational stage, result floor-shifted back to scale.
fn mul_cloud(
    b: &mut Builder,
    stage: u8,
    generic_mul: bool,
    u: Ref,
    plan: &ShiftAddPlan,
    lift: Option<Ref>,
    block: CoeffName,
) -> Ref {
    if generic_mul {
        let m = b.mul(stage, u, plan.constant.scaled_int, plan.constant.bit_width);
        let f = match lift {
            Some(l) => b.add(stage, m, l.shl(8), block),
            None => m,
        };
        return b.sar8(stage, f);
    }
    let mut acc;
    let rest;
    if let Some(reuse) = find_adjacent_reuse(plan) {
        let w = b.add(stage, u.shl(reuse.a as u8), u.shl(reuse.a as u8 + 1), block);
        let mut ops = strip_reuse(plan, u, lift, &reuse);
        ops.insert(0, w.shl((reuse.b - reuse.a) as u8));
        ops.insert(0, w);
        acc = ops[0];
        rest = ops[1..].to_vec();
    } else {
        let ops = operand_list(plan, u, lift);
        acc = ops[0];
        rest = ops[1..].to_vec();
    }
    for op in rest {
        acc = b.add(stage, acc, op, block);
    }
    b.sar8(stage, acc)
}

/// Balanced pipelined reduction: `reg_levels` register levels, one adder
/// per value path per level, final add and floor shift at `out_stage`.
#[allow(clippy::too_many_arguments)]
fn tree_block(
    b: &mut Builder,
    first_stage: u8,
    reg_levels: u8,
    out_stage: u8,
    u: Ref,
    plan: &ShiftAddPlan,
    lift: Option<Ref>,
    prefix: &str,
    block: CoeffName,
    out_name: &str,
    out_spec: ArchSpec,
) -> Ref {
    debug_assert_eq!(first_stage + reg_levels, out_stage);
    let reuse = find_adjacent_reuse(plan);
    let mut ops: Vec<Ref> = match &reuse {
        Some(r) => strip_reuse(plan, u, lift, r),
        None => operand_list(plan, u, lift),
    };
    debug_assert!(ops.len() + reuse.as_ref().map_or(0, |_| 1) <= 1 << (reg_levels + 1));

    for lvl in 0..reg_levels {
        let stage = first_stage + lvl;
        let mut next: Vec<Ref> = Vec::new();
        let mut k = 0;
        let name = |k: &mut usize| {
            let n = format!("{prefix}_l{}_{}", lvl + 1, k);
            *k += 1;
            n
        };
        if lvl == 0 {
            if let Some(r) = &reuse {
                let w = b.add(stage, u.shl(r.a as u8), u.shl(r.a as u8 + 1), block);
                let wreg = b.reg_sound(&format!("{prefix}_w"), stage, w);
                // The shared sum re-enters the next level twice: as is and
                // shifted by the pair gap.
                ops.insert(0, wreg.shl((r.b - r.a) as u8));
                ops.insert(0, wreg);
                let mut rest = Vec::new();
                std::mem::swap(&mut rest, &mut ops);
                // The two reuse refs ride as registered values next level.
                next.push(rest[0]);
                next.push(rest[1]);
                let mut it = rest[2..].chunks_exact(2);
                for pair in it.by_ref() {
                    let s = b.add(stage, pair[0], pair[1], block);
                    next.push(b.reg_sound(&name(&mut k), stage, s));
                }
                for &r in it.remainder() {
                    next.push(b.reg_sound(&name(&mut k), stage, r));
                }
                ops = next;
                continue;
            }
        }
        if ops.len() > 2 {
            let mut it = ops.chunks_exact(2);
            for pair in it.by_ref() {
                let s = b.add(stage, pair[0], pair[1], block);
                next.push(b.reg_sound(&name(&mut k), stage, s));
            }
            for &r in it.remainder() {
                next.push(b.reg_sound(&name(&mut k), stage, r));
            }
        } else {
            for &r in &ops {
                next.push(b.reg_sound(&name(&mut k), stage, r));
            }
        }
        ops = next;
    }
    assert_eq!(ops.len(), 2, "{prefix}: reduction did not narrow to two operands");
    let f = b.add(out_stage, ops[0], ops[1], block);
    let s = b.sar8(out_stage, f);
    b.reg_arch(out_name, out_stage, s, out_spec)
}

/// Delay chain of `n` registers carrying an architectural spec.
fn ride(b: &mut Builder, mut r: Ref, spec: ArchSpec, base: &str, first_stage: u8, n: u8) -> Ref {
    for k in 0..n {
        r = b.delay_arch(&format!("{base}_r{}", k + 1), first_stage + k, r, spec);
    }
    r
}

const IN_E: Ref = Ref { src: super::netlist::Src::InputEven, lshift: 0, negate: false };
const IN_O: Ref = Ref { src: super::netlist::Src::InputOdd, lshift: 0, negate: false };

/// Designs 1, 2, 4: eight stages, one lifting step per stage.
pub(crate) fn build_8stage(coeffs: &CoeffSet, generic_mul: bool, structural: bool) -> Netlist {
    let p = FixedPlans::new(coeffs);
    let mut b = Builder::new(structural);

    let in_e = b.reg_arch("in_even", 1, IN_E, INPUT_SPEC);
    let in_o = b.reg_arch("in_odd", 1, IN_O, INPUT_SPEC);
    let al_e = b.delay_arch("al_even", 2, in_e, INPUT_SPEC);
    let al_o = b.delay_arch("al_odd", 2, in_o, INPUT_SPEC);
    let s_r1 = b.delay_arch("s_r1", 3, al_e, INPUT_SPEC);

    let ua = b.add(3, al_e, in_e, CoeffName::Alpha);
    let asum = mul_cloud(&mut b, 3, generic_mul, ua, &p.alpha, Some(al_o), CoeffName::Alpha);
    let alpha_out = b.reg_arch("alpha_out", 3, asum, ALPHA_SPEC);
    let alpha_d1 = b.delay_arch("alpha_d1", 4, alpha_out, ALPHA_SPEC);

    let ub = b.add(4, alpha_d1, alpha_out, CoeffName::Beta);
    let bsum = mul_cloud(&mut b, 4, generic_mul, ub, &p.beta, Some(s_r1), CoeffName::Beta);
    let beta_out = b.reg_arch("beta_out", 4, bsum, BETA_SPEC);
    let alpha_d2 = b.delay_arch("alpha_d2", 5, alpha_d1, ALPHA_SPEC);
    let beta_d1 = b.delay_arch("beta_d1", 5, beta_out, BETA_SPEC);

    let ug = b.add(5, beta_d1, beta_out, CoeffName::Gamma);
    let gsum = mul_cloud(&mut b, 5, generic_mul, ug, &p.gamma, Some(alpha_d2), CoeffName::Gamma);
    let gamma_out = b.reg_arch("gamma_out", 5, gsum, GAMMA_SPEC);
    let beta_d2 = b.delay_arch("beta_d2", 6, beta_d1, BETA_SPEC);
    let gamma_d1 = b.delay_arch("gamma_d1", 6, gamma_out, GAMMA_SPEC);

    let ud = b.add(6, gamma_d1, gamma_out, CoeffName::Delta);
    let dsum = mul_cloud(&mut b, 6, generic_mul, ud, &p.delta, Some(beta_d2), CoeffName::Delta);
    let delta_out = b.reg_arch("delta_out", 6, dsum, DELTA_SPEC);

    let lsum = mul_cloud(&mut b, 7, generic_mul, delta_out, &p.inv_k, None, CoeffName::InvK);
    let low_reg = b.reg_arch("low_reg", 7, lsum, LOW_SPEC);
    let hsum = mul_cloud(&mut b, 7, generic_mul, gamma_d1, &p.neg_k, None, CoeffName::NegK);
    let high_reg = b.reg_arch("high_reg", 7, hsum, HIGH_SPEC);

    let low_out = b.delay_arch("low_out", 8, low_reg, LOW_SPEC);
    let high_out = b.delay_arch("high_out", 8, high_reg, HIGH_SPEC);

    let (lo, hi) = (b.reg_index(low_out), b.reg_index(high_out));
    b.finish(lo, hi, 8)
}

/// Designs 3, 5: twenty-one stages, at most one adder per path per stage.
pub(crate) fn build_21stage(coeffs: &CoeffSet, structural: bool) -> Netlist {
    let p = FixedPlans::new(coeffs);
    let mut b = Builder::new(structural);

    let in_e = b.reg_arch("in_even", 1, IN_E, INPUT_SPEC);
    let in_o = b.reg_arch("in_odd", 1, IN_O, INPUT_SPEC);
    let al_e = b.delay_arch("al_even", 2, in_e, INPUT_SPEC);
    let al_o = b.delay_arch("al_odd", 2, in_o, INPUT_SPEC);

    // Alpha: pre-add at 3, levels at 4-5, output at 6.
    let ua_w = b.add(3, al_e, in_e, CoeffName::Alpha);
    let ua = b.reg_sound("alpha_u", 3, ua_w);
    let d_r1 = b.delay_arch("d_r1", 3, al_o, INPUT_SPEC);
    let alpha_out = tree_block(
        &mut b, 4, 2, 6, ua, &p.alpha, Some(d_r1), "alpha", CoeffName::Alpha, "alpha_out",
        ALPHA_SPEC,
    );

    // Even samples ride to the beta stage's first level.
    let s_lift = ride(&mut b, al_e, INPUT_SPEC, "s", 3, 5);

    // Beta: pre-add at 7, levels at 8-9, output at 10.
    let alpha_prev = b.delay_arch("alpha_prev", 6, alpha_out, ALPHA_SPEC);
    let ub_w = b.add(7, alpha_out, alpha_prev, CoeffName::Beta);
    let ub = b.reg_sound("beta_u", 7, ub_w);
    let beta_out = tree_block(
        &mut b, 8, 2, 10, ub, &p.beta, Some(s_lift), "beta", CoeffName::Beta, "beta_out",
        BETA_SPEC,
    );

    // Alpha output rides to the gamma stage's first level.
    let g_lift = ride(&mut b, alpha_out, ALPHA_SPEC, "alpha", 7, 6);

    // Gamma: pre-add at 11, levels at 12-13, output at 14.
    let beta_prev = b.delay_arch("beta_prev", 10, beta_out, BETA_SPEC);
    let uc_w = b.add(11, beta_out, beta_prev, CoeffName::Gamma);
    let uc = b.reg_sound("gamma_u", 11, uc_w);
    let gamma_out = tree_block(
        &mut b, 12, 2, 14, uc, &p.gamma, Some(g_lift), "gamma", CoeffName::Gamma, "gamma_out",
        GAMMA_SPEC,
    );

    // Beta output rides to the delta stage's first level.
    let d_lift = ride(&mut b, beta_out, BETA_SPEC, "beta", 11, 6);

    // Delta: pre-add at 15, levels at 16-17, output at 18.
    let gamma_prev = b.delay_arch("gamma_prev", 14, gamma_out, GAMMA_SPEC);
    let ud_w = b.add(15, gamma_out, gamma_prev, CoeffName::Delta);
    let ud = b.reg_sound("delta_u", 15, ud_w);
    let delta_out = tree_block(
        &mut b, 16, 2, 18, ud, &p.delta, Some(d_lift), "delta", CoeffName::Delta, "delta_out",
        DELTA_SPEC,
    );

    // High band: gamma output rides to 18, scaling levels at 19-20, output 21.
    let h_src = ride(&mut b, gamma_out, GAMMA_SPEC, "gamma", 15, 4);
    let high_out = tree_block(
        &mut b, 19, 2, 21, h_src, &p.neg_k, None, "high", CoeffName::NegK, "high_out", HIGH_SPEC,
    );

    // Low band: delta output rides one stage, level at 20, output 21.
    let l_src = ride(&mut b, delta_out, DELTA_SPEC, "delta", 19, 1);
    let low_out = tree_block(
        &mut b, 20, 1, 21, l_src, &p.inv_k, None, "low", CoeffName::InvK, "low_out", LOW_SPEC,
    );

    let (lo, hi) = (b.reg_index(low_out), b.reg_index(high_out));
    b.finish(lo, hi, 21)
}
