//! Print the stage assignment of the pipelined designs: which additions
//! run in which of the 21 stages, and the registers each stage latches.

use dwt97::fixpoint::canonical_coeffs;
use dwt97::rtlsim::{stage_schedule, DesignKind};

fn main() {
    let coeffs = canonical_coeffs();
    for kind in [
        DesignKind::BehavioralPipelinedShiftAdd,
        DesignKind::StructuralPipelinedShiftAdd,
    ] {
        println!("== {kind} ==");
        for s in stage_schedule(kind, &coeffs).expect("pipelined design") {
            println!("stage {:2}: {:?}", s.index, s.additions);
            println!("          regs: {}", s.registers.join(", "));
        }
        println!();
    }
}
