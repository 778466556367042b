//! Kolmogorov-complexity workbench on a small loop-free machine.

mod codes;
mod joint;
mod machine;
mod phi;

pub use codes::{pair_decode, pair_encode, prefix_decode, prefix_encode};
pub use joint::{family_gap, joint_bound_report, FamilyGap, JointReport};
pub use machine::{
    literal_program, run_program, Instruction, MachineResult, MachineStatus, TinyProgram,
    INSTRUCTION_BITS,
};
pub use phi::{
    convergence_budget, literal_ceiling, phi, phi_curve, phi_exhaustive, phi_par, EstimateRecord,
    KcEstimate, MAX_PHI_BITS,
};
