//! Verification engines: solution transfer from G to K, bounded equation
//! solvers, the dihedral case solver, the verbal-closedness probe and the
//! no-retraction certificate.

mod certificate;
mod laws;
mod probe;
mod solve;
mod transfer;

pub use certificate::{no_retraction_certificate, CertStep, Certificate};
pub use laws::{
    b2_closure_check, check_square_law, check_square_law_dyn, involutions_in_k_ball, B2Report,
};
pub use probe::{probe_verbal_closedness, ProbeConfig, ProbeReport, ProbeWitness};
pub use solve::{
    brute_force_solve, brute_force_solve_typed, dihedral_solve, for_each_tuple, solution_table,
    DihedralMethod, DihedralSolution, Equation,
};
pub use transfer::{transfer_solution, Transfer, TransferReport};
