//! Test functions and sampled membership in the convexity classes.

pub mod function;
pub mod hfunc;
pub mod membership;

pub use function::{default_corpus, ClassTag, Family, FunctionSpec, Transform};
pub use hfunc::HFunction;
pub use membership::{
    check_convex, check_godunova_levin, check_h_convex, check_nonnegative, check_p_function, check_r_convex,
    cross_check_godunova_levin, godunova_levin_triple, power_mean, scan_godunova_levin_triples,
    GodunovaLevinAgreement, MembershipClass, MembershipReport, SamplingPlan, TripleScan, Verdict, Witness,
};
