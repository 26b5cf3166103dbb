//! Discrete paths on which the symbolic identities hold exactly, and Monte
//! Carlo comparison of flow approximations for linear matrix equations.

mod eval;
mod flow;
mod io;
mod path;

pub use eval::{evaluate, evaluate_word, Binding, EvalPlan};
pub use flow::{
    evaluate_matrix, expm, flow_from_log, flow_from_taylor, flow_reference, flow_study, FlowDrivers,
    FlowEvaluator, FlowProblem, FlowStudy, GradedFlow, OrderStats, EXPM_TOLERANCE,
};
pub use io::{PathBundle, BINARY_MAGIC};
pub use path::{
    discrete_bracket, left_point_integral, resolves_jumps, simulate, DriverSpec, Grid, PathSeed, SamplePath,
};
