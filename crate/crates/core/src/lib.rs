//! Balanced vertex separators through a matrix multiplicative weights
//! solver for a semidefinite relaxation, with exact reference routines for
//! checking every stage at small scale.
//!
//! The pipeline per objective level `α`: accumulate feedback matrices,
//! project the exponentiated sum to low-dimensional vectors ([`embed`]),
//! ask the [`oracle`] for a cheap cut or a new feedback matrix (max flow on
//! a split-vertex network, [`maxflow`]), and repeat. [`solver`] drives this
//! and searches over `α`.

pub mod embed;
pub mod feedback;
pub mod graph;
pub mod linalg;
pub mod maxflow;
pub mod oracle;
pub mod rational;
pub mod rng;
pub mod solver;

pub use embed::{project_embedding, EmbedConfig, EmbedError, Embedding, ImplicitMatrix};
pub use feedback::{FeedbackKind, FeedbackMatrix, FeedbackViolation, PathTerm};
pub use graph::{
    brute_force_opt, generate, parse_graph, render_graph, validate_separator, GeneratorKind, GraphError,
    SeparatorSolution, Violation, WeightedGraph,
};
pub use maxflow::{max_flow, Dinic, FlowError, FlowNetwork, FlowResult, MaxFlowSolver};
pub use oracle::{rationalize_beta, OracleConfig, OracleError, OracleOutcome, OracleParams};
pub use rational::Rational;
pub use solver::{
    binary_search_solve, epsilon_sweep, mmwu_run, primal_witness, DualCertificate, MmwuOutcome, SolveReport,
    SolverConfig, SolverError,
};
