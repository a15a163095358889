//! Solver, verifier, generator and scoring toolkit for the central
//! triangulation problem under parallel flip operations: given m
//! triangulations of one planar point set, find a triangulation minimizing
//! the sum of parallel flip distances to all of them.

pub mod distance;
pub mod geometry;
pub mod instances;
pub mod rng;
mod seggrid;
pub mod solver;
pub mod triangulation;

pub use distance::{
    distance_lower_bound, exact_distance, heuristic_distance, replay, DistanceError,
    DistanceResult, FlipSequence, SearchBudget,
};
pub use geometry::{Orientation, Point};
pub use instances::{
    generate_random_instance, generate_rirs_instance, read_instance, read_solution, score_instance,
    score_totals, verify_solution, write_instance, write_solution, Instance, InstanceError,
    InstanceMetadata, RandomClassParams, RirsParams, Solution, VerificationReport, RANK_POINTS,
};
pub use solver::{
    evaluate, initial_candidates, local_search, solve, EvalMode, ObjectiveSummary, ObjectiveValue,
    SolverConfig, SolverError,
};
pub use triangulation::{
    greedy_random_triangulation, Edge, FlippableEdge, ParallelFlipSet, PointSet, Triangulation,
    TriangulationError,
};
