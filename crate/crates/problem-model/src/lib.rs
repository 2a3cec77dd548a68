//! Problem and instance definitions for the rank-constrained solvers:
//! regularizer / problem / payload types, the cut record exchanged between
//! oracle and masters, seeded synthetic generators, symbolic γ-rules, and the
//! JSON instance format.

mod gamma;
mod gen;
mod io;
mod rng;
mod types;

pub use gamma::GammaRule;
pub use gen::{gen_matrix_completion, gen_sensor};
pub use io::{read_instance, read_instance_str, write_instance, write_instance_string};
pub use rng::SeedRng;
pub use types::{Cut, MatrixCompletionInstance, Payload, RankProblem, Regularizer, SensorInstance};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no observations (empty sample)")]
    EmptyObservations,
    #[error("parse error in {file}: {detail}")]
    Parse { file: String, detail: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
