//! Statevector simulation, exact frequency-spectrum algebra and a benchmark
//! harness for quantum neural networks built from six data-encoding
//! families (Hamming, binary, exponential, ternary, turnpike, Golomb).

pub mod bench;
pub mod encodings;
pub mod error;
pub mod model;
pub mod pipeline;
pub mod seeds;
pub mod simulator;
pub mod spectrum;
pub mod synthdata;
pub mod training;

pub use encodings::{EncodingFamily, Family};
pub use error::{Error, Result};
pub use model::{AnsatzMode, ArchitectureSpec};
pub use simulator::{Circuit, GateOp, StateVector};
pub use spectrum::{FreqSet, SpectrumReport};
