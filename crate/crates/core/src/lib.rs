//! Exact analysis of probability kernels on finite state spaces.
//!
//! A kernel `R` is an `n × n` row-stochastic matrix of rationals, a measure
//! `ν` a probability vector, and a sub-σ-algebra is represented by the
//! partition of its atoms. The crate checks the classical properties of
//! `(R, ν)` (stationarity, reversibility, self-compatibility, properness,
//! totality), builds regular conditional distributions from partitions,
//! decides whether a kernel is one, and falsifies the surrounding theory on
//! random instances.
//!
//! ```
//! use rcdkit::{is_rcd, sigma_of_kernel, Kernel, Measure, Rat};
//!
//! let h = Rat::new(1, 2);
//! let r = Kernel::new(vec![
//!     vec![Rat::one(), Rat::zero(), Rat::zero()],
//!     vec![Rat::zero(), h.clone(), h.clone()],
//!     vec![Rat::zero(), h.clone(), h.clone()],
//! ])
//! .unwrap();
//! assert_eq!(sigma_of_kernel(&r).to_index_lists(), vec![vec![0], vec![1, 2]]);
//!
//! let nu = Measure::new(vec![h.clone(), Rat::new(1, 4), Rat::new(1, 4)]).unwrap();
//! assert!(is_rcd(&r, &nu).unwrap().is_rcd);
//! ```

pub mod cli;
pub mod error;
pub mod event;
pub mod falsifier;
pub mod instance;
pub mod measure;
pub mod partition;
pub mod props;
pub mod rational;
pub mod rcd;

pub use error::{Error, Result};
pub use event::{EventSet, StateId};
pub use instance::{parse_instance, serialize_instance, Instance, Mode};
pub use measure::{Kernel, Measure};
pub use partition::{Partition, TracePartition};
pub use props::{Checker, Property, PropertyProfile, PropertyVerdict, RestrictionScope, Witness};
pub use rational::Rat;
pub use rcd::{
    enumerate_partitions, is_rcd, is_rcd_gcp, make_rcd, oracle_is_rcd, sigma_of_kernel, stationarize, Condition,
    OracleResult, RcdVerdict,
};
