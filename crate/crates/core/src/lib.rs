//! Exact arithmetic in the topological full group of an odometer.
//!
//! ```
//! use ample_core::{BaseSequence, Element};
//!
//! let b = BaseSequence::dyadic();
//! let f = Element::odometer(&b);
//! assert_eq!(f.index(), 1);
//! assert!(f.power(&4).compose(&f.power(&-4)).is_identity());
//!
//! let g: Element = ample_core::json::from_str(
//!     r#"{"base": {"pre": [2], "period": [3]}, "depth": 2, "cocycle": ["1", "-1", "0", "1", "-1", "0"]}"#,
//!     None,
//! )
//! .unwrap();
//! assert_eq!(g.order(), ample_core::OrderResult::Finite(2));
//! ```

pub mod cantor;
pub mod element;
pub mod error;
pub mod genperm;
pub mod json;
pub mod nowhere_dense;
pub mod perm;
pub mod property_e;
pub mod sample;
pub mod scalar;
pub mod selftest;
pub mod stabilizers;
pub mod towers;

pub use cantor::{BaseSequence, ClopenSet, Cylinder, Point, SetOp, DEFAULT_DEPTH_LIMIT};
pub use element::{OrderResult, TfgElement, WreathForm};
pub use error::{Error, Result};
pub use genperm::{GenPermSpec, TwoCycleSpec};
pub use nowhere_dense::{NdConstruction, NdStage, OmegaWord};
pub use num_bigint::BigInt;
pub use perm::Perm;
pub use property_e::{Certificate, Factor, Tag, TorsionFactorization};
pub use scalar::Scalar;
pub use stabilizers::{FiniteModel, FinitePointSet, StabilizerClass};
pub use towers::{KrPartition, Tower};

/// Elements with machine-word cocycles, enough for everything at desk scale.
pub type Element = TfgElement<i64>;
/// Elements with unbounded cocycles, for long words and large powers.
pub type BigElement = TfgElement<BigInt>;
pub type Spec = GenPermSpec<i64>;
pub type TwoCycle = TwoCycleSpec<i64>;
pub type Partition = KrPartition<i64>;
pub type Cert = Certificate<i64>;
pub type Kernel = TorsionFactorization<i64>;
pub type Construction = NdConstruction<i64>;
