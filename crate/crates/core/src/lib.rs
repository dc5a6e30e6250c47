//! Exact computation of Euclidean minima of number fields relative to a set
//! of places S, together with the supporting arithmetic: number fields and
//! their ideals, S-arithmetic, the adelic torus, certified covering and
//! binary quadratic forms.

pub mod field;
pub mod forms;
pub mod ideal;
pub mod interval;
pub mod linalg;
pub mod minima;
pub mod poly;
pub mod rational;
pub mod sarith;
pub mod torus;

pub use field::{EmbeddingBox, FieldElement, FieldError, NumberField};
pub use ideal::FractionalIdeal;
pub use rational::{Q, Z};
pub use sarith::{FinitePlace, Place, SConfig, SError};
pub use torus::{AdelePoint, FundamentalDomain, OrbitPoint, OrbitWalk, QmodZ};
