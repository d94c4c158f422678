//! Exact arithmetic in F_q, F_q[t⁻¹] and its fraction field, F_p-linear
//! algebra on truncated coefficient spaces, the bracket ⟨a,b⟩ = aᵉb − abᵉ
//! with codimension audits, the groups G₂, H and H_p with their standard
//! automorphisms, and solvers that recover automorphism parameters.

pub mod error;
pub mod fq;
pub mod poly;
pub mod fpspace;
pub mod bracket;
pub mod groups;
pub mod rigidity;
pub mod harness;

pub use error::{Error, Result};
