//! Log-concave measures, uniform measures on convex bodies, and their
//! convexity moduli.

mod body;
mod cdf;
pub mod moduli;
mod potential;
mod sample;

use serde::{Deserialize, Serialize};

pub use body::{supporting_slab, ConvexBody, Halfspace, Shape};
pub use cdf::Cdf1D;
pub use moduli::{ConvexityModulus, ModulusKind, SearchSpec};
pub use potential::{Family, Potential, Tilt};
pub use sample::{sample, sample_with_acceptance, Sampled};

pub(crate) use body::{dist2, dot, norm2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    #[default]
    L2,
    L1,
    Linf,
}

impl Norm {
    pub fn of(self, x: &[f64]) -> f64 {
        match self {
            Norm::L2 => norm2(x),
            Norm::L1 => x.iter().map(|v| v.abs()).sum(),
            Norm::Linf => x.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    pub fn dual(self) -> Norm {
        match self {
            Norm::L2 => Norm::L2,
            Norm::L1 => Norm::Linf,
            Norm::Linf => Norm::L1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Norm::L2 => "l2",
            Norm::L1 => "l1",
            Norm::Linf => "linf",
        }
    }
}
