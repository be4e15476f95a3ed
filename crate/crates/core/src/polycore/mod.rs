//! Exact polynomial algebra over the rationals.

mod bi;
mod field;
pub mod json;
pub mod rat;
mod uni;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use bi::BiPoly;
pub use field::VectorField2;
pub use rat::{format_rat, int, parse_rat, rat, Rat};
pub use uni::{chebyshev, UniPoly};

/// Polynomial degree. The zero polynomial has degree `NegInfinity`, which
/// orders below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

/// Finite degrees encode as JSON integers, the zero-polynomial sentinel as
/// the string `"-inf"`.
impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(d) => s.serialize_u32(*d),
            Degree::NegInfinity => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(u32),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(n) => Ok(Degree::Finite(n)),
            Repr::Text(t) if t == "-inf" => Ok(Degree::NegInfinity),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("bad degree {t:?}"))),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

pub fn derivative_uni(p: &UniPoly) -> UniPoly {
    p.derivative()
}

pub fn compose_separable(f: &BiPoly, p: &UniPoly) -> BiPoly {
    f.compose_separable(p)
}

pub fn total_degree(f: &BiPoly) -> Degree {
    f.total_degree()
}
