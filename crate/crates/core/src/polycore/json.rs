//! JSON encoding of polynomials and fields.
//!
//! Coefficients are strings `"num/den"`. A `BiPoly` is an array of
//! `{"du": .., "dv": .., "c": ..}` objects in ascending `(du, dv)` order, a
//! `UniPoly` is `{"coeffs": [..]}` indexed by power, and a `VectorField2` is
//! `{"p": <BiPoly>, "q": <BiPoly>}`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::{format_rat, parse_rat};
use super::{BiPoly, UniPoly, VectorField2};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct TermRepr {
    du: u32,
    dv: u32,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct UniRepr {
    coeffs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    p: BiPoly,
    q: BiPoly,
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms()
            .map(|((du, dv), c)| TermRepr {
                du,
                dv,
                c: format_rat(c),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let mut seen = std::collections::BTreeSet::new();
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            if !seen.insert((t.du, t.dv)) {
                return Err(D::Error::custom(format!(
                    "duplicate monomial (du={}, dv={})",
                    t.du, t.dv
                )));
            }
            let c = parse_rat(&t.c).map_err(D::Error::custom)?;
            parsed.push(((t.du, t.dv), c));
        }
        Ok(BiPoly::from_terms(parsed))
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        UniRepr {
            coeffs: self.coeffs().iter().map(format_rat).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = UniRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|c| parse_rat(c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(UniPoly::new(coeffs))
    }
}

impl Serialize for VectorField2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldRepr {
            p: self.p_comp.clone(),
            q: self.q_comp.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VectorField2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FieldRepr::deserialize(d)?;
        Ok(VectorField2::new(repr.p, repr.q))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("polynomial values always serialize")
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rat::{int, rat};
    use crate::polycore::{chebyshev, Rat};
    use proptest::prelude::*;

    #[test]
    fn bipoly_wire_format() {
        let f = BiPoly::from_terms([((0, 1), int(-3)), ((2, 0), rat(1, 2))]);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(
            text,
            r#"[{"du":0,"dv":1,"c":"-3/1"},{"du":2,"dv":0,"c":"1/2"}]"#
        );
    }

    #[test]
    fn unipoly_wire_format() {
        let text = serde_json::to_string(&chebyshev(3)).unwrap();
        assert_eq!(text, r#"{"coeffs":["0/1","-3/1","0/1","4/1"]}"#);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(from_json::<BiPoly>(r#"[{"du":0,"dv":0,"c":"1/0"}]"#).is_err());
        assert!(
            from_json::<BiPoly>(r#"[{"du":0,"dv":0,"c":"1/1"},{"du":0,"dv":0,"c":"2/1"}]"#)
                .is_err()
        );
        assert!(from_json::<VectorField2>("{\"p\": [").is_err());
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-1_000_000i64..1_000_000, 1i64..10_000).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_bipoly() -> impl Strategy<Value = BiPoly> {
        prop::collection::vec(((0u32..12, 0u32..12), arb_rat()), 0..20).prop_map(BiPoly::from_terms)
    }

    proptest! {
        #[test]
        fn field_round_trip_is_exact(p in arb_bipoly(), q in arb_bipoly()) {
            let f = VectorField2::new(p, q);
            let text = to_json(&f);
            let back: VectorField2 = from_json(&text).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(to_json(&back), text);
        }

        #[test]
        fn unipoly_round_trip_is_exact(cs in prop::collection::vec(arb_rat(), 0..15)) {
            let p = UniPoly::new(cs);
            let back: UniPoly = from_json(&to_json(&p)).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
