use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rat::{to_f64, Rat};
use super::Degree;

/// Dense univariate polynomial, `coeffs[k]` multiplies `x^k`. Trailing zeros
/// are never stored, so the zero polynomial has an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rat::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    pub fn monomial(c: Rat, power: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> Rat {
        self.coeffs.get(power).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n as u32 - 1),
        }
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    /// `self(inner(x))` by Horner's scheme.
    pub fn compose(&self, inner: &UniPoly) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * inner) + &Self::constant(c.clone())
        })
    }

    /// `[1, p, p^2, ..., p^max]`.
    pub fn powers(&self, max: usize) -> Vec<UniPoly> {
        let mut out = Vec::with_capacity(max + 1);
        out.push(Self::one());
        for k in 1..=max {
            let next = &out[k - 1] * self;
            out.push(next);
        }
        out
    }

    /// Lowered to `f64` once, for repeated evaluation in numeric code.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                $tr::$m(&self, &rhs)
            }
        }
    )*};
}
pub(crate) use forward_owned;

forward_owned!(UniPoly, Add::add, Sub::sub, Mul::mul);

/// Chebyshev polynomial of the first kind, from `T_0 = 1`, `T_1 = x`,
/// `T_{k+1} = 2x T_k - T_{k-1}`.
pub fn chebyshev(m: usize) -> UniPoly {
    let two_x = UniPoly::monomial(Rat::from_integer(2.into()), 1);
    let mut prev = UniPoly::one();
    if m == 0 {
        return prev;
    }
    let mut cur = UniPoly::x();
    for _ in 1..m {
        let next = &(&two_x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rat::{int, rat};

    #[test]
    fn chebyshev_small_cases() {
        assert_eq!(chebyshev(0), UniPoly::one());
        assert_eq!(chebyshev(1), UniPoly::x());
        assert_eq!(chebyshev(3), UniPoly::from_ints(&[0, -3, 0, 4]));
        // expanded independently: 32x^6 - 48x^4 + 18x^2 - 1
        assert_eq!(
            chebyshev(6),
            UniPoly::from_ints(&[-1, 0, 18, 0, -48, 0, 32])
        );
    }

    #[test]
    fn chebyshev_endpoints_and_leading_coefficient() {
        for m in 1..=20usize {
            let t = chebyshev(m);
            assert_eq!(t.degree(), Degree::Finite(m as u32));
            assert_eq!(t.eval(&int(1)), int(1));
            let sign = if m % 2 == 0 { 1 } else { -1 };
            assert_eq!(t.eval(&int(-1)), int(sign));
            assert_eq!(*t.leading_coeff().unwrap(), int(1i64 << (m - 1)));
        }
    }

    #[test]
    fn derivative_cases() {
        assert_eq!(chebyshev(3).derivative(), UniPoly::from_ints(&[-3, 0, 12]));
        assert!(UniPoly::constant(int(5)).derivative().is_zero());
        assert_eq!(
            UniPoly::monomial(int(1), 5).derivative(),
            UniPoly::monomial(int(5), 4)
        );
    }

    #[test]
    fn zero_degree_is_sentinel() {
        let z = UniPoly::new(vec![int(0), int(0)]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
    }

    #[test]
    fn exact_evaluation() {
        let p = UniPoly::new(vec![rat(1, 2), int(-3), rat(2, 3)]);
        // 1/2 - 3*(3/2) + (2/3)*(9/4) = 1/2 - 9/2 + 3/2
        assert_eq!(p.eval(&rat(3, 2)), rat(-5, 2));
    }

    #[test]
    fn nesting_identity() {
        for a in 2..=4 {
            for b in 2..=4 {
                assert_eq!(chebyshev(a).compose(&chebyshev(b)), chebyshev(a * b));
            }
        }
    }
}
