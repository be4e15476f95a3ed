use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rat::{to_f64, Rat};
use super::uni::{forward_owned, UniPoly};
use super::Degree;

/// Sparse bivariate polynomial in `(u, v)` (equivalently `(x, y)`), keyed by
/// the exponent pair `(deg_u, deg_v)`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn term(c: Rat, du: u32, dv: u32) -> Self {
        let mut out = Self::zero();
        out.add_term(du, dv, c);
        out
    }

    /// The first coordinate `u` (or `x`).
    pub fn u() -> Self {
        Self::term(Rat::one(), 1, 0)
    }

    /// The second coordinate `v` (or `y`).
    pub fn v() -> Self {
        Self::term(Rat::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rat)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for ((du, dv), c) in terms {
            out.add_term(du, dv, c);
        }
        out
    }

    /// `p(u)` viewed as a bivariate polynomial.
    pub fn from_uni_u(p: &UniPoly) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| ((k as u32, 0), c.clone())),
        )
    }

    /// `p(v)` viewed as a bivariate polynomial.
    pub fn from_uni_v(p: &UniPoly) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| ((0, k as u32), c.clone())),
        )
    }

    fn add_term(&mut self, du: u32, dv: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((du, dv)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rat)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, du: u32, dv: u32) -> Rat {
        self.terms.get(&(du, dv)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|&(a, b)| Degree::Finite(a + b))
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    pub fn degree_u(&self) -> Degree {
        self.terms
            .keys()
            .map(|&(a, _)| Degree::Finite(a))
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    pub fn degree_v(&self) -> Degree {
        self.terms
            .keys()
            .map(|&(_, b)| Degree::Finite(b))
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(&(a, b), _)| a + b == d)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&k, a)| (k, a * c)).collect(),
        }
    }

    pub fn partial_u(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(a, _), _)| a > 0)
                .map(|(&(a, b), c)| ((a - 1, b), c * Rat::from_integer(a.into()))),
        )
    }

    pub fn partial_v(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(_, b), _)| b > 0)
                .map(|(&(a, b), c)| ((a, b - 1), c * Rat::from_integer(b.into()))),
        )
    }

    pub fn eval(&self, u: &Rat, v: &Rat) -> Rat {
        let du = max_exp(self.terms.keys().map(|k| k.0));
        let dv = max_exp(self.terms.keys().map(|k| k.1));
        let pu = rat_powers(u, du);
        let pv = rat_powers(v, dv);
        self.terms.iter().fold(Rat::zero(), |acc, (&(a, b), c)| {
            acc + c * &pu[a as usize] * &pv[b as usize]
        })
    }

    pub fn eval_f64(&self, u: f64, v: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b), c)| to_f64(c) * u.powi(a as i32) * v.powi(b as i32))
            .sum()
    }

    /// `self(p(u), p(v))`.
    ///
    /// Each term `c x^i y^j` becomes the outer product `c p(u)^i p(v)^j`, so only
    /// univariate powers of `p` are ever multiplied.
    pub fn compose_separable(&self, p: &UniPoly) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let max_pow = self.terms.keys().map(|&(a, b)| a.max(b)).max().unwrap_or(0) as usize;
        let powers = p.powers(max_pow);
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let pu = &powers[i as usize];
            let pv = &powers[j as usize];
            for (a, ca) in pu.coeffs().iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                let cca = c * ca;
                for (b, cb) in pv.coeffs().iter().enumerate() {
                    if cb.is_zero() {
                        continue;
                    }
                    out.add_term(a as u32, b as u32, &cca * cb);
                }
            }
        }
        out
    }

    /// General substitution `self(x_sub(u, v), y_sub(u, v))`.
    pub fn compose(&self, x_sub: &BiPoly, y_sub: &BiPoly) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let max_i = max_exp(self.terms.keys().map(|k| k.0)) as usize;
        let max_j = max_exp(self.terms.keys().map(|k| k.1)) as usize;
        let xp = bi_powers(x_sub, max_i);
        let yp = bi_powers(y_sub, max_j);
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let prod = &xp[i as usize] * &yp[j as usize];
            for (k, a) in prod.terms {
                out.add_term(k.0, k.1, a * c);
            }
        }
        out
    }

    /// Lowered to a dense `f64` coefficient grid for repeated evaluation.
    pub fn to_f64_grid(&self) -> Vec<Vec<f64>> {
        let du = max_exp(self.terms.keys().map(|k| k.0)) as usize;
        let dv = max_exp(self.terms.keys().map(|k| k.1)) as usize;
        if self.is_zero() {
            return Vec::new();
        }
        let mut grid = vec![vec![0.0; dv + 1]; du + 1];
        for (&(a, b), c) in &self.terms {
            grid[a as usize][b as usize] = to_f64(c);
        }
        grid
    }
}

fn max_exp(it: impl Iterator<Item = u32>) -> u32 {
    it.max().unwrap_or(0)
}

fn rat_powers(x: &Rat, max: u32) -> Vec<Rat> {
    let mut out = vec![Rat::one()];
    for k in 1..=max as usize {
        let next = &out[k - 1] * x;
        out.push(next);
    }
    out
}

fn bi_powers(p: &BiPoly, max: usize) -> Vec<BiPoly> {
    let mut out = vec![BiPoly::constant(Rat::one())];
    for k in 1..=max {
        let next = &out[k - 1] * p;
        out.push(next);
    }
    out
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (&(a, b), c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            match a {
                0 => {}
                1 => write!(f, "*u")?,
                _ => write!(f, "*u^{a}")?,
            }
            match b {
                0 => {}
                1 => write!(f, "*v")?,
                _ => write!(f, "*v^{b}")?,
            }
        }
        Ok(())
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, -c);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

forward_owned!(BiPoly, Add::add, Sub::sub, Mul::mul);
