//! Monotone full branches of univariate polynomials over `(-1, 1)`.
//!
//! A full branch of `p` is an open interval that `p` maps diffeomorphically
//! onto `(-1, 1)`. Chebyshev polynomials have the closed-form branches
//! `I_k = (cos(k pi/m), cos((k-1) pi/m))`; for a general `p` they are found
//! numerically from the real critical points.
//!
//! Branches are indexed from the right: `k = 1` is the interval nearest `+1`.
//! On `I_k` the Chebyshev polynomial `T_m` is increasing for odd `k` and
//! decreasing for even `k`.

use std::f64::consts::PI;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polycore::{chebyshev, Degree, UniPoly};

pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn sign(self) -> i32 {
        match self {
            Direction::Increasing => 1,
            Direction::Decreasing => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Direction::Increasing => "+",
            Direction::Decreasing => "-",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchInterval {
    /// 1-based, counted from the right end of `(-1, 1)`.
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    pub direction: Direction,
}

impl BranchInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    /// Distance from `x` to the nearer endpoint, negative outside.
    pub fn margin(&self, x: f64) -> f64 {
        (x - self.lo).min(self.hi - x)
    }
}

impl Serialize for BranchInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BranchInterval", 4)?;
        st.serialize_field("k", &self.index)?;
        st.serialize_field("lo", &self.lo)?;
        st.serialize_field("hi", &self.hi)?;
        st.serialize_field("dir", self.direction.symbol())?;
        st.end()
    }
}

/// Raised when `p'` has a (near) multiple root, where the monotone pieces
/// cannot be separated reliably at the working tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegenerateCritical {
    pub at: f64,
    pub derivative: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchSet {
    pub poly: UniPoly,
    pub intervals: Vec<BranchInterval>,
    pub count: usize,
    pub degenerate: Vec<DegenerateCritical>,
}

impl BranchSet {
    fn new(
        poly: UniPoly,
        intervals: Vec<BranchInterval>,
        degenerate: Vec<DegenerateCritical>,
    ) -> Self {
        let count = intervals.len();
        Self {
            poly,
            intervals,
            count,
            degenerate,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degenerate.is_empty()
    }

    pub fn interval(&self, k: usize) -> Option<&BranchInterval> {
        self.intervals.iter().find(|b| b.index == k)
    }

    /// Solves `p(x) = y` on branch `k` by bisection.
    pub fn inverse(&self, k: usize, y: f64, tol: f64) -> Result<f64> {
        if !(y > -1.0 && y < 1.0) {
            return Err(Error::OutOfRange { value: y });
        }
        let b = self.interval(k).ok_or_else(|| {
            Error::InvalidParameter(format!("branch index {k} not in 1..={}", self.count))
        })?;
        let coeffs = self.poly.to_f64_coeffs();
        let g = |x: f64| horner(&coeffs, x) - y;
        Ok(bisect(g, b.lo, b.hi, tol))
    }
}

impl Serialize for BranchSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BranchSet", 4)?;
        st.serialize_field("count", &self.count)?;
        st.serialize_field("intervals", &self.intervals)?;
        st.serialize_field("degenerate_critical", &self.is_degenerate())?;
        st.serialize_field("warnings", &self.degenerate)?;
        st.end()
    }
}

/// `[cos(0), cos(pi/m), ..., cos(pi)]`.
pub fn cheb_nodes(m: usize) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("need m >= 2, got {m}")));
    }
    Ok((0..=m)
        .map(|k| match k {
            0 => 1.0,
            k if k == m => -1.0,
            // cos(k pi / m) with exact zero at the midpoint
            k if 2 * k == m => 0.0,
            k => (k as f64 * PI / m as f64).cos(),
        })
        .collect())
}

pub fn cheb_direction(k: usize) -> Direction {
    if k % 2 == 1 {
        Direction::Increasing
    } else {
        Direction::Decreasing
    }
}

pub fn cheb_branches(m: usize) -> Result<BranchSet> {
    let nodes = cheb_nodes(m)?;
    let intervals = (1..=m)
        .map(|k| BranchInterval {
            index: k,
            lo: nodes[k],
            hi: nodes[k - 1],
            direction: cheb_direction(k),
        })
        .collect();
    Ok(BranchSet::new(chebyshev(m), intervals, Vec::new()))
}

/// The unique `u` in `I_k` with `T_m(u) = y`.
pub fn branch_inverse(m: usize, k: usize, y: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("need m >= 2, got {m}")));
    }
    if k < 1 || k > m {
        return Err(Error::InvalidParameter(format!(
            "branch index {k} not in 1..={m}"
        )));
    }
    if !(y > -1.0 && y < 1.0) {
        return Err(Error::OutOfRange { value: y });
    }
    let (mf, kf) = (m as f64, k as f64);
    let alpha = y.acos();
    let theta = if k % 2 == 1 {
        ((kf - 1.0) * PI + alpha) / mf
    } else {
        (kf * PI - alpha) / mf
    };
    Ok(theta.cos())
}

/// Numerically isolates the full branches of `p` over `(-1, 1)`.
///
/// Critical points are the sign changes of `p'` on a uniform grid of
/// `64 deg(p)` cells spanning the Cauchy root bound, refined by bisection to
/// `tol`. Critical values within `tol` of `+-1` count as reaching `+-1`, which
/// is what happens exactly for Chebyshev polynomials.
pub fn full_branch_intervals(p: &UniPoly, tol: f64) -> Result<BranchSet> {
    let deg = match p.degree() {
        Degree::Finite(d) if d >= 1 => d as usize,
        _ => {
            return Err(Error::InvalidParameter(
                "full branches need a polynomial of degree >= 1".into(),
            ))
        }
    };
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let coeffs = p.to_f64_coeffs();
    let dp = p.derivative();
    let dcoeffs = dp.to_f64_coeffs();
    let grid = 64 * deg;

    let critical = sign_change_roots(&dcoeffs, grid, tol);

    let mut degenerate = Vec::new();
    if deg >= 2 {
        let scale = dcoeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        let ddcoeffs = dp.derivative().to_f64_coeffs();
        for r in sign_change_roots(&ddcoeffs, grid, tol) {
            let d = horner(&dcoeffs, r);
            if d.abs() <= tol.sqrt() * scale {
                degenerate.push(DegenerateCritical {
                    at: r,
                    derivative: d,
                });
            }
        }
    }

    let lead_positive = coeffs[deg] > 0.0;
    let at_neg_inf = if lead_positive == (deg % 2 == 0) {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    };
    let at_pos_inf = if lead_positive {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    };

    let mut breaks = vec![f64::NEG_INFINITY];
    breaks.extend(critical.iter().copied());
    breaks.push(f64::INFINITY);
    let limit = |x: f64| {
        if x == f64::NEG_INFINITY {
            at_neg_inf
        } else if x == f64::INFINITY {
            at_pos_inf
        } else {
            horner(&coeffs, x)
        }
    };
    let far = cauchy_bound(&coeffs) + 2.0;

    let mut found = Vec::new();
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (pa, pb) = (limit(a), limit(b));
        let increasing = pb > pa;
        let (lo_val, hi_val) = if increasing { (pa, pb) } else { (pb, pa) };
        if !(lo_val <= -1.0 + tol && hi_val >= 1.0 - tol) {
            continue;
        }
        let a_fin = if a.is_finite() { a } else { -far };
        let b_fin = if b.is_finite() { b } else { far };
        let solve = |target: f64, end_val_a: f64, end_val_b: f64| {
            if (end_val_a - target).abs() <= tol {
                a_fin
            } else if (end_val_b - target).abs() <= tol {
                b_fin
            } else {
                bisect(|x| horner(&coeffs, x) - target, a_fin, b_fin, tol)
            }
        };
        let x_minus = solve(-1.0, pa, pb);
        let x_plus = solve(1.0, pa, pb);
        let (lo, hi) = if x_minus < x_plus {
            (x_minus, x_plus)
        } else {
            (x_plus, x_minus)
        };
        found.push((
            lo,
            hi,
            if increasing {
                Direction::Increasing
            } else {
                Direction::Decreasing
            },
        ));
    }
    found.sort_by(|a, b| b.0.total_cmp(&a.0));
    let intervals = found
        .into_iter()
        .enumerate()
        .map(|(i, (lo, hi, direction))| BranchInterval {
            index: i + 1,
            lo,
            hi,
            direction,
        })
        .collect();
    Ok(BranchSet::new(p.clone(), intervals, degenerate))
}

pub fn branch_count(p: &UniPoly, tol: f64) -> Result<usize> {
    full_branch_intervals(p, tol).map(|b| b.count)
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `1 + max |a_i / a_n|`; every real root lies inside.
fn cauchy_bound(coeffs: &[f64]) -> f64 {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].abs();
    1.0 + coeffs[..n]
        .iter()
        .fold(0.0f64, |a, c| a.max(c.abs() / lead))
}

/// Roots of the polynomial where it changes sign, found on a uniform grid
/// over the Cauchy bound and refined by bisection. Non-crossing zeros are not
/// reported.
fn sign_change_roots(coeffs: &[f64], cells: usize, tol: f64) -> Vec<f64> {
    if coeffs.len() < 2 {
        return Vec::new();
    }
    let r = cauchy_bound(coeffs);
    let step = 2.0 * r / cells as f64;
    let f = |x: f64| horner(coeffs, x);
    let mut roots: Vec<f64> = Vec::new();
    let mut x0 = -r;
    let mut f0 = f(x0);
    for i in 1..=cells {
        let x1 = if i == cells { r } else { -r + i as f64 * step };
        let f1 = f(x1);
        if f1 == 0.0 {
            // an exact grid hit counts when the neighbours disagree in sign
            let probe = step * 1e-3;
            if f(x1 - probe) * f(x1 + probe) < 0.0 {
                roots.push(x1);
            }
        } else if f0 != 0.0 && f0 * f1 < 0.0 {
            roots.push(bisect(f, x0, x1, tol));
        }
        x0 = x1;
        f0 = f1;
    }
    roots.dedup_by(|a, b| (*a - *b).abs() <= tol);
    roots
}

/// Bisection for a sign change on `[a, b]` down to width `tol`. If the
/// endpoints do not bracket a root, returns the endpoint of smaller residual.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    if fa * fb > 0.0 {
        return if fa.abs() < fb.abs() { a } else { b };
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a <= tol || mid == a || mid == b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::int;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn nodes_small_m() {
        assert_eq!(cheb_nodes(2).unwrap(), vec![1.0, 0.0, -1.0]);
        let n3 = cheb_nodes(3).unwrap();
        for (got, want) in n3.iter().zip([1.0, 0.5, -0.5, -1.0]) {
            assert!(close(*got, want, 1e-15));
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let n4 = cheb_nodes(4).unwrap();
        for (got, want) in n4.iter().zip([1.0, h, 0.0, -h, -1.0]) {
            assert!(close(*got, want, 1e-15));
        }
        assert!(matches!(cheb_nodes(1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn branches_m3_match_worked_intervals() {
        let b = cheb_branches(3).unwrap();
        let want = [(0.5, 1.0), (-0.5, 0.5), (-1.0, -0.5)];
        assert_eq!(b.count, 3);
        for (iv, (lo, hi)) in b.intervals.iter().zip(want) {
            assert!(close(iv.lo, lo, 1e-15) && close(iv.hi, hi, 1e-15));
        }
        // T_3(1/2) = -1 and T_3(1) = 1, so T_3 rises across I_1
        assert_eq!(b.intervals[0].direction, Direction::Increasing);
        assert_eq!(b.intervals[1].direction, Direction::Decreasing);
        assert_eq!(b.intervals[2].direction, Direction::Increasing);
    }

    #[test]
    fn branches_m2_and_m6() {
        let b = cheb_branches(2).unwrap();
        assert_eq!(
            b.intervals.iter().map(|i| (i.lo, i.hi)).collect::<Vec<_>>(),
            vec![(0.0, 1.0), (-1.0, 0.0)]
        );
        let b6 = cheb_branches(6).unwrap();
        let nodes = cheb_nodes(6).unwrap();
        assert_eq!(b6.count, 6);
        for (k, iv) in b6.intervals.iter().enumerate() {
            assert_eq!((iv.lo, iv.hi), (nodes[k + 1], nodes[k]));
        }
    }

    #[test]
    fn inverse_examples() {
        assert!(close(branch_inverse(3, 2, 0.0).unwrap(), 0.0, 1e-15));
        assert!(close(
            branch_inverse(3, 1, 0.0).unwrap(),
            3f64.sqrt() / 2.0,
            1e-15
        ));
        assert!(close(
            branch_inverse(2, 1, 0.0).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            1e-15
        ));
        assert!(matches!(
            branch_inverse(3, 1, 1.0),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            branch_inverse(3, 1, -1.5),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            branch_inverse(3, 4, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            branch_inverse(3, 0, 0.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn numeric_branches_of_chebyshev() {
        let b = full_branch_intervals(&chebyshev(3), DEFAULT_TOL).unwrap();
        let c = cheb_branches(3).unwrap();
        assert_eq!(b.count, 3);
        assert!(!b.is_degenerate());
        for (x, y) in b.intervals.iter().zip(&c.intervals) {
            assert!(close(x.lo, y.lo, 10.0 * DEFAULT_TOL), "{x:?} vs {y:?}");
            assert!(close(x.hi, y.hi, 10.0 * DEFAULT_TOL), "{x:?} vs {y:?}");
            assert_eq!(x.direction, y.direction);
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(branch_count(&chebyshev(5), DEFAULT_TOL).unwrap(), 5);
        let id = full_branch_intervals(&UniPoly::x(), DEFAULT_TOL).unwrap();
        assert_eq!(id.count, 1);
        assert!(close(id.intervals[0].lo, -1.0, 1e-12) && close(id.intervals[0].hi, 1.0, 1e-12));
        assert_eq!(
            branch_count(&UniPoly::from_ints(&[0, 0, 1]), DEFAULT_TOL).unwrap(),
            0
        );
        let cube = full_branch_intervals(&UniPoly::from_ints(&[0, 0, 0, 1]), DEFAULT_TOL).unwrap();
        assert_eq!(cube.count, 1);
        // x^3 has the flat critical point x = 0
        assert!(cube.is_degenerate());
    }

    /// Splits a fine sampling of `p` into monotone runs and counts the runs
    /// whose sampled range sweeps across `(-1, 1)`.
    fn sampled_full_branches(coeffs: &[f64], lo: f64, hi: f64, samples: usize) -> usize {
        let vals: Vec<f64> = (0..=samples)
            .map(|i| horner(coeffs, lo + (hi - lo) * i as f64 / samples as f64))
            .collect();
        let slack = 1e-6;
        let mut count = 0;
        let mut start = 0;
        for i in 1..vals.len() {
            let turning = i + 1 < vals.len()
                && (vals[i] - vals[i - 1]).signum() != (vals[i + 1] - vals[i]).signum();
            if turning || i + 1 == vals.len() {
                let (a, b) = (vals[start], vals[i]);
                if a.min(b) <= -1.0 + slack && a.max(b) >= 1.0 - slack {
                    count += 1;
                }
                start = i;
            }
        }
        count
    }

    #[test]
    fn cubic_with_three_full_branches() {
        // x^3 - 3x: the middle piece maps (-1, 1) onto (-2, 2), and each outer
        // monotone piece also sweeps across (-1, 1) once.
        let p = UniPoly::from_ints(&[0, -3, 0, 1]);
        assert_eq!(
            sampled_full_branches(&p.to_f64_coeffs(), -4.0, 4.0, 400_000),
            3
        );
        let b = full_branch_intervals(&p, DEFAULT_TOL).unwrap();
        assert_eq!(b.count, 3);
        let mid = &b.intervals[1];
        assert_eq!(mid.direction, Direction::Decreasing);
        assert!(mid.lo > -1.0 && mid.hi < 1.0);
        assert!(b.intervals[0].lo > 1.5 && b.intervals[2].hi < -1.5);
        for iv in &b.intervals {
            let ends = [
                horner(&p.to_f64_coeffs(), iv.lo),
                horner(&p.to_f64_coeffs(), iv.hi),
            ];
            assert!(ends.iter().all(|e| (e.abs() - 1.0).abs() < 1e-9), "{iv:?}");
        }
    }

    #[test]
    fn sampling_oracle_agrees_on_examples() {
        for (coeffs, want) in [
            (vec![0, 0, 1], 0),
            (vec![0, 0, 0, 1], 1),
            (vec![0, -3, 0, 4], 3),
            (vec![1, 0, -8, 0, 8], 4),
        ] {
            let p = UniPoly::from_ints(&coeffs);
            assert_eq!(
                sampled_full_branches(&p.to_f64_coeffs(), -5.0, 5.0, 200_001),
                want
            );
            assert_eq!(branch_count(&p, DEFAULT_TOL).unwrap(), want);
        }
    }

    #[test]
    fn degree_zero_rejected() {
        assert!(full_branch_intervals(&UniPoly::constant(int(3)), 1e-12).is_err());
    }

    #[test]
    fn generic_inverse_matches_closed_form() {
        let b = cheb_branches(4).unwrap();
        for k in 1..=4 {
            for &y in &[-0.9, -0.3, 0.0, 0.42, 0.97] {
                let closed = branch_inverse(4, k, y).unwrap();
                let numeric = b.inverse(k, y, 1e-14).unwrap();
                assert!(close(closed, numeric, 1e-12), "k={k} y={y}");
            }
        }
    }

    #[test]
    fn json_shape() {
        let text = serde_json::to_string(&cheb_branches(2).unwrap()).unwrap();
        assert_eq!(
            text,
            r#"{"count":2,"intervals":[{"k":1,"lo":0.0,"hi":1.0,"dir":"+"},{"k":2,"lo":-1.0,"hi":0.0,"dir":"-"}],"degenerate_critical":false,"warnings":[]}"#
        );
    }
}
