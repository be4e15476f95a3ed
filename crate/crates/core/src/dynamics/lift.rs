//! Lifting a base cycle of `X` to one cycle of `Y` per branch rectangle.

use rayon::prelude::*;
use serde::Serialize;

use super::cycle::{find_cycle, BranchRectangle, CycleConfig, LimitCycleRecord};
use super::integrate::{integrate, CompiledField, PlanarField};
use super::section::Section;
use crate::branches::{branch_inverse, cheb_branches, full_branch_intervals, BranchSet};
use crate::error::{Error, Result};
use crate::numfmt::fmt_num;
use crate::polycore::{chebyshev, rat::to_f64, BiPoly, Rat, VectorField2};
use crate::pullback::{build_pullback, PullbackResult};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftConfig {
    pub cycle: CycleConfig,
    /// Lifted anchors closer than this to a rectangle edge are rejected.
    pub margin: f64,
    /// Tolerance for branch inverses and interval detection on general covers.
    pub branch_tol: f64,
}

impl Default for LiftConfig {
    fn default() -> Self {
        Self {
            cycle: CycleConfig::default(),
            margin: 1e-3,
            branch_tol: 1e-13,
        }
    }
}

enum Inverse {
    Chebyshev(usize),
    General(BranchSet),
}

impl Inverse {
    fn eval(&self, k: usize, y: f64, tol: f64) -> Result<f64> {
        match self {
            Inverse::Chebyshev(m) => branch_inverse(*m, k, y),
            Inverse::General(set) => set.inverse(k, y, tol),
        }
    }
}

/// Half-length of a section through `seed` along `d` staying inside the
/// rectangle shrunk by `margin`.
fn section_reach(seed: [f64; 2], d: [f64; 2], rect: &BranchRectangle, margin: f64) -> f64 {
    let bounds = [rect.u_range, rect.v_range];
    let mut reach = f64::INFINITY;
    for k in 0..2 {
        if d[k].abs() > 0.0 {
            let room = (seed[k] - bounds[k][0] - margin).min(bounds[k][1] - margin - seed[k]);
            reach = reach.min(room / d[k].abs());
        }
    }
    reach
}

fn lift_one(
    field: &CompiledField,
    set: &BranchSet,
    inverse: &Inverse,
    anchor: [f64; 2],
    (i, j): (usize, usize),
    cfg: &LiftConfig,
) -> Result<LimitCycleRecord> {
    let bi = set.interval(i).expect("branch index in range");
    let bj = set.interval(j).expect("branch index in range");
    let rect = BranchRectangle {
        i,
        j,
        u_range: [bi.lo, bi.hi],
        v_range: [bj.lo, bj.hi],
    };
    let seed = [
        inverse.eval(i, anchor[0], cfg.branch_tol)?,
        inverse.eval(j, anchor[1], cfg.branch_tol)?,
    ];
    let probe = Section::through(field, seed, 1.0)?;
    let width = (rect.u_range[1] - rect.u_range[0]).min(rect.v_range[1] - rect.v_range[0]);
    let half = (0.25 * width).min(0.9 * section_reach(seed, probe.direction, &rect, cfg.margin));
    if !(half > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lift seed for rectangle ({i},{j}) lies within the margin of its edge"
        )));
    }
    let section = Section::through(field, seed, half)?;
    let mut rec = find_cycle(field, &section, half, &cfg.cycle)?;
    let a = rec.anchor;
    let inside = a[0] > rect.u_range[0] + cfg.margin
        && a[0] < rect.u_range[1] - cfg.margin
        && a[1] > rect.v_range[0] + cfg.margin
        && a[1] < rect.v_range[1] - cfg.margin;
    if !inside || !rec.certified {
        return Err(Error::SearchFailure {
            iterations: 0,
            residual: rec.residual,
        });
    }
    rec.orientation_reversed = bi.direction.sign() * bj.direction.sign() < 0;
    rec.rect = Some(rect);
    Ok(rec)
}

/// One cycle of `y.field` per rectangle `I_i x I_j`, in `(i, j)` order.
///
/// `base` must be a certified cycle of the source field whose anchor lies
/// in `(-1, 1)^2`; the branch inverses of its anchor seed each search.
pub fn lift_cycles(
    y: &PullbackResult,
    base: &LimitCycleRecord,
    m: u32,
    cfg: &LiftConfig,
) -> Result<Vec<LimitCycleRecord>> {
    if m != y.cover_degree {
        return Err(Error::InvalidParameter(format!(
            "cover degree {} does not match m = {m}",
            y.cover_degree
        )));
    }
    if !base.certified {
        return Err(Error::InvalidParameter(
            "base cycle is not certified hyperbolic".into(),
        ));
    }
    let anchor = base.anchor;
    if !(anchor.iter().all(|c| c.abs() < 1.0)) {
        return Err(Error::OutOfRange {
            value: anchor[0].abs().max(anchor[1].abs()),
        });
    }
    let (set, inverse) = if y.cover_poly == chebyshev(m as usize) {
        (cheb_branches(m as usize)?, Inverse::Chebyshev(m as usize))
    } else {
        let set = full_branch_intervals(&y.cover_poly, 1e-12)?;
        (set.clone(), Inverse::General(set))
    };
    let field = CompiledField::new(&y.field);
    let n = set.count;
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
    let results: Vec<_> = pairs
        .par_iter()
        .map(|&ij| lift_one(&field, &set, &inverse, anchor, ij, cfg))
        .collect();
    let mut found = Vec::with_capacity(results.len());
    let mut failed = Vec::new();
    for (ij, r) in pairs.iter().zip(results) {
        match r {
            Ok(rec) => found.push(rec),
            Err(_) => failed.push(*ij),
        }
    }
    if failed.is_empty() {
        Ok(found)
    } else {
        Err(Error::PartialLift {
            failed,
            found: found.len(),
            expected: n * n,
        })
    }
}

/// `T_m(u)^2 + T_m(v)^2 - rho^2`, whose zero set is the full preimage of the
/// circle of radius `rho`.
pub fn implicit_lift_curve(m: u32, rho: &Rat) -> Result<BiPoly> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let t = chebyshev(m as usize);
    let tu = BiPoly::from_uni_u(&t);
    let tv = BiPoly::from_uni_v(&t);
    Ok(&(&(&tu * &tu) + &(&tv * &tv)) - &BiPoly::constant(rho * rho))
}

/// Largest `|curve|` along one period of the orbit through `rec.anchor`.
pub fn curve_residual_along<F: PlanarField + ?Sized>(
    field: &F,
    rec: &LimitCycleRecord,
    curve: &BiPoly,
    samples: usize,
    cfg: &CycleConfig,
) -> Result<f64> {
    let tr = integrate(field, rec.anchor, rec.period, cfg.ret.integ)?;
    Ok(tr
        .sample(samples)
        .into_iter()
        .map(|z| curve.eval_f64(z[0], z[1]).abs())
        .fold(0.0, f64::max))
}

/// Everything produced by the radial-cubic example.
#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub m: u32,
    pub rho: f64,
    pub source: VectorField2,
    pub pullback: PullbackResult,
    pub base: LimitCycleRecord,
    pub lifts: Vec<LimitCycleRecord>,
    pub curve: BiPoly,
    /// Largest implicit-curve residual along each lifted orbit.
    pub curve_residuals: Vec<f64>,
}

/// Base cycle of `x` on the positive horizontal axis, searched from `s0`.
pub fn base_cycle_on_axis(
    x: &VectorField2,
    s0: f64,
    cfg: &CycleConfig,
) -> Result<LimitCycleRecord> {
    let field = CompiledField::new(x);
    let v = field.eval([s0, 0.0]);
    let orientation = if v[1] > 0.0 { 1 } else { -1 };
    let section = Section::new([0.0, 0.0], [1.0, 0.0], 1.0, orientation)?;
    find_cycle(&field, &section, s0, cfg)
}

/// Pulls the radial cubic with cycle radius `rho` back through `T_m`,
/// locates its cycle and lifts it to all `m^2` rectangles.
pub fn worked_example(m: u32, rho: &Rat, cfg: &LiftConfig) -> Result<ExampleReport> {
    let rho_f = to_f64(rho);
    if !(rho_f > 0.0 && rho_f < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rho must lie in (0, 1), got {rho}"
        )));
    }
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "m must be at least 2, got {m}"
        )));
    }
    let source = VectorField2::radial_cubic(rho);
    let pullback = build_pullback(&source, &chebyshev(m as usize))?;
    let base = base_cycle_on_axis(&source, 0.5 * (rho_f + 1.0), &cfg.cycle)?;
    let lifts = lift_cycles(&pullback, &base, m, cfg)?;
    let curve = implicit_lift_curve(m, rho)?;
    let field = CompiledField::new(&pullback.field);
    let curve_residuals = lifts
        .iter()
        .map(|rec| curve_residual_along(&field, rec, &curve, 200, &cfg.cycle))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExampleReport {
        m,
        rho: rho_f,
        source,
        pullback,
        base,
        lifts,
        curve,
        curve_residuals,
    })
}

pub const CYCLE_CSV_HEADER: &str = "i,j,anchor_u,anchor_v,period,multiplier,orientation_reversed";

/// One row per lifted cycle; records without a rectangle get empty `i,j`.
pub fn cycles_to_csv(records: &[LimitCycleRecord]) -> String {
    let mut out = String::from(CYCLE_CSV_HEADER);
    out.push('\n');
    for r in records {
        let (i, j) = r.rect.map_or((String::new(), String::new()), |b| {
            (b.i.to_string(), b.j.to_string())
        });
        out.push_str(&format!(
            "{i},{j},{},{},{},{},{}\n",
            fmt_num(r.anchor[0]),
            fmt_num(r.anchor[1]),
            fmt_num(r.period),
            fmt_num(r.multiplier),
            r.orientation_reversed
        ));
    }
    out
}

pub fn cycles_to_json(records: &[LimitCycleRecord]) -> String {
    serde_json::to_string_pretty(records).expect("cycle records always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rat;
    use std::f64::consts::PI;

    #[test]
    fn implicit_curve_for_cubic_cover() {
        let c = implicit_lift_curve(3, &rat(1, 2)).unwrap();
        // T_3(u)^2 = 16u^6 - 24u^4 + 9u^2
        assert_eq!(c.coeff(6, 0), rat(16, 1));
        assert_eq!(c.coeff(0, 4), rat(-24, 1));
        assert_eq!(c.coeff(2, 0), rat(9, 1));
        assert_eq!(c.coeff(0, 0), rat(-1, 4));
        assert_eq!(c.num_terms(), 7);
    }

    #[test]
    fn worked_example_lifts_nine_cycles() {
        let rep = worked_example(3, &rat(1, 2), &LiftConfig::default()).unwrap();
        assert_eq!(rep.lifts.len(), 9);
        let stable = (-PI).exp();
        let unstable = PI.exp();
        for rec in &rep.lifts {
            let b = rec.rect.unwrap();
            let expect_rev = (b.i + b.j) % 2 == 1;
            assert_eq!(rec.orientation_reversed, expect_rev, "({}, {})", b.i, b.j);
            let want = if expect_rev { unstable } else { stable };
            assert!(
                ((rec.multiplier - want) / want).abs() < 1e-3,
                "({}, {}) {}",
                b.i,
                b.j,
                rec.multiplier
            );
        }
        assert!(
            rep.curve_residuals.iter().all(|r| *r < 1e-6),
            "{:?}",
            rep.curve_residuals
        );
        let anchors: Vec<_> = rep.lifts.iter().map(|r| r.anchor).collect();
        let again = worked_example(3, &rat(1, 2), &LiftConfig::default()).unwrap();
        assert_eq!(
            anchors,
            again.lifts.iter().map(|r| r.anchor).collect::<Vec<_>>()
        );
    }

    #[test]
    fn csv_has_one_row_per_cycle() {
        let rep = worked_example(2, &rat(1, 2), &LiftConfig::default()).unwrap();
        let csv = cycles_to_csv(&rep.lifts);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], CYCLE_CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("1,1,"));
    }

    #[test]
    fn mismatched_degree_rejected() {
        let rep = worked_example(2, &rat(1, 2), &LiftConfig::default()).unwrap();
        let err = lift_cycles(&rep.pullback, &rep.base, 3, &LiftConfig::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn general_cover_uses_numeric_branches() {
        use crate::polycore::UniPoly;
        // x^3 - 3x has three full branches, two of them outside [-1, 1]
        let p = UniPoly::from_ints(&[0, -3, 0, 1]);
        let source = VectorField2::radial_cubic(&rat(1, 2));
        let y = build_pullback(&source, &p).unwrap();
        let base = base_cycle_on_axis(&source, 0.75, &CycleConfig::default()).unwrap();
        let lifts = lift_cycles(&y, &base, 3, &LiftConfig::default()).unwrap();
        assert_eq!(lifts.len(), 9);
        for rec in &lifts {
            let (u, v) = (rec.anchor[0], rec.anchor[1]);
            let pu = u * u * u - 3.0 * u;
            let pv = v * v * v - 3.0 * v;
            assert!((pu.hypot(pv) - 0.5).abs() < 1e-7);
        }
    }
}
