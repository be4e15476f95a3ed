//! Fixed points of the return map and their multipliers.

use serde::{Deserialize, Serialize};

use super::integrate::PlanarField;
use super::section::{poincare_return, ReturnConfig, Section};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleConfig {
    pub ret: ReturnConfig,
    /// Stop once `|R(s) - s|` is at most this.
    pub eps_fix: f64,
    /// A cycle is certified hyperbolic when `|mu - 1|` exceeds this.
    pub eps_hyp: f64,
    pub max_iters: usize,
}

impl Default for CycleConfig {
    fn default() -> Self {
        Self {
            ret: ReturnConfig::default(),
            eps_fix: 1e-9,
            eps_hyp: 1e-3,
            max_iters: 60,
        }
    }
}

/// Rectangle `I_i x I_j` a lifted cycle belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchRectangle {
    pub i: usize,
    pub j: usize,
    pub u_range: [f64; 2],
    pub v_range: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitCycleRecord {
    pub anchor: [f64; 2],
    pub period: f64,
    pub multiplier: f64,
    pub rect: Option<BranchRectangle>,
    pub orientation_reversed: bool,
    pub certified: bool,
    pub section: Section,
    pub section_param: f64,
    /// `|R(s) - s|` at the reported anchor.
    pub residual: f64,
}

struct Reversed<'a, F: ?Sized>(&'a F);

impl<F: PlanarField + ?Sized> PlanarField for Reversed<'_, F> {
    fn eval(&self, z: [f64; 2]) -> [f64; 2] {
        let v = self.0.eval(z);
        [-v[0], -v[1]]
    }
}

/// Secant search for `R(s) = s` on `section`, started at `s0`, followed by a
/// central difference for `R'(s)`.
///
/// Repelling cycles push nearby orbits off the section, so when the forward
/// search fails it is repeated for the time-reversed field and the
/// multiplier inverted.
///
/// A fixed point with `|R' - 1| <= eps_hyp` is returned uncertified; it
/// might belong to a period annulus rather than an isolated cycle.
pub fn find_cycle<F: PlanarField + ?Sized>(
    field: &F,
    section: &Section,
    s0: f64,
    cfg: &CycleConfig,
) -> Result<LimitCycleRecord> {
    let forward = search(field, section, s0, cfg);
    let Err(err) = forward else { return forward };
    if matches!(err, Error::InvalidParameter(_) | Error::OutOfRange { .. }) {
        return Err(err);
    }
    let mut flipped = *section;
    flipped.orientation = -section.orientation;
    match search(&Reversed(field), &flipped, s0, cfg) {
        Ok(mut rec) => {
            rec.multiplier = 1.0 / rec.multiplier;
            rec.certified = (rec.multiplier - 1.0).abs() > cfg.eps_hyp;
            rec.section = *section;
            Ok(rec)
        }
        Err(_) => Err(err),
    }
}

fn search<F: PlanarField + ?Sized>(
    field: &F,
    section: &Section,
    s0: f64,
    cfg: &CycleConfig,
) -> Result<LimitCycleRecord> {
    let ret = |s: f64| poincare_return(field, section, s, &cfg.ret);
    let lo = section.s_max * 1e-9;
    let hi = section.s_max * (1.0 - 1e-9);
    let clamp = |s: f64| s.clamp(lo, hi);
    let max_move = 0.25 * section.s_max;

    let mut s_a = clamp(s0);
    let mut hit_a = ret(s_a)?;
    let mut g_a = hit_a.s - s_a;
    let mut residual = g_a.abs();
    let mut iterations = 0;
    if residual > cfg.eps_fix {
        // the return itself is a good second point for a contracting map
        let mut s_b = clamp(hit_a.s);
        if (s_b - s_a).abs() < 1e-12 {
            s_b = clamp(s_a + 1e-6 * section.s_max);
        }
        let mut hit_b = ret(s_b)?;
        let mut g_b = hit_b.s - s_b;
        loop {
            iterations += 1;
            if g_b.abs() <= cfg.eps_fix {
                s_a = s_b;
                hit_a = hit_b;
                residual = g_b.abs();
                break;
            }
            if iterations > cfg.max_iters {
                return Err(Error::SearchFailure {
                    iterations,
                    residual: g_b.abs(),
                });
            }
            let denom = g_b - g_a;
            let mut delta = if denom != 0.0 {
                -g_b * (s_b - s_a) / denom
            } else {
                g_b
            };
            if !delta.is_finite() {
                delta = g_b;
            }
            delta = delta.clamp(-max_move, max_move);
            // back off when the trial point has no return
            let mut trial = None;
            for _ in 0..30 {
                let s_new = clamp(s_b + delta);
                match ret(s_new) {
                    Ok(h) => {
                        trial = Some((s_new, h));
                        break;
                    }
                    Err(Error::NoReturn { .. }) | Err(Error::DegenerateCrossing { .. }) => {
                        delta *= 0.5;
                    }
                    Err(e) => return Err(e),
                }
            }
            let Some((s_new, h_new)) = trial else {
                return Err(Error::SearchFailure {
                    iterations,
                    residual: g_b.abs(),
                });
            };
            s_a = s_b;
            g_a = g_b;
            s_b = s_new;
            hit_b = h_new;
            g_b = hit_b.s - s_b;
        }
    }
    let s_star = s_a;
    let h = (1e-6 * s_star.abs())
        .max(1e-6)
        .min(0.5 * (s_star.min(section.s_max - s_star)));
    let plus = ret(s_star + h)?;
    let minus = ret(s_star - h)?;
    let multiplier = (plus.s - minus.s) / (2.0 * h);
    Ok(LimitCycleRecord {
        anchor: section.point(s_star),
        period: hit_a.time,
        multiplier,
        rect: None,
        orientation_reversed: false,
        certified: (multiplier - 1.0).abs() > cfg.eps_hyp,
        section: *section,
        section_param: s_star,
        residual,
    })
}
