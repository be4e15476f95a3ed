//! Transversal segments and first-return maps.

use serde::{Deserialize, Serialize};

use super::integrate::{DenseStep, IntegratorConfig, PlanarField, Stepper};
use crate::error::{Error, Result};

/// The segment `base + s * direction`, `0 < s < s_max`, crossed by orbits
/// with `orientation * (normal . F) > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub base: [f64; 2],
    pub direction: [f64; 2],
    pub s_max: f64,
    pub orientation: i8,
}

impl Section {
    pub fn new(base: [f64; 2], direction: [f64; 2], s_max: f64, orientation: i8) -> Result<Self> {
        let n = direction[0].hypot(direction[1]);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidParameter(
                "section direction must be nonzero".into(),
            ));
        }
        if !(s_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "section length must be positive, got {s_max}"
            )));
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidParameter(
                "section orientation must be +1 or -1".into(),
            ));
        }
        Ok(Self {
            base,
            direction: [direction[0] / n, direction[1] / n],
            s_max,
            orientation,
        })
    }

    /// Segment of half-length `half` centred at `point`, perpendicular to
    /// the field there. The orientation is whatever the field gives.
    pub fn through<F: PlanarField + ?Sized>(field: &F, point: [f64; 2], half: f64) -> Result<Self> {
        let f = field.eval(point);
        let norm = f[0].hypot(f[1]);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::DegenerateCrossing {
                point,
                normal_component: 0.0,
            });
        }
        let d = [-f[1] / norm, f[0] / norm];
        let base = [point[0] - half * d[0], point[1] - half * d[1]];
        let mut s = Self::new(base, d, 2.0 * half, 1)?;
        s.orientation = if s.normal_component(f) > 0.0 { 1 } else { -1 };
        Ok(s)
    }

    pub fn normal(&self) -> [f64; 2] {
        [-self.direction[1], self.direction[0]]
    }

    pub fn point(&self, s: f64) -> [f64; 2] {
        [
            self.base[0] + s * self.direction[0],
            self.base[1] + s * self.direction[1],
        ]
    }

    /// Signed distance of `z` from the section line.
    pub fn offset(&self, z: [f64; 2]) -> f64 {
        let n = self.normal();
        n[0] * (z[0] - self.base[0]) + n[1] * (z[1] - self.base[1])
    }

    /// Coordinate of the projection of `z` onto the section line.
    pub fn param(&self, z: [f64; 2]) -> f64 {
        let d = self.direction;
        d[0] * (z[0] - self.base[0]) + d[1] * (z[1] - self.base[1])
    }

    pub fn normal_component(&self, v: [f64; 2]) -> f64 {
        let n = self.normal();
        n[0] * v[0] + n[1] * v[1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReturnConfig {
    pub integ: IntegratorConfig,
    pub t_max: f64,
    /// Crossings whose normal field component is at most this are refused.
    pub eps_transverse: f64,
}

impl Default for ReturnConfig {
    fn default() -> Self {
        Self {
            integ: IntegratorConfig::default(),
            t_max: 1e3,
            eps_transverse: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReturnHit {
    pub s: f64,
    pub time: f64,
    pub point: [f64; 2],
}

/// Locates a sign change of the section offset inside one dense step,
/// returning the step fraction.
fn locate(section: &Section, step: &DenseStep, mut ga: f64, mut gb: f64) -> f64 {
    let (mut a, mut b) = (0.0_f64, 1.0_f64);
    let mut side = 0;
    for _ in 0..200 {
        // Illinois variant of regula falsi
        let mut c = (a * gb - b * ga) / (gb - ga);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let gc = section.offset(step.at_fraction(c));
        if gc == 0.0 || (b - a) * step.h.abs() < 1e-15 {
            return c;
        }
        if (gc > 0.0) == (gb > 0.0) {
            b = c;
            gb = gc;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        } else {
            a = c;
            ga = gc;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        }
        if (b - a) < 1e-16 {
            break;
        }
    }
    0.5 * (a + b)
}

/// First return of the orbit through `section.point(s)`.
pub fn poincare_return<F: PlanarField + ?Sized>(
    field: &F,
    section: &Section,
    s: f64,
    cfg: &ReturnConfig,
) -> Result<ReturnHit> {
    if !(s > 0.0 && s < section.s_max) {
        return Err(Error::OutOfRange { value: s });
    }
    let z0 = section.point(s);
    let nc = section.normal_component(field.eval(z0));
    if nc.abs() <= cfg.eps_transverse {
        return Err(Error::DegenerateCrossing {
            point: z0,
            normal_component: nc,
        });
    }
    if (nc > 0.0) != (section.orientation > 0) {
        return Err(Error::InvalidParameter(
            "field crosses the section against its orientation at the start point".into(),
        ));
    }
    let sigma = f64::from(section.orientation);
    let mut stepper = Stepper::new(field, z0, cfg.integ)?;
    let mut g_prev = 0.0;
    while stepper.time() < cfg.t_max {
        let step = stepper.step()?;
        let g_next = sigma * section.offset(step.end());
        if g_prev < 0.0 && g_next >= 0.0 {
            let theta = if g_next == 0.0 {
                1.0
            } else {
                locate(section, &step, sigma * g_prev, sigma * g_next)
            };
            let z = step.at_fraction(theta);
            let s_hit = section.param(z);
            if s_hit > 0.0 && s_hit < section.s_max {
                let nc = section.normal_component(field.eval(z));
                if nc.abs() <= cfg.eps_transverse {
                    return Err(Error::DegenerateCrossing {
                        point: z,
                        normal_component: nc,
                    });
                }
                return Ok(ReturnHit {
                    s: s_hit,
                    time: step.t0 + theta * step.h,
                    point: z,
                });
            }
        }
        g_prev = g_next;
    }
    Err(Error::NoReturn { t_max: cfg.t_max })
}
