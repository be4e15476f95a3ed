//! Dormand–Prince 5(4) with Hairer's continuous extension.

use crate::error::{Error, Result};
use crate::polycore::VectorField2;

/// Anything that can be evaluated as a planar vector field.
pub trait PlanarField: Sync {
    fn eval(&self, z: [f64; 2]) -> [f64; 2];
}

/// A polynomial field lowered to dense `f64` coefficient grids, evaluated by
/// nested Horner in `u` then `v`.
#[derive(Clone, Debug)]
pub struct CompiledField {
    p: Vec<Vec<f64>>,
    q: Vec<Vec<f64>>,
}

impl CompiledField {
    pub fn new(field: &VectorField2) -> Self {
        Self {
            p: field.p_comp.to_f64_grid(),
            q: field.q_comp.to_f64_grid(),
        }
    }
}

fn horner2(grid: &[Vec<f64>], u: f64, v: f64) -> f64 {
    grid.iter().rev().fold(0.0, |acc, row| {
        acc * u + row.iter().rev().fold(0.0, |a, c| a * v + c)
    })
}

impl PlanarField for CompiledField {
    fn eval(&self, z: [f64; 2]) -> [f64; 2] {
        [horner2(&self.p, z[0], z[1]), horner2(&self.q, z[0], z[1])]
    }
}

impl<F: Fn([f64; 2]) -> [f64; 2] + Sync> PlanarField for F {
    fn eval(&self, z: [f64; 2]) -> [f64; 2] {
        self(z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    /// Used as both the absolute and relative tolerance.
    pub tol: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// States beyond this norm count as blow-up.
    pub blowup: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            h_min: 1e-13,
            h_max: 0.25,
            max_steps: 5_000_000,
            blowup: 1e8,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step with its interpolation coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    cont: [[f64; 2]; 5],
}

impl DenseStep {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn start(&self) -> [f64; 2] {
        self.cont[0]
    }

    pub fn end(&self) -> [f64; 2] {
        self.at_fraction(1.0)
    }

    /// State at `t0 + theta h`, `theta` in `[0, 1]`.
    pub fn at_fraction(&self, theta: f64) -> [f64; 2] {
        let t1 = 1.0 - theta;
        let c = &self.cont;
        std::array::from_fn(|i| {
            c[0][i] + theta * (c[1][i] + t1 * (c[2][i] + theta * (c[3][i] + t1 * c[4][i])))
        })
    }

    pub fn at(&self, t: f64) -> [f64; 2] {
        self.at_fraction((t - self.t0) / self.h)
    }
}

fn axpy(y: [f64; 2], h: f64, terms: &[(f64, &[f64; 2])]) -> [f64; 2] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(a, k)| a * k[i]).sum::<f64>())
}

/// Adaptive stepper. Each call to [`Stepper::step`] returns one accepted
/// step; the step sequence depends only on the inputs.
pub struct Stepper<'a, F: PlanarField + ?Sized> {
    field: &'a F,
    cfg: IntegratorConfig,
    t: f64,
    y: [f64; 2],
    k1: [f64; 2],
    h: f64,
    steps: usize,
}

impl<'a, F: PlanarField + ?Sized> Stepper<'a, F> {
    pub fn new(field: &'a F, start: [f64; 2], cfg: IntegratorConfig) -> Result<Self> {
        if !(cfg.tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "integration tolerance must be positive, got {}",
                cfg.tol
            )));
        }
        let k1 = field.eval(start);
        if !(k1[0].is_finite() && k1[1].is_finite() && start[0].is_finite() && start[1].is_finite())
        {
            return Err(Error::IntegrationFailure {
                t: 0.0,
                state: start,
                reason: "field not finite at the initial point".into(),
            });
        }
        let mut s = Self {
            field,
            cfg,
            t: 0.0,
            y: start,
            k1,
            h: 0.0,
            steps: 0,
        };
        s.h = s.initial_step();
        Ok(s)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> [f64; 2] {
        self.y
    }

    fn scale(&self, y: f64) -> f64 {
        self.cfg.tol + self.cfg.tol * y.abs()
    }

    fn initial_step(&self) -> f64 {
        let norm = |v: [f64; 2], y: [f64; 2]| {
            ((0..2)
                .map(|i| (v[i] / self.scale(y[i])).powi(2))
                .sum::<f64>()
                / 2.0)
                .sqrt()
        };
        let d0 = norm(self.y, self.y);
        let d1 = norm(self.k1, self.y);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        let y1 = axpy(self.y, h0, &[(1.0, &self.k1)]);
        let k2 = self.field.eval(y1);
        let d2 = norm([k2[0] - self.k1[0], k2[1] - self.k1[1]], self.y) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(1.0 / 5.0)
        };
        (100.0 * h0).min(h1).min(self.cfg.h_max)
    }

    fn fail(&self, reason: &str) -> Error {
        Error::IntegrationFailure {
            t: self.t,
            state: self.y,
            reason: reason.into(),
        }
    }

    /// Advances by one accepted step of size at most `h_limit`.
    pub fn step_limited(&mut self, h_limit: f64) -> Result<DenseStep> {
        let mut h = self.h.min(h_limit).min(self.cfg.h_max);
        let mut rejected = false;
        loop {
            if self.steps >= self.cfg.max_steps {
                return Err(self.fail("step budget exhausted"));
            }
            if h < self.cfg.h_min {
                return Err(self.fail("step size underflow"));
            }
            self.steps += 1;
            let f = self.field;
            let y = self.y;
            let k1 = self.k1;
            let k2 = f.eval(axpy(y, h, &[(A21, &k1)]));
            let k3 = f.eval(axpy(y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f.eval(axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f.eval(axpy(
                y,
                h,
                &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)],
            ));
            let k6 = f.eval(axpy(
                y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ));
            let y_new = axpy(
                y,
                h,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = f.eval(y_new);
            let err_vec = axpy(
                [0.0; 2],
                h,
                &[
                    (E1, &k1),
                    (E3, &k3),
                    (E4, &k4),
                    (E5, &k5),
                    (E6, &k6),
                    (E7, &k7),
                ],
            );
            let err = ((0..2)
                .map(|i| (err_vec[i] / self.scale(y[i].abs().max(y_new[i].abs()))).powi(2))
                .sum::<f64>()
                / 2.0)
                .sqrt();
            if !err.is_finite() || !y_new.iter().all(|v| v.is_finite()) {
                h *= 0.2;
                rejected = true;
                continue;
            }
            let fac = 0.9 * err.max(1e-10).powf(-0.2);
            if err <= 1.0 {
                let dense = DenseStep {
                    t0: self.t,
                    h,
                    cont: {
                        let dy = [y_new[0] - y[0], y_new[1] - y[1]];
                        let bspl: [f64; 2] = std::array::from_fn(|i| h * k1[i] - dy[i]);
                        let c4: [f64; 2] = std::array::from_fn(|i| dy[i] - h * k7[i] - bspl[i]);
                        let c5 = axpy(
                            [0.0; 2],
                            h,
                            &[
                                (D1, &k1),
                                (D3, &k3),
                                (D4, &k4),
                                (D5, &k5),
                                (D6, &k6),
                                (D7, &k7),
                            ],
                        );
                        [y, dy, bspl, c4, c5]
                    },
                };
                self.t += h;
                self.y = y_new;
                self.k1 = k7;
                let grow = if rejected {
                    fac.min(1.0)
                } else {
                    fac.min(10.0)
                };
                self.h = (h * grow.max(0.2)).min(self.cfg.h_max);
                if y_new[0].hypot(y_new[1]) > self.cfg.blowup {
                    return Err(self.fail("solution left the working region"));
                }
                return Ok(dense);
            }
            h *= fac.clamp(0.2, 1.0);
            rejected = true;
        }
    }

    pub fn step(&mut self) -> Result<DenseStep> {
        self.step_limited(f64::INFINITY)
    }
}

/// A stored trajectory with dense output over `[0, t_end]`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub steps: Vec<DenseStep>,
}

impl Trajectory {
    pub fn t_end(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.t1())
    }

    pub fn end(&self) -> [f64; 2] {
        self.steps.last().map_or([f64::NAN; 2], |s| s.end())
    }

    /// Dense output at any `t` in `[0, t_end]`.
    pub fn at(&self, t: f64) -> [f64; 2] {
        let idx = self.steps.partition_point(|s| s.t1() < t);
        let step = &self.steps[idx.min(self.steps.len() - 1)];
        step.at(t)
    }

    /// `n + 1` evenly spaced samples including both ends.
    pub fn sample(&self, n: usize) -> Vec<[f64; 2]> {
        let t_end = self.t_end();
        (0..=n)
            .map(|i| self.at(t_end * i as f64 / n as f64))
            .collect()
    }
}

pub fn integrate<F: PlanarField + ?Sized>(
    field: &F,
    start: [f64; 2],
    t_span: f64,
    cfg: IntegratorConfig,
) -> Result<Trajectory> {
    if !(t_span > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "t_span must be positive, got {t_span}"
        )));
    }
    let mut stepper = Stepper::new(field, start, cfg)?;
    let mut steps = Vec::new();
    while t_span - stepper.time() > 1e-14 * t_span.max(1.0) {
        let remaining = t_span - stepper.time();
        steps.push(stepper.step_limited(remaining)?);
    }
    Ok(Trajectory { steps })
}
