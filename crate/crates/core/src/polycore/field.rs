use super::bi::BiPoly;
use super::rat::Rat;
use super::Degree;

/// Planar polynomial vector field `x' = P(x, y)`, `y' = Q(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct VectorField2 {
    pub p_comp: BiPoly,
    pub q_comp: BiPoly,
}

impl VectorField2 {
    pub fn new(p_comp: BiPoly, q_comp: BiPoly) -> Self {
        Self { p_comp, q_comp }
    }

    /// `max(deg P, deg Q)`.
    pub fn degree(&self) -> Degree {
        self.p_comp.total_degree().max(self.q_comp.total_degree())
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> (Rat, Rat) {
        (self.p_comp.eval(x, y), self.q_comp.eval(x, y))
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> [f64; 2] {
        [self.p_comp.eval_f64(x, y), self.q_comp.eval_f64(x, y)]
    }

    /// The rotation field `(y, -x)`; every circle around the origin is periodic.
    pub fn harmonic() -> Self {
        Self::new(BiPoly::v(), -&BiPoly::u())
    }

    /// Cubic field `(y - x(x^2+y^2-rho^2), -x - y(x^2+y^2-rho^2))`.
    ///
    /// In polar form `r' = r(rho^2 - r^2)`, `theta' = -1`: a single hyperbolic
    /// attracting limit cycle `r = rho` traversed clockwise with period `2 pi`.
    pub fn radial_cubic(rho: &Rat) -> Self {
        let x = BiPoly::u();
        let y = BiPoly::v();
        let excess = &(&(&x * &x) + &(&y * &y)) - &BiPoly::constant(rho * rho);
        let p = &y - &(&x * &excess);
        let q = &(-&x) - &(&y * &excess);
        Self::new(p, q)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.p_comp.scale(c), self.q_comp.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.p_comp.is_zero() && self.q_comp.is_zero()
    }

    /// True when at least one component has a nonzero homogeneous part of
    /// degree `deg(self)`; always the case for nonzero fields.
    pub fn has_genuine_degree(&self) -> bool {
        match self.degree() {
            Degree::NegInfinity => false,
            Degree::Finite(d) => {
                !self.p_comp.homogeneous_part(d).is_zero()
                    || !self.q_comp.homogeneous_part(d).is_zero()
            }
        }
    }
}
