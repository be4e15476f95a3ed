//! Pullback fields and the exact identities they satisfy.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::{rat, BiPoly, Degree, Rat, UniPoly, VectorField2};

/// Invertible affine change of coordinates `z = M w + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap2 {
    matrix: [[Rat; 2]; 2],
    offset: [Rat; 2],
}

impl AffineMap2 {
    pub fn new(matrix: [[Rat; 2]; 2], offset: [Rat; 2]) -> Result<Self> {
        let out = Self { matrix, offset };
        if out.det().is_zero() {
            return Err(Error::InvalidParameter("affine matrix is singular".into()));
        }
        Ok(out)
    }

    pub fn identity() -> Self {
        Self::diagonal(Rat::one(), Rat::one(), [Rat::zero(), Rat::zero()])
            .expect("identity is invertible")
    }

    /// `z = diag(sx, sy) w + offset`.
    pub fn diagonal(sx: Rat, sy: Rat, offset: [Rat; 2]) -> Result<Self> {
        Self::new([[sx, Rat::zero()], [Rat::zero(), sy]], offset)
    }

    pub fn matrix(&self) -> &[[Rat; 2]; 2] {
        &self.matrix
    }

    pub fn offset(&self) -> &[Rat; 2] {
        &self.offset
    }

    pub fn det(&self) -> Rat {
        let m = &self.matrix;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    fn inverse_matrix(&self) -> [[Rat; 2]; 2] {
        let m = &self.matrix;
        let d = self.det();
        [
            [&m[1][1] / &d, -(&m[0][1] / &d)],
            [-(&m[1][0] / &d), &m[0][0] / &d],
        ]
    }

    /// `w = M^-1 (z - b)`, itself an affine map.
    pub fn inverse(&self) -> Self {
        let inv = self.inverse_matrix();
        let b = &self.offset;
        let offset = [
            -(&inv[0][0] * &b[0] + &inv[0][1] * &b[1]),
            -(&inv[1][0] * &b[0] + &inv[1][1] * &b[1]),
        ];
        Self {
            matrix: inv,
            offset,
        }
    }

    pub fn apply(&self, w: [&Rat; 2]) -> [Rat; 2] {
        let m = &self.matrix;
        [
            &m[0][0] * w[0] + &m[0][1] * w[1] + &self.offset[0],
            &m[1][0] * w[0] + &m[1][1] * w[1] + &self.offset[1],
        ]
    }

    pub fn apply_f64(&self, w: [f64; 2]) -> [f64; 2] {
        let f = crate::polycore::rat::to_f64;
        let m = &self.matrix;
        [
            f(&m[0][0]) * w[0] + f(&m[0][1]) * w[1] + f(&self.offset[0]),
            f(&m[1][0]) * w[0] + f(&m[1][1]) * w[1] + f(&self.offset[1]),
        ]
    }
}

/// The field in the new coordinates `w`, where `z = M w + b`:
/// `w' = M^-1 X(M w + b)`.
pub fn affine_transform(x: &VectorField2, a: &AffineMap2) -> VectorField2 {
    let m = &a.matrix;
    let b = &a.offset;
    let linear = |r: usize| {
        &(&BiPoly::u().scale(&m[r][0]) + &BiPoly::v().scale(&m[r][1]))
            + &BiPoly::constant(b[r].clone())
    };
    let (xs, ys) = (linear(0), linear(1));
    let pc = x.p_comp.compose(&xs, &ys);
    let qc = x.q_comp.compose(&xs, &ys);
    let inv = a.inverse_matrix();
    VectorField2::new(
        &pc.scale(&inv[0][0]) + &qc.scale(&inv[0][1]),
        &pc.scale(&inv[1][0]) + &qc.scale(&inv[1][1]),
    )
}

/// Closed axis-aligned rectangle `[x_lo, x_hi] x [y_lo, y_hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundingBox {
    pub x_lo: Rat,
    pub x_hi: Rat,
    pub y_lo: Rat,
    pub y_hi: Rat,
}

impl BoundingBox {
    pub fn new(x_lo: Rat, x_hi: Rat, y_lo: Rat, y_hi: Rat) -> Self {
        Self {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        }
    }

    pub fn square(half: Rat) -> Self {
        Self::new(-half.clone(), half.clone(), -half.clone(), half)
    }
}

/// Moves `bbox` into the open square `(-rho, rho)^2`.
///
/// Returns the transformed field and the map `A` with `z = A(w)` taking new
/// coordinates back to the original ones. A box already inside the closed
/// square gets the identity. Otherwise the box centre goes to the origin and
/// its larger half-width is scaled to `rho / 2`.
pub fn normalize_into_box(
    x: &VectorField2,
    bbox: &BoundingBox,
    rho: &Rat,
) -> Result<(VectorField2, AffineMap2)> {
    if !(rho.is_positive() && *rho < Rat::one()) {
        return Err(Error::InvalidParameter(format!(
            "rho = {rho} not in (0, 1)"
        )));
    }
    let wx = &bbox.x_hi - &bbox.x_lo;
    let wy = &bbox.y_hi - &bbox.y_lo;
    if !wx.is_positive() || !wy.is_positive() {
        return Err(Error::InvalidParameter(
            "bounding box must have positive width and height".into(),
        ));
    }
    let neg_rho = -rho.clone();
    let inside =
        bbox.x_lo >= neg_rho && bbox.x_hi <= *rho && bbox.y_lo >= neg_rho && bbox.y_hi <= *rho;
    if inside {
        return Ok((x.clone(), AffineMap2::identity()));
    }
    let half = rat(1, 2);
    let center = [
        (&bbox.x_lo + &bbox.x_hi) * &half,
        (&bbox.y_lo + &bbox.y_hi) * &half,
    ];
    let half_width = std::cmp::max(wx, wy) * &half;
    // z = s w + c with s * (rho / 2) = half_width
    let s = half_width * Rat::from_integer(2.into()) / rho;
    let a = AffineMap2::diagonal(s.clone(), s, center)?;
    Ok((affine_transform(x, &a), a))
}

/// Separable pullback `Y` of `X` through `Phi(u, v) = (p(u), p(v))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackResult {
    pub field: VectorField2,
    #[serde(rename = "cover")]
    pub cover_poly: UniPoly,
    #[serde(rename = "d")]
    pub source_degree: Degree,
    #[serde(rename = "m")]
    pub cover_degree: u32,
    /// `p'(u) p'(v)`.
    pub lambda: BiPoly,
    #[serde(rename = "deg_Y")]
    pub field_degree: Degree,
}

/// `Y = (p'(v) P(p(u), p(v)), p'(u) Q(p(u), p(v)))`.
pub fn build_pullback(x: &VectorField2, p: &UniPoly) -> Result<PullbackResult> {
    let m = match p.degree() {
        Degree::Finite(m) if m >= 2 => m,
        d => {
            return Err(Error::InvalidParameter(format!(
                "cover polynomial must have degree >= 2, got {d}"
            )))
        }
    };
    let dp = p.derivative();
    let dp_u = BiPoly::from_uni_u(&dp);
    let dp_v = BiPoly::from_uni_v(&dp);
    let field = VectorField2::new(
        &dp_v * &x.p_comp.compose_separable(p),
        &dp_u * &x.q_comp.compose_separable(p),
    );
    let field_degree = field.degree();
    Ok(PullbackResult {
        field,
        cover_poly: p.clone(),
        source_degree: x.degree(),
        cover_degree: m,
        lambda: &dp_u * &dp_v,
        field_degree,
    })
}

/// The two residuals `p'(u) Y_u - lambda P o Phi` and
/// `p'(v) Y_v - lambda Q o Phi`; both vanish identically for a correct
/// pullback.
pub fn conjugacy_residuals(r: &PullbackResult, x: &VectorField2) -> (BiPoly, BiPoly) {
    let p = &r.cover_poly;
    let dp = p.derivative();
    let (dp_u, dp_v) = (BiPoly::from_uni_u(&dp), BiPoly::from_uni_v(&dp));
    let lambda = &dp_u * &dp_v;
    // general substitution, not the outer-product path used to build Y
    let (pu, pv) = (BiPoly::from_uni_u(p), BiPoly::from_uni_v(p));
    let res_u = &(&dp_u * &r.field.p_comp) - &(&lambda * &x.p_comp.compose(&pu, &pv));
    let res_v = &(&dp_v * &r.field.q_comp) - &(&lambda * &x.q_comp.compose(&pu, &pv));
    (res_u, res_v)
}

/// `DPhi . Y = lambda X o Phi` as an exact polynomial identity.
pub fn verify_conjugacy(r: &PullbackResult, x: &VectorField2) -> bool {
    let (a, b) = conjugacy_residuals(r, x);
    a.is_zero() && b.is_zero()
}

/// `deg(Y) == m deg(X) + (m - 1)`.
pub fn check_exact_degree(r: &PullbackResult, x: &VectorField2) -> bool {
    match x.degree() {
        Degree::Finite(d) => {
            let m = r.cover_degree;
            r.field.degree() == Degree::Finite(m * d + m - 1)
        }
        Degree::NegInfinity => false,
    }
}

/// `Y = adj(DPhi) X(Phi)` for a general polynomial map `Phi = (p, q)`.
pub fn build_adjugate_pullback(x: &VectorField2, p: &BiPoly, q: &BiPoly) -> Result<VectorField2> {
    for (name, f) in [("p", p), ("q", q)] {
        if f.total_degree() <= Degree::Finite(0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be nonconstant"
            )));
        }
    }
    let pp = x.p_comp.compose(p, q);
    let qp = x.q_comp.compose(p, q);
    let (pu, pv) = (p.partial_u(), p.partial_v());
    let (qu, qv) = (q.partial_u(), q.partial_v());
    Ok(VectorField2::new(
        &(&qv * &pp) - &(&pv * &qp),
        &(&pu * &qp) - &(&qu * &pp),
    ))
}

/// `DPhi . Y = det(DPhi) X o Phi` for an adjugate pullback.
pub fn verify_conjugacy_adjugate(
    y: &VectorField2,
    x: &VectorField2,
    p: &BiPoly,
    q: &BiPoly,
) -> bool {
    let (pu, pv) = (p.partial_u(), p.partial_v());
    let (qu, qv) = (q.partial_u(), q.partial_v());
    let det = &(&pu * &qv) - &(&pv * &qu);
    let first = &(&(&pu * &y.p_comp) + &(&pv * &y.q_comp)) - &(&det * &x.p_comp.compose(p, q));
    let second = &(&(&qu * &y.p_comp) + &(&qv * &y.q_comp)) - &(&det * &x.q_comp.compose(p, q));
    first.is_zero() && second.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{chebyshev, int};

    fn rotation() -> VectorField2 {
        VectorField2::harmonic()
    }

    #[test]
    fn identity_transform_is_noop() {
        let x = VectorField2::radial_cubic(&rat(1, 2));
        assert_eq!(affine_transform(&x, &AffineMap2::identity()), x);
    }

    #[test]
    fn rotation_is_scale_invariant() {
        let a = AffineMap2::diagonal(rat(1, 2), rat(1, 2), [int(0), int(0)]).unwrap();
        assert_eq!(affine_transform(&rotation(), &a), rotation());
    }

    #[test]
    fn cubic_keeps_degree_under_scaling() {
        let x = VectorField2::radial_cubic(&rat(1, 2));
        let a = AffineMap2::diagonal(rat(1, 4), rat(1, 4), [int(0), int(0)]).unwrap();
        let t = affine_transform(&x, &a);
        assert_eq!(t.degree(), Degree::Finite(3));
        assert_eq!(affine_transform(&t, &a.inverse()), x);
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = [[int(1), int(2)], [int(2), int(4)]];
        assert!(matches!(
            AffineMap2::new(m, [int(0), int(0)]),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn general_affine_round_trip() {
        let a = AffineMap2::new(
            [[int(2), rat(1, 3)], [int(-1), rat(5, 7)]],
            [rat(1, 2), int(-3)],
        )
        .unwrap();
        let x = VectorField2::radial_cubic(&rat(3, 5));
        let t = affine_transform(&x, &a);
        assert_eq!(t.degree(), x.degree());
        assert_eq!(affine_transform(&t, &a.inverse()), x);
        let w = [rat(2, 9), int(4)];
        let z = a.apply([&w[0], &w[1]]);
        assert_eq!(a.inverse().apply([&z[0], &z[1]]), w);
    }

    #[test]
    fn normalization_cases() {
        let x = VectorField2::radial_cubic(&rat(1, 2));
        let rho = rat(1, 2);
        let (same, a) = normalize_into_box(&x, &BoundingBox::square(rho.clone()), &rho).unwrap();
        assert_eq!(a, AffineMap2::identity());
        assert_eq!(same, x);

        let (_, a) = normalize_into_box(&x, &BoundingBox::square(int(10)), &rho).unwrap();
        let inv = a.inverse();
        assert_eq!(inv.matrix()[0][0], rat(1, 40));
        for (cx, cy) in [(-10, -10), (-10, 10), (10, -10), (10, 10)] {
            let w = inv.apply([&int(cx), &int(cy)]);
            assert!(w.iter().all(|c| c.abs() < rho), "{w:?}");
        }

        let bbox = BoundingBox::new(int(3), int(5), int(-1), int(1));
        let (_, a) = normalize_into_box(&x, &bbox, &rho).unwrap();
        let inv = a.inverse();
        assert_eq!(inv.apply([&int(4), &int(0)]), [int(0), int(0)]);
        for (cx, cy) in [(3, -1), (3, 1), (5, -1), (5, 1)] {
            let w = inv.apply([&int(cx), &int(cy)]);
            assert!(w.iter().all(|c| c.abs() < rho));
        }

        let flat = BoundingBox::new(int(0), int(0), int(-1), int(1));
        assert!(normalize_into_box(&x, &flat, &rho).is_err());
        assert!(normalize_into_box(&x, &bbox, &int(1)).is_err());
    }

    #[test]
    fn constant_field_pullback() {
        let x = VectorField2::new(BiPoly::constant(int(1)), BiPoly::zero());
        let r = build_pullback(&x, &chebyshev(2)).unwrap();
        assert_eq!(r.field.p_comp, BiPoly::term(int(4), 0, 1));
        assert!(r.field.q_comp.is_zero());
        assert!(verify_conjugacy(&r, &x));
    }

    #[test]
    fn rotation_pullback_by_t2() {
        let r = build_pullback(&rotation(), &chebyshev(2)).unwrap();
        let want = VectorField2::new(
            BiPoly::from_terms([((0, 3), int(8)), ((0, 1), int(-4))]),
            BiPoly::from_terms([((3, 0), int(-8)), ((1, 0), int(4))]),
        );
        assert_eq!(r.field, want);
        assert_eq!(r.field.degree(), Degree::Finite(3));
        assert!(check_exact_degree(&r, &rotation()));
    }

    #[test]
    fn worked_cubic_pullback() {
        let x = VectorField2::radial_cubic(&rat(1, 2));
        let r = build_pullback(&x, &chebyshev(3)).unwrap();
        assert_eq!(r.field.degree(), Degree::Finite(11));
        assert_eq!(r.field_degree, Degree::Finite(11));
        assert!(check_exact_degree(&r, &x));
        let (a, b) = conjugacy_residuals(&r, &x);
        assert!(a.is_zero() && b.is_zero());
        assert!(verify_conjugacy(&r, &x));
        // expanded independently at (1/3, -2/5)
        let (yu, yv) = r.field.eval(&rat(1, 3), &rat(-2, 5));
        assert_eq!(yu, rat(-2593604957, 1139062500));
        assert_eq!(yv, rat(1248400031, 1708593750));
        assert_eq!(r.field.p_comp.num_terms(), 19);
        assert_eq!(r.field.q_comp.num_terms(), 19);
    }

    #[test]
    fn perturbed_pullback_fails_identity() {
        let x = VectorField2::radial_cubic(&rat(1, 2));
        let mut r = build_pullback(&x, &chebyshev(3)).unwrap();
        r.field.p_comp = &r.field.p_comp + &BiPoly::constant(int(1));
        let (a, b) = conjugacy_residuals(&r, &x);
        assert_eq!(a, BiPoly::from_uni_u(&chebyshev(3).derivative()));
        assert!(b.is_zero());
        assert!(!verify_conjugacy(&r, &x));
    }

    #[test]
    fn cover_degree_one_rejected() {
        assert!(matches!(
            build_pullback(&rotation(), &UniPoly::x()),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn adjugate_reduces_to_separable() {
        let x = VectorField2::radial_cubic(&rat(1, 3));
        let p = chebyshev(3);
        let y =
            build_adjugate_pullback(&x, &BiPoly::from_uni_u(&p), &BiPoly::from_uni_v(&p)).unwrap();
        assert_eq!(y, build_pullback(&x, &p).unwrap().field);
    }

    #[test]
    fn adjugate_shear_example() {
        let x = VectorField2::new(BiPoly::constant(int(1)), BiPoly::zero());
        let p = &BiPoly::u() + &(&BiPoly::v() * &BiPoly::v());
        let q = BiPoly::v();
        let y = build_adjugate_pullback(&x, &p, &q).unwrap();
        assert_eq!(
            y,
            VectorField2::new(BiPoly::constant(int(1)), BiPoly::zero())
        );
        assert!(verify_conjugacy_adjugate(&y, &x, &p, &q));
        assert!(build_adjugate_pullback(&x, &BiPoly::constant(int(2)), &q).is_err());
    }

    #[test]
    fn pullback_json_metadata() {
        let x = VectorField2::radial_cubic(&rat(1, 2));
        let r = build_pullback(&x, &chebyshev(3)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["m"], 3);
        assert_eq!(v["d"], 3);
        assert_eq!(v["deg_Y"], 11);
        let back: PullbackResult = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
