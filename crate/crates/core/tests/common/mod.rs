//! Independent oracles shared by the integration tests.
//!
//! The transverse quotient is the round sphere of radius 1/2. In the
//! stereographic plane `z = u + iv` its metric is `λ (du² + dv²)` with
//! `λ = (1 + |z|²)^{-2}`, the moment coordinate is `x = (|z|² - 1)/(|z|² + 1)`,
//! and a potential φ changes the conformal factor to `λ + ∂∂̄φ`. Everything
//! below is evaluated with two-dimensional Cartesian finite differences on
//! that plane, never touching the one-dimensional reduction.

#![allow(dead_code)]

/// Eighth-order central second difference along `(du, dv)`, unscaled.
fn second_along(f: &dyn Fn(f64, f64) -> f64, u: f64, v: f64, du: f64, dv: f64) -> f64 {
    const W: [f64; 4] = [8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
    let at = |k: f64| f(u + k * du, v + k * dv);
    let wings: f64 = W.iter().enumerate().map(|(i, w)| w * (at(i as f64 + 1.0) + at(-(i as f64) - 1.0))).sum();
    wings - 205.0 * at(0.0) / 72.0
}

/// Flat Laplacian `f_uu + f_vv` with step `h`.
pub fn flat_laplacian(f: &dyn Fn(f64, f64) -> f64, u: f64, v: f64, h: f64) -> f64 {
    (second_along(f, u, v, h, 0.0) + second_along(f, u, v, 0.0, h)) / (h * h)
}

pub fn moment(u: f64, v: f64) -> f64 {
    let r2 = u * u + v * v;
    (r2 - 1.0) / (r2 + 1.0)
}

pub fn round_factor(u: f64, v: f64) -> f64 {
    let r2 = u * u + v * v;
    1.0 / ((1.0 + r2) * (1.0 + r2))
}

/// Plane point at moment coordinate `x ≤ 0` and polar angle `a`.
pub fn plane_point(x: f64, a: f64) -> (f64, f64) {
    let rho = ((1.0 + x) / (1.0 - x)).sqrt();
    (rho * a.cos(), rho * a.sin())
}

pub struct FdOracle<'a> {
    phi: &'a dyn Fn(f64) -> f64,
    pub h_inner: f64,
    pub h_outer: f64,
    /// Polar angle of the sample points; generic so both axes contribute.
    pub angle: f64,
}

impl<'a> FdOracle<'a> {
    pub fn new(phi: &'a dyn Fn(f64) -> f64) -> Self {
        Self { phi, h_inner: 1e-2, h_outer: 2e-2, angle: 0.7 }
    }

    /// Values at `x` come from the chart around the nearer pole; the
    /// antipodal map `x ↦ -x` is an isometry of the round sphere.
    fn chart(&self, x: f64) -> (f64, Box<dyn Fn(f64) -> f64 + '_>) {
        if x > 0.0 {
            (-x, Box::new(move |y: f64| (self.phi)(-y)))
        } else {
            (x, Box::new(move |y: f64| (self.phi)(y)))
        }
    }

    fn factor_in(&self, phi: &dyn Fn(f64) -> f64, u: f64, v: f64) -> f64 {
        let p = |a: f64, b: f64| phi(moment(a, b));
        round_factor(u, v) + 0.25 * flat_laplacian(&p, u, v, self.h_inner)
    }

    /// Volume ratio `λ_φ / λ`.
    pub fn ratio(&self, x: f64) -> f64 {
        let (y, phi) = self.chart(x);
        let (u, v) = plane_point(y, self.angle);
        self.factor_in(&*phi, u, v) / round_factor(u, v)
    }

    /// Gauss curvature `-Δ_flat log λ_φ / (2 λ_φ)`.
    pub fn scalar_curvature(&self, x: f64) -> f64 {
        let (y, phi) = self.chart(x);
        let (u, v) = plane_point(y, self.angle);
        let log_factor = |a: f64, b: f64| self.factor_in(&*phi, a, b).ln();
        -flat_laplacian(&log_factor, u, v, self.h_outer) / (2.0 * self.factor_in(&*phi, u, v))
    }

    /// `Δ_φ f = Δ_flat f / λ_φ` for an axisymmetric `f`.
    pub fn laplacian(&self, f: &dyn Fn(f64) -> f64, x: f64) -> f64 {
        let (y, phi) = self.chart(x);
        let (u, v) = plane_point(y, self.angle);
        let g = |a: f64, b: f64| {
            let m = moment(a, b);
            if x > 0.0 {
                f(-m)
            } else {
                f(m)
            }
        };
        flat_laplacian(&g, u, v, self.h_inner) / self.factor_in(&*phi, u, v)
    }
}

/// Sample points in the open interval, away from the poles.
pub fn probe_points() -> Vec<f64> {
    vec![-0.9, -0.63, -0.31, -0.05, 0.12, 0.44, 0.71, 0.9]
}
