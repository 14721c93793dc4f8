//! Gauss–Legendre collocation on the moment interval [-1, 1].
//!
//! Fields are stored as values at the `n` quadrature nodes. The reference
//! measure is `dx/2`, so the quadrature weights sum to one. The basic
//! Laplacian of the round reference metric (curvature 4) acts diagonally on
//! Legendre polynomials: `Δ P_k = -4 k (k+1) P_k`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Field = DVector<f64>;

#[derive(Clone, Debug)]
pub struct Grid {
    inner: Arc<GridData>,
}

#[derive(Debug)]
struct GridData {
    nodes: Field,
    weights: Field,
    /// `P_k(x_i)`, rows = nodes, columns = degree.
    vandermonde: DMatrix<f64>,
    /// Values to Legendre coefficients.
    analysis: DMatrix<f64>,
    laplacian: DMatrix<f64>,
    /// Eigenvalues `-4k(k+1)` of the reference Laplacian.
    eigenvalues: Vec<f64>,
    /// Coefficient-space derivative.
    dcoef: DMatrix<f64>,
    /// `-W Δ`, symmetric positive semidefinite.
    stiffness: DMatrix<f64>,
    d1: DMatrix<f64>,
    d2: DMatrix<f64>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n()
    }
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::Config(format!("grid needs at least {MIN_NODES} nodes, got {n}")));
        }
        let (nodes, gw) = gauss_legendre(n);
        let weights = gw.map(|w| 0.5 * w);
        let vandermonde = legendre_vandermonde(&nodes, n);

        let mut analysis = vandermonde.transpose();
        for k in 0..n {
            for i in 0..n {
                analysis[(k, i)] *= (2 * k + 1) as f64 * weights[i];
            }
        }

        let eig: Vec<f64> = (0..n).map(|k| -4.0 * (k * (k + 1)) as f64).collect();
        let mut scaled = analysis.clone();
        for k in 0..n {
            scaled.row_mut(k).scale_mut(eig[k]);
        }
        let laplacian = &vandermonde * scaled;

        let mut wv = vandermonde.clone();
        for i in 0..n {
            wv.row_mut(i).scale_mut(weights[i]);
        }
        let mut wvd = wv.clone();
        for k in 0..n {
            wvd.column_mut(k).scale_mut(-eig[k] * (2 * k + 1) as f64);
        }
        let stiffness = wvd * wv.transpose();

        let dcoef = derivative_coefficients(n);
        let d1 = &vandermonde * &dcoef * &analysis;
        let d2 = &vandermonde * (&dcoef * &dcoef) * &analysis;

        Ok(Grid {
            inner: Arc::new(GridData {
                nodes,
                weights,
                vandermonde,
                analysis,
                laplacian,
                eigenvalues: eig,
                dcoef,
                stiffness,
                d1,
                d2,
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.inner.nodes.len()
    }

    pub fn nodes(&self) -> &Field {
        &self.inner.nodes
    }

    /// Quadrature weights of the normalized reference measure.
    pub fn weights(&self) -> &Field {
        &self.inner.weights
    }

    pub fn laplacian_matrix(&self) -> &DMatrix<f64> {
        &self.inner.laplacian
    }

    pub fn stiffness_matrix(&self) -> &DMatrix<f64> {
        &self.inner.stiffness
    }

    pub fn d1_matrix(&self) -> &DMatrix<f64> {
        &self.inner.d1
    }

    pub fn d2_matrix(&self) -> &DMatrix<f64> {
        &self.inner.d2
    }

    pub fn vandermonde(&self) -> &DMatrix<f64> {
        &self.inner.vandermonde
    }

    pub fn check_len(&self, f: &Field) -> Result<()> {
        if f.len() != self.n() {
            return Err(Error::GridMismatch { left: self.n(), right: f.len() });
        }
        Ok(())
    }

    pub fn check_same(&self, other: &Grid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch { left: self.n(), right: other.n() });
        }
        Ok(())
    }

    pub fn field(&self, f: impl Fn(f64) -> f64) -> Field {
        self.inner.nodes.map(f)
    }

    pub fn zeros(&self) -> Field {
        Field::zeros(self.n())
    }

    /// Integral against the reference measure `dx/2`.
    pub fn integrate(&self, f: &Field) -> f64 {
        self.inner.weights.iter().zip(f.iter()).map(|(w, v)| w * v).sum()
    }

    /// Integral of `f * g` against the reference measure.
    pub fn inner(&self, f: &Field, g: &Field) -> f64 {
        self.inner
            .weights
            .iter()
            .zip(f.iter().zip(g.iter()))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    /// Reference basic Laplacian `4 d/dx[(1-x^2) f']`.
    ///
    /// Applied in coefficient space after truncating the roundoff plateau,
    /// which keeps repeated differentiation from amplifying noise by `n^2`
    /// per application.
    pub fn laplacian(&self, f: &Field) -> Field {
        let mut c = self.chopped_coefficients(f);
        for (ck, l) in c.iter_mut().zip(&self.inner.eigenvalues) {
            *ck *= l;
        }
        self.from_coefficients(&c)
    }

    pub fn derivative(&self, f: &Field) -> Field {
        let c = self.chopped_coefficients(f);
        self.from_coefficients(&(&self.inner.dcoef * c))
    }

    pub fn second_derivative(&self, f: &Field) -> Field {
        let c = self.chopped_coefficients(f);
        let d = &self.inner.dcoef * c;
        self.from_coefficients(&(&self.inner.dcoef * d))
    }

    /// Legendre coefficients with the trailing roundoff plateau set to zero.
    pub fn chopped_coefficients(&self, f: &Field) -> Field {
        let mut c = self.coefficients(f);
        chop(&mut c);
        c
    }

    pub fn coefficients(&self, f: &Field) -> Field {
        &self.inner.analysis * f
    }

    pub fn from_coefficients(&self, c: &Field) -> Field {
        &self.inner.vandermonde * c
    }

    /// Evaluate the interpolating Legendre series of `f` at an arbitrary point.
    pub fn interpolate(&self, f: &Field, x: f64) -> f64 {
        eval_series(self.coefficients(f).as_slice(), x)
    }

    /// Projection of `f` onto mean-zero fields.
    pub fn mean_free(&self, f: &Field) -> Field {
        let m = self.integrate(f);
        f.add_scalar(-m)
    }
}

/// Relative size of the roundoff plateau of Legendre coefficients, which
/// grows slowly with the degree.
pub const MIN_NODES: usize = 8;

const CHOP_TOL: f64 = 1e-14;

/// Zero the longest tail with `|c_k| <= CHOP_TOL (1 + k/8) max|c|`.
pub fn chop(c: &mut Field) {
    let scale = c.amax();
    if scale == 0.0 {
        return;
    }
    for k in (0..c.len()).rev() {
        if c[k].abs() > CHOP_TOL * (1.0 + k as f64 / 8.0) * scale {
            break;
        }
        c[k] = 0.0;
    }
}

/// Evaluate `sum c_k P_k(x)` by the three-term recurrence.
pub fn eval_series(c: &[f64], x: f64) -> f64 {
    let mut p0 = 1.0;
    let mut p1 = x;
    let mut acc = 0.0;
    for (k, ck) in c.iter().enumerate() {
        let pk = match k {
            0 => p0,
            1 => p1,
            _ => {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
                p2
            }
        };
        acc += ck * pk;
    }
    acc
}

/// `(P_n(x), P_n'(x))`.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre nodes (ascending) and weights on [-1, 1] (summing to 2).
pub fn gauss_legendre(n: usize) -> (Field, Field) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (Field::from_vec(nodes), Field::from_vec(weights))
}

fn legendre_vandermonde(nodes: &Field, n: usize) -> DMatrix<f64> {
    let mut v = DMatrix::zeros(n, n);
    for (i, &x) in nodes.iter().enumerate() {
        v[(i, 0)] = 1.0;
        if n > 1 {
            v[(i, 1)] = x;
        }
        for k in 2..n {
            v[(i, k)] = ((2 * k - 1) as f64 * x * v[(i, k - 1)] - (k - 1) as f64 * v[(i, k - 2)])
                / k as f64;
        }
    }
    v
}

/// Coefficient-space derivative: `P_k' = sum_{j<k, k-j odd} (2j+1) P_j`.
fn derivative_coefficients(n: usize) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(n, n);
    for k in 1..n {
        let mut j = k as isize - 1;
        while j >= 0 {
            d[(j as usize, k)] = (2 * j + 1) as f64;
            j -= 2;
        }
    }
    d
}
