//! Damped Newton solver for the transverse Monge–Ampère continuity family
//!
//! `(d eta_b + i ddbar φ) ∧ eta / (d eta_b ∧ eta) = exp(h_b - 2 t φ)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BasicPotential, Field, MetricState, EINSTEIN_TARGET};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NewtonConfig {
    /// Sup-norm tolerance on the defect.
    pub tol: f64,
    pub max_iter: usize,
    /// Smallest volume ratio a trial iterate may have.
    pub margin_guard: f64,
    /// Sufficient-decrease constant of the backtracking line search.
    pub armijo: f64,
    /// Smallest damping factor before giving up.
    pub min_step: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig { tol: 1e-10, max_iter: 50, margin_guard: 1e-6, armijo: 1e-4, min_step: 1.0 / 1024.0 }
    }
}

#[derive(Clone, Debug)]
pub struct MaSolution {
    pub t: f64,
    /// Solution relative to the base.
    pub phi: BasicPotential,
    pub state: MetricState,
    pub residual: f64,
    pub iterations: usize,
    /// Sup-norm defect before each iteration.
    pub trace: Vec<f64>,
}

struct Eval {
    defect: Field,
    /// `exp(h_b - 2tφ)`.
    rhs: Field,
    norm: f64,
    margin: f64,
}

fn evaluate(phi: &Field, t: f64, base: &MetricState) -> Eval {
    let lap = base.grid().laplacian(phi);
    let n = phi.len();
    let mut margin = f64::INFINITY;
    let rhs = Field::from_fn(n, |i, _| (base.ricci_potential[i] - EINSTEIN_TARGET * t * phi[i]).exp());
    let defect = Field::from_fn(n, |i, _| {
        let r = base.ratio[i] + lap[i] / 4.0;
        margin = margin.min(r);
        r / base.ratio[i] - rhs[i]
    });
    let norm = if defect.iter().all(|v| v.is_finite()) { defect.amax() } else { f64::INFINITY };
    Eval { defect, rhs, norm, margin }
}

/// Pointwise defect of the continuity equation at `(φ, t)`.
pub fn ma_defect(phi: &BasicPotential, t: f64, base: &MetricState) -> Result<Field> {
    base.grid().check_same(phi.grid())?;
    let e = evaluate(phi.values(), t, base);
    if !(e.margin > 0.0) {
        return Err(Error::Inadmissible { margin: e.margin });
    }
    Ok(e.defect)
}

/// Jacobian of the defect with respect to `φ`.
pub fn ma_jacobian(phi: &BasicPotential, t: f64, base: &MetricState) -> DMatrix<f64> {
    let e = evaluate(phi.values(), t, base);
    jacobian_from(&e.rhs, t, base)
}

fn jacobian_from(rhs: &Field, t: f64, base: &MetricState) -> DMatrix<f64> {
    let mut jac = base.grid().laplacian_matrix().clone();
    for i in 0..jac.nrows() {
        jac.row_mut(i).scale_mut(0.25 / base.ratio[i]);
        jac[(i, i)] += EINSTEIN_TARGET * t * rhs[i];
    }
    jac
}

/// Solve `a x = b`. At `t = 1` the linearization has the kernel spanned by
/// the Hamiltonian potentials of the Möbius field, so there a least-norm
/// solution from the SVD is used.
pub fn solve_linear(a: DMatrix<f64>, b: &Field, t: f64) -> Result<Field> {
    if (1.0 - t).abs() > 1e-9 {
        if let Some(x) = a.clone().lu().solve(b) {
            if x.iter().all(|v| v.is_finite()) {
                return Ok(x);
            }
        }
    }
    let svd = a.svd(true, true);
    let cutoff = 1e-10 * svd.singular_values.max();
    let x = svd.solve(b, cutoff).map_err(|e| Error::Linear(e.to_string()))?;
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::Linear("non-finite solution".into()))
    }
}

/// Solve the continuity equation at parameter `t` starting from `guess`.
pub fn solve_ma_at_t(
    t: f64,
    base: &MetricState,
    guess: &BasicPotential,
    cfg: &NewtonConfig,
) -> Result<MaSolution> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("continuity parameter {t} outside [0, 1]")));
    }
    let grid = base.grid();
    grid.check_same(guess.grid())?;
    let mut phi = guess.values().clone();
    let mut cur = evaluate(&phi, t, base);
    if !(cur.margin > cfg.margin_guard) {
        return Err(Error::Inadmissible { margin: cur.margin });
    }
    let mut trace = Vec::new();
    let fail = |iterations: usize, defect: f64, reason: &str, trace: &[f64]| Error::Newton {
        iterations,
        defect,
        reason: reason.to_string(),
        trace: trace.to_vec(),
    };

    let mut iter = 0;
    while cur.norm >= cfg.tol {
        if iter == cfg.max_iter {
            return Err(fail(iter, cur.norm, "iteration limit", &trace));
        }
        trace.push(cur.norm);
        iter += 1;
        let step = solve_linear(jacobian_from(&cur.rhs, t, base), &-&cur.defect, t)?;
        let mut alpha = 1.0;
        loop {
            let trial = &phi + &step * alpha;
            let e = evaluate(&trial, t, base);
            if e.margin > cfg.margin_guard && e.norm <= (1.0 - cfg.armijo * alpha) * cur.norm {
                phi = trial;
                cur = e;
                break;
            }
            alpha *= 0.5;
            if alpha < cfg.min_step {
                return Err(fail(iter, cur.norm, "line search stalled", &trace));
            }
        }
    }

    // one more full step drives the defect to roundoff level
    let step = solve_linear(jacobian_from(&cur.rhs, t, base), &-&cur.defect, t)?;
    let trial = &phi + &step;
    let e = evaluate(&trial, t, base);
    if e.margin > cfg.margin_guard && e.norm <= cur.norm {
        phi = trial;
        cur = e;
    }
    trace.push(cur.norm);

    let phi = BasicPotential::new(grid, phi)?;
    let state = base.deform(&phi)?;
    Ok(MaSolution { t, phi, state, residual: cur.norm, iterations: iter, trace })
}

/// `dφ_t/dt` along the continuity family at a solution.
pub fn path_tangent(sol: &MaSolution, base: &MetricState) -> Result<Field> {
    let e = evaluate(sol.phi.values(), sol.t, base);
    let jac = jacobian_from(&e.rhs, sol.t, base);
    let forcing = Field::from_fn(e.rhs.len(), |i, _| -EINSTEIN_TARGET * sol.phi.values()[i] * e.rhs[i]);
    solve_linear(jac, &forcing, sol.t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Grid;

    fn bump_base(g: &Grid) -> MetricState {
        MetricState::new(&BasicPotential::from_fn(g, |x| 0.3 * (1.0 - x * x))).unwrap()
    }

    #[test]
    fn round_base_has_zero_solution() {
        let g = Grid::new(32).unwrap();
        let base = MetricState::reference(&g);
        for t in [0.1, 0.5, 1.0] {
            let s = solve_ma_at_t(t, &base, &BasicPotential::zero(&g), &NewtonConfig::default()).unwrap();
            assert!(s.iterations <= 1);
            assert!(s.phi.sup_norm() < 1e-14);
        }
    }

    #[test]
    fn converges_quadratically_at_small_t() {
        let g = Grid::new(64).unwrap();
        let base = bump_base(&g);
        let s = solve_ma_at_t(0.1, &base, &BasicPotential::zero(&g), &NewtonConfig::default()).unwrap();
        assert!(s.residual < 1e-12);
        assert!(s.iterations <= 8, "{:?}", s.trace);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let g = Grid::new(24).unwrap();
        let base = bump_base(&g);
        let phi = BasicPotential::from_fn(&g, |x| 0.05 * x - 0.02 * x * x);
        let t = 0.6;
        let jac = ma_jacobian(&phi, t, &base);
        let dir = g.field(|x| (3.0 * x).cos());
        let h = 1e-6;
        let plus = ma_defect(&BasicPotential::new(&g, phi.values() + &dir * h).unwrap(), t, &base).unwrap();
        let minus = ma_defect(&BasicPotential::new(&g, phi.values() - &dir * h).unwrap(), t, &base).unwrap();
        let fd = (plus - minus) / (2.0 * h);
        assert!((fd - &jac * dir).amax() < 1e-6);
    }

    #[test]
    fn t_one_reaches_round_metric() {
        let g = Grid::new(64).unwrap();
        let base = bump_base(&g);
        let guess = BasicPotential::from_fn(&g, |x| -0.3 * (1.0 - x * x));
        let s = solve_ma_at_t(1.0, &base, &guess, &NewtonConfig::default()).unwrap();
        let exact = -0.3 * (1.0 - g.nodes()[10] * g.nodes()[10]) + base.norm_constant / 2.0;
        assert!((s.phi.values()[10] - exact).abs() < 1e-9);
        assert!(s.state.pinching() < 1e-8);
    }

    #[test]
    fn rejects_bad_parameter() {
        let g = Grid::new(16).unwrap();
        let base = MetricState::reference(&g);
        let z = BasicPotential::zero(&g);
        assert!(matches!(solve_ma_at_t(1.5, &base, &z, &NewtonConfig::default()), Err(Error::Domain(_))));
    }
}
