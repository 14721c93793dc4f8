//! Kähler curvature tensors `R_{i j̄ k l̄}` on a unitary frame, contracted
//! with plain index loops.

use num_complex::Complex64;
use rand::Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct KahlerCurvatureTensor {
    m: usize,
    data: Vec<Complex64>,
}

impl KahlerCurvatureTensor {
    pub fn zeros(m: usize) -> Self {
        Self { m, data: vec![Complex64::new(0.0, 0.0); m.pow(4)] }
    }

    /// Constant holomorphic sectional curvature `c`:
    /// `R = (c/2)(g_{ij̄} g_{kl̄} + g_{il̄} g_{kj̄})` with `g = δ`.
    pub fn constant_curvature(m: usize, c: f64) -> Self {
        let mut t = Self::zeros(m);
        t.add_metric_product(0.5 * c);
        t
    }

    /// Adds `a (δ_{ij} δ_{kl} + δ_{il} δ_{kj})`.
    pub fn add_metric_product(&mut self, a: f64) {
        let m = self.m;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let d = delta(i, j) * delta(k, l) + delta(i, l) * delta(k, j);
                        *self.at_mut(i, j, k, l) += a * d;
                    }
                }
            }
        }
    }

    /// `Σ_a λ_a v_a ⊗ v̄_a ⊗ v_a ⊗ v̄_a` with random complex `v_a` and
    /// `λ_a ∈ (-1, 1)`: Hermitian and symmetric in `i ↔ k`, `j ↔ l`.
    pub fn random_rank_one_sum<R: Rng>(m: usize, terms: usize, rng: &mut R) -> Self {
        let mut t = Self::zeros(m);
        for _ in 0..terms {
            let lam: f64 = rng.gen_range(-1.0..1.0);
            let v: Vec<Complex64> = (0..m)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        for l in 0..m {
                            *t.at_mut(i, j, k, l) += v[i] * v[j].conj() * v[k] * v[l].conj() * lam;
                        }
                    }
                }
            }
        }
        t
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.m + j) * self.m + k) * self.m + l
    }

    pub fn at(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.data[self.idx(i, j, k, l)]
    }

    pub fn at_mut(&mut self, i: usize, j: usize, k: usize, l: usize) -> &mut Complex64 {
        let ix = self.idx(i, j, k, l);
        &mut self.data[ix]
    }

    /// `R_{ij̄} = Σ_k R_{ij̄kk̄}`.
    pub fn ricci(&self) -> Vec<Complex64> {
        let m = self.m;
        let mut out = vec![Complex64::new(0.0, 0.0); m * m];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    out[i * m + j] += self.at(i, j, k, k);
                }
            }
        }
        out
    }

    pub fn scalar(&self) -> f64 {
        let ric = self.ricci();
        (0..self.m).map(|i| ric[i * self.m + i].re).sum()
    }

    /// `|Rm|² = Σ |R_{ij̄kl̄}|²`.
    pub fn norm2(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|ρ|² = Σ |R_{ij̄}|²`, the Hermitian norm of the Ricci form
    /// components in a unitary frame.
    pub fn ricci_norm2(&self) -> f64 {
        self.ricci().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Q = R - S/(m(m+1)) (g g + g g)`.
    pub fn q_tensor(&self) -> Self {
        let m = self.m as f64;
        let mut q = self.clone();
        q.add_metric_product(-self.scalar() / (m * (m + 1.0)));
        q
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { m: self.m, data: self.data.iter().map(|z| z * a).collect() }
    }
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_curvature_contractions() {
        let t = KahlerCurvatureTensor::constant_curvature(2, 4.0);
        assert!((t.scalar() - 12.0).abs() < 1e-14);
        assert!((t.norm2() - 48.0).abs() < 1e-12);
        assert!(t.q_tensor().norm2() < 1e-24);
        let t1 = KahlerCurvatureTensor::constant_curvature(1, 4.0);
        assert!((t1.scalar() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn q_norm_identity_on_random_tensors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in 1..=5 {
            let t = KahlerCurvatureTensor::random_rank_one_sum(m, 3, &mut rng);
            let s = t.scalar();
            let mf = m as f64;
            let lhs = t.q_tensor().norm2();
            let rhs = t.norm2() - 2.0 * s * s / (mf * (mf + 1.0));
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + t.norm2()), "m={m}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn homogeneous_of_degree_two() {
        let t = KahlerCurvatureTensor::constant_curvature(3, 1.7);
        let u = t.scale(3.0);
        assert!((u.norm2() - 9.0 * t.norm2()).abs() < 1e-11);
    }
}
