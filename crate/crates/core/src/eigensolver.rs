//! Two lowest eigenpairs of the chain Hamiltonian.
//!
//! The production path is Lanczos with full reorthogonalization against the
//! stored Krylov basis, restarted from the current Ritz vector whenever the
//! basis reaches `max_krylov_dim`. The second eigenpair comes from a separate
//! run deflated against the first eigenvector, so exactly degenerate pairs
//! (level crossings) are recovered as two orthogonal vectors. Both runs work
//! in real arithmetic since the Hamiltonian is real symmetric.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Hamiltonian, ModelSpec};
use crate::real::Real;
use crate::state::StateVector;

/// Largest `dense_threshold` accepted by [`SolverConfig::validate`].
pub const MAX_DENSE_SITES: usize = 14;

/// Hilbert dimensions at or below this are always solved densely.
const DENSE_AUTO_DIM: usize = 64;

const MAX_RESTARTS: usize = 50;

const CHECK_STRIDE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig<T> {
    pub max_krylov_dim: usize,
    /// Relative residual target, `|Hv - lv| <= residual_tol * max(1, |l|)`.
    pub residual_tol: T,
    /// Largest chain length the dense path will accept.
    pub dense_threshold: usize,
    pub seed: u64,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            max_krylov_dim: 200,
            residual_tol: T::lit(1e-10),
            dense_threshold: 12,
            seed: 20071213,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.max_krylov_dim < 2 {
            return Err(Error::InvalidSolver {
                field: "max_krylov_dim",
                reason: format!("must be at least 2, got {}", self.max_krylov_dim),
            });
        }
        if !(self.residual_tol > T::zero() && self.residual_tol.is_finite()) {
            return Err(Error::InvalidSolver {
                field: "residual_tol",
                reason: format!("must be positive, got {}", self.residual_tol),
            });
        }
        if self.dense_threshold > MAX_DENSE_SITES {
            return Err(Error::InvalidSolver {
                field: "dense_threshold",
                reason: format!(
                    "must not exceed {MAX_DENSE_SITES}, got {}",
                    self.dense_threshold
                ),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair<T> {
    pub value: T,
    pub vector: StateVector<T>,
    /// `|H v - value v|` as measured after convergence.
    pub residual: T,
}

/// The two algebraically smallest eigenpairs, ascending.
///
/// Tiny Hilbert spaces go through the dense path; everything else runs
/// Lanczos.
pub fn lowest_two<T: Real>(
    spec: &ModelSpec<T>,
    cfg: &SolverConfig<T>,
) -> Result<(EigenPair<T>, EigenPair<T>)> {
    cfg.validate()?;
    spec.validate()?;
    if spec.dim() <= DENSE_AUTO_DIM && spec.n_sites <= cfg.dense_threshold {
        lowest_two_dense(spec, cfg)
    } else {
        lowest_two_lanczos(spec, cfg, None)
    }
}

/// Lanczos path. `warm_start`, when given, seeds the first run (mixed with a
/// small random component so no symmetry sector is missed).
pub fn lowest_two_lanczos<T: Real>(
    spec: &ModelSpec<T>,
    cfg: &SolverConfig<T>,
    warm_start: Option<&StateVector<T>>,
) -> Result<(EigenPair<T>, EigenPair<T>)> {
    cfg.validate()?;
    let h = Hamiltonian::new(spec)?;
    let dim = h.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut start = random_vector(dim, &mut rng);
    if let Some(warm) = warm_start {
        if warm.dim() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: warm.dim(),
            });
        }
        let mix = T::lit(1e-3);
        for (s, a) in start.iter_mut().zip(warm.amplitudes()) {
            *s = a.re + mix * *s;
        }
    }

    let solver = Lanczos { h: &h, cfg };
    let first = solver.lowest(&[], start)?;
    let second_start = random_vector(dim, &mut rng);
    let second = solver.lowest(std::slice::from_ref(&first.vector), second_start)?;

    let a = first.into_pair(spec.n_sites)?;
    let b = second.into_pair(spec.n_sites)?;
    Ok(if b.value < a.value { (b, a) } else { (a, b) })
}

/// Dense path: full diagonalization, then the two lowest columns.
pub fn lowest_two_dense<T: Real>(
    spec: &ModelSpec<T>,
    cfg: &SolverConfig<T>,
) -> Result<(EigenPair<T>, EigenPair<T>)> {
    let h = dense_checked(spec, cfg)?;
    let dim = h.dim();
    let (values, vectors) = T::symmetric_eigen(dim, &h.dense());
    let pair = |k: usize| -> Result<EigenPair<T>> {
        let v = vectors[k * dim..(k + 1) * dim].to_vec();
        let residual = residual_norm(&h, &v, values[k]);
        Ok(EigenPair {
            value: values[k],
            vector: StateVector::from_real(spec.n_sites, &v)?,
            residual,
        })
    };
    Ok((pair(0)?, pair(1)?))
}

/// All `2^N` eigenvalues, ascending.
pub fn dense_spectrum<T: Real>(spec: &ModelSpec<T>, cfg: &SolverConfig<T>) -> Result<Vec<T>> {
    let h = dense_checked(spec, cfg)?;
    Ok(T::symmetric_eigen(h.dim(), &h.dense()).0)
}

fn dense_checked<T: Real>(spec: &ModelSpec<T>, cfg: &SolverConfig<T>) -> Result<Hamiltonian<T>> {
    cfg.validate()?;
    if spec.n_sites > cfg.dense_threshold {
        return Err(Error::TooLarge {
            n_sites: spec.n_sites,
            max: cfg.dense_threshold,
        });
    }
    Hamiltonian::new(spec)
}

struct Converged<T> {
    value: T,
    vector: Vec<T>,
    residual: T,
}

impl<T: Real> Converged<T> {
    fn into_pair(self, n_sites: usize) -> Result<EigenPair<T>> {
        Ok(EigenPair {
            value: self.value,
            vector: StateVector::from_real(n_sites, &self.vector)?,
            residual: self.residual,
        })
    }
}

struct Lanczos<'a, T> {
    h: &'a Hamiltonian<T>,
    cfg: &'a SolverConfig<T>,
}

impl<T: Real> Lanczos<'_, T> {
    /// Lowest eigenpair of H restricted to the complement of `deflate`.
    fn lowest(&self, deflate: &[Vec<T>], start: Vec<T>) -> Result<Converged<T>> {
        let available = self.h.dim() - deflate.len();
        let max_dim = self.cfg.max_krylov_dim.min(available).max(1);

        let mut start = start;
        let mut iterations = 0;
        let mut last_residual = T::infinity();
        for _ in 0..=MAX_RESTARTS {
            orthogonalize(&mut start, deflate);
            if normalize(&mut start) == T::zero() {
                // start vector lay inside the deflated space; perturb it
                start = (0..self.h.dim()).map(|i| T::of_usize(i % 7) - T::lit(3.0)).collect();
                orthogonalize(&mut start, deflate);
                normalize(&mut start);
            }
            let outcome = self.cycle(deflate, start, max_dim, &mut iterations)?;
            match outcome {
                Cycle::Converged(c) => return Ok(c),
                Cycle::Restart { ritz, residual } => {
                    last_residual = residual;
                    start = ritz;
                }
            }
        }
        Err(Error::NoConvergence {
            residual: last_residual.to_f64_lossy(),
            iterations,
        })
    }

    fn cycle(
        &self,
        deflate: &[Vec<T>],
        start: Vec<T>,
        max_dim: usize,
        iterations: &mut usize,
    ) -> Result<Cycle<T>> {
        let dim = self.h.dim();
        let tol = self.cfg.residual_tol;
        let mut basis: Vec<Vec<T>> = vec![start];
        let mut alphas: Vec<T> = Vec::new();
        let mut betas: Vec<T> = Vec::new();
        let mut w = vec![T::zero(); dim];

        loop {
            let j = basis.len() - 1;
            self.h.apply_real(&basis[j], &mut w);
            *iterations += 1;
            let alpha = dot(&basis[j], &w);
            axpy(-alpha, &basis[j], &mut w);
            if j > 0 {
                axpy(-betas[j - 1], &basis[j - 1], &mut w);
            }
            // two passes of classical Gram-Schmidt keep the basis orthogonal
            for _ in 0..2 {
                orthogonalize(&mut w, deflate);
                orthogonalize(&mut w, &basis);
            }
            alphas.push(alpha);
            let beta = norm(&w);

            let m = alphas.len();
            let scale = alphas.iter().fold(T::one(), |acc, a| acc.max(a.abs()));
            let breakdown = beta <= T::EPS * T::lit(1e3) * scale;
            let full = m >= max_dim;
            if m % CHECK_STRIDE == 0 || breakdown || full {
                let (theta, coeffs) = lowest_ritz(&alphas, &betas);
                let estimate = beta * coeffs[m - 1].abs();
                if estimate <= tol * T::one().max(theta.abs()) || breakdown || full {
                    let mut ritz = vec![T::zero(); dim];
                    for (c, q) in coeffs.iter().zip(&basis) {
                        axpy(*c, q, &mut ritz);
                    }
                    orthogonalize(&mut ritz, deflate);
                    normalize(&mut ritz);
                    let value = rayleigh(self.h, &ritz);
                    let residual = residual_norm(self.h, &ritz, value);
                    if residual <= tol * T::one().max(value.abs()) {
                        return Ok(Cycle::Converged(Converged {
                            value,
                            vector: ritz,
                            residual,
                        }));
                    }
                    if breakdown || full {
                        return Ok(Cycle::Restart { ritz, residual });
                    }
                }
            }
            betas.push(beta);
            let inv = beta.recip();
            let next: Vec<T> = w.iter().map(|&x| x * inv).collect();
            basis.push(next);
        }
    }
}

enum Cycle<T> {
    Converged(Converged<T>),
    Restart { ritz: Vec<T>, residual: T },
}

/// Lowest eigenpair of the symmetric tridiagonal matrix.
fn lowest_ritz<T: Real>(alphas: &[T], betas: &[T]) -> (T, Vec<T>) {
    let m = alphas.len();
    let mut t = vec![T::zero(); m * m];
    for i in 0..m {
        t[i * m + i] = alphas[i];
        if i + 1 < m {
            t[i * m + i + 1] = betas[i];
            t[(i + 1) * m + i] = betas[i];
        }
    }
    let (values, vectors) = T::symmetric_eigen(m, &t);
    (values[0], vectors[..m].to_vec())
}

fn random_vector<T: Real>(dim: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    (0..dim).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect()
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

fn normalize<T: Real>(v: &mut [T]) -> T {
    let n = norm(v);
    if n > T::zero() {
        let inv = n.recip();
        v.iter_mut().for_each(|x| *x = *x * inv);
    }
    n
}

fn orthogonalize<T: Real>(v: &mut [T], against: &[Vec<T>]) {
    for q in against {
        let c = dot(q, v);
        axpy(-c, q, v);
    }
}

fn rayleigh<T: Real>(h: &Hamiltonian<T>, v: &[T]) -> T {
    let mut hv = vec![T::zero(); v.len()];
    h.apply_real(v, &mut hv);
    dot(v, &hv) / dot(v, v)
}

fn residual_norm<T: Real>(h: &Hamiltonian<T>, v: &[T], value: T) -> T {
    let mut hv = vec![T::zero(); v.len()];
    h.apply_real(v, &mut hv);
    axpy(-value, v, &mut hv);
    norm(&hv)
}

/// `|H v - value v|` for a complex state, used to check returned pairs.
pub fn residual<T: Real>(spec: &ModelSpec<T>, pair: &EigenPair<T>) -> Result<T> {
    let h = Hamiltonian::new(spec)?;
    let hv = h.apply(&pair.vector)?;
    let r = hv.add_scaled(Complex::new(-pair.value, T::zero()), &pair.vector)?;
    Ok(r.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::BasisIndex;

    type Spec = ModelSpec<f64>;

    fn cfg() -> SolverConfig<f64> {
        SolverConfig::default()
    }

    fn assert_pair_invariants(spec: &Spec, a: &EigenPair<f64>, b: &EigenPair<f64>) {
        assert!(a.value <= b.value);
        for p in [a, b] {
            assert!((p.vector.norm() - 1.0).abs() < 1e-12);
            let r = residual(spec, p).unwrap();
            assert!(r <= 1e-9 * p.value.abs().max(1.0), "residual {r}");
        }
        assert!(a.vector.inner(&b.vector).unwrap().norm() < 1e-8);
    }

    #[test]
    fn heisenberg_pair() {
        let spec = Spec::open(2, 1.0, 1.0, 0.0).unwrap();
        let (a, b) = lowest_two(&spec, &cfg()).unwrap();
        assert!((a.value + 0.75).abs() < 1e-12);
        assert!((b.value - 0.25).abs() < 1e-12);
        assert_pair_invariants(&spec, &a, &b);
    }

    #[test]
    fn dense_spectra() {
        let heis = dense_spectrum(&Spec::open(2, 1.0, 1.0, 0.0).unwrap(), &cfg()).unwrap();
        let ising = dense_spectrum(&Spec::open(2, 0.0, 0.0, 0.0).unwrap(), &cfg()).unwrap();
        for (got, want) in heis.iter().zip([-0.75, 0.25, 0.25, 0.25]) {
            assert!((got - want).abs() < 1e-14);
        }
        for (got, want) in ising.iter().zip([-0.25, -0.25, 0.25, 0.25]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn dense_spectrum_is_traceless() {
        let spec = Spec::periodic(6, 0.4, 0.0, 0.7).unwrap();
        let values = dense_spectrum(&spec, &cfg()).unwrap();
        assert_eq!(values.len(), 64);
        assert!(values.iter().sum::<f64>().abs() < 1e-11);
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn dense_refuses_large_chains() {
        let spec = Spec::periodic(14, 0.4, 0.0, 0.7).unwrap();
        assert!(matches!(
            dense_spectrum(&spec, &cfg()),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn lanczos_matches_dense_on_small_chains() {
        let mut seed = 1u64;
        for n in [4usize, 6, 8] {
            for (dy, dz, field) in [(0.4, 0.0, 0.5), (0.25, 1.0, 1.58), (1.0, 0.0, 0.0), (0.0, 0.0, 0.3)] {
                let spec = Spec::periodic(n, dy, dz, field).unwrap();
                let cfg = SolverConfig { seed, ..cfg() };
                seed += 1;
                let (la, lb) = lowest_two_lanczos(&spec, &cfg, None).unwrap();
                let (da, db) = lowest_two_dense(&spec, &cfg).unwrap();
                assert!((la.value - da.value).abs() < 1e-9, "{spec:?}");
                assert!((lb.value - db.value).abs() < 1e-9, "{spec:?}");
                assert_pair_invariants(&spec, &la, &lb);
            }
        }
    }

    #[test]
    fn saturated_xx_chain_is_polarized() {
        let spec = Spec::periodic(8, 1.0, 0.0, 10.0).unwrap();
        let (a, _) = lowest_two(&spec, &cfg()).unwrap();
        assert!((a.value + 40.0).abs() < 1e-9);
        let up = StateVector::basis(8, BasisIndex(0)).unwrap();
        assert!((a.vector.inner(&up).unwrap().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exact_crossing_yields_orthogonal_pair() {
        // XY chain at the factorization field: the two lowest levels cross.
        let spec = Spec::periodic(10, 0.4, 0.0, 0.4f64.sqrt()).unwrap();
        let (a, b) = lowest_two(&spec, &cfg()).unwrap();
        assert!(b.value - a.value < 1e-9);
        assert_pair_invariants(&spec, &a, &b);
    }

    #[test]
    fn deterministic_given_seed() {
        let spec = Spec::periodic(10, 0.3, 0.2, 0.5).unwrap();
        let (a1, b1) = lowest_two(&spec, &cfg()).unwrap();
        let (a2, b2) = lowest_two(&spec, &cfg()).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(b1, b2);
    }

    #[test]
    fn small_krylov_space_restarts() {
        let spec = Spec::periodic(10, 0.4, 0.0, 0.9).unwrap();
        let tight = SolverConfig { max_krylov_dim: 12, ..cfg() };
        let (a, b) = lowest_two_lanczos(&spec, &tight, None).unwrap();
        let (da, db) = lowest_two_lanczos(&spec, &cfg(), None).unwrap();
        assert!((a.value - da.value).abs() < 1e-9);
        assert!((b.value - db.value).abs() < 1e-9);
    }

    #[test]
    fn warm_start_agrees() {
        let spec = Spec::periodic(10, 0.4, 0.2, 0.8).unwrap();
        let (a, b) = lowest_two_lanczos(&spec, &cfg(), None).unwrap();
        let near = spec.with_field(0.81);
        let (wa, _) = lowest_two_lanczos(&near, &cfg(), None).unwrap();
        let (a2, b2) = lowest_two_lanczos(&spec, &cfg(), Some(&wa.vector)).unwrap();
        assert!((a.value - a2.value).abs() < 1e-9);
        assert!((b.value - b2.value).abs() < 1e-9);
    }

    #[test]
    fn reports_non_convergence() {
        let spec = Spec::periodic(10, 0.4, 0.2, 0.8).unwrap();
        let hopeless = SolverConfig {
            max_krylov_dim: 2,
            residual_tol: 1e-300,
            ..cfg()
        };
        assert!(matches!(
            lowest_two_lanczos(&spec, &hopeless, None),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig { dense_threshold: 15, ..cfg() }.validate().is_err());
        assert!(SolverConfig { residual_tol: 0.0, ..cfg() }.validate().is_err());
        assert!(SolverConfig { max_krylov_dim: 1, ..cfg() }.validate().is_err());
    }

    #[test]
    fn variational_bound() {
        let spec = Spec::periodic(8, 0.6, 0.3, 0.4).unwrap();
        let (a, _) = lowest_two(&spec, &cfg()).unwrap();
        let h = Hamiltonian::new(&spec).unwrap();
        for seed in 0..20 {
            let psi = StateVector::random(8, seed).unwrap();
            assert!(h.energy(&psi).unwrap() >= a.value - 1e-12);
        }
    }

    #[test]
    fn single_precision_path() {
        let spec = ModelSpec::<f32>::periodic(6, 1.0, 1.0, 0.0).unwrap();
        let loose = SolverConfig::<f32> {
            residual_tol: 1e-4,
            ..SolverConfig::default()
        };
        let (a, _) = lowest_two_lanczos(&spec, &loose, None).unwrap();
        let exact = dense_spectrum(&spec.clone(), &loose).unwrap()[0];
        assert!((a.value - exact).abs() < 1e-4);
    }
}
