//! The antiferromagnetic XYZ chain in a transverse field,
//!
//! `H = sum_i [ S^x_i S^x_{i+1} + dy S^y_i S^y_{i+1} + dz S^z_i S^z_{i+1} - h S^z_i ]`
//!
//! with `S = sigma / 2`. In the product basis every bond term either keeps a
//! basis state (the `zz` part) or flips both spins of the bond; the flip
//! amplitude is `(1 - dy) / 4` for parallel spins and `(1 + dy) / 4` for
//! antiparallel ones. The matrix is therefore real and symmetric.

use std::ops::{Add, Mul};

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::state::{check_sites, StateVector};

/// Below this Hilbert-space dimension the matvec runs on the calling thread.
const PARALLEL_DIM: usize = 1 << 13;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec<T> {
    pub n_sites: usize,
    pub delta_y: T,
    pub delta_z: T,
    /// Reduced (dimensionless) transverse field.
    pub h: T,
    #[serde(default)]
    pub boundary: Boundary,
}

impl<T: Real> ModelSpec<T> {
    pub fn new(n_sites: usize, delta_y: T, delta_z: T, h: T, boundary: Boundary) -> Result<Self> {
        let spec = Self {
            n_sites,
            delta_y,
            delta_z,
            h,
            boundary,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Periodic chain, the setting all field sweeps use.
    pub fn periodic(n_sites: usize, delta_y: T, delta_z: T, h: T) -> Result<Self> {
        Self::new(n_sites, delta_y, delta_z, h, Boundary::Periodic)
    }

    pub fn open(n_sites: usize, delta_y: T, delta_z: T, h: T) -> Result<Self> {
        Self::new(n_sites, delta_y, delta_z, h, Boundary::Open)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |field, reason: String| Err(Error::InvalidModel { field, reason });
        if self.n_sites < 2 || self.n_sites % 2 != 0 {
            return invalid(
                "n_sites",
                format!("must be an even integer >= 2, got {}", self.n_sites),
            );
        }
        check_sites(self.n_sites)?;
        if self.boundary == Boundary::Periodic && self.n_sites < 4 {
            return invalid(
                "n_sites",
                format!("periodic chains need at least 4 sites, got {}", self.n_sites),
            );
        }
        let unit = T::zero()..=T::one();
        if !unit.contains(&self.delta_y) {
            return invalid("delta_y", format!("must lie in [0, 1], got {}", self.delta_y));
        }
        if !unit.contains(&self.delta_z) {
            return invalid("delta_z", format!("must lie in [0, 1], got {}", self.delta_z));
        }
        if !(self.h >= T::zero() && self.h.is_finite()) {
            return invalid("h", format!("must be finite and >= 0, got {}", self.h));
        }
        Ok(())
    }

    pub fn with_field(&self, h: T) -> Self {
        Self { h, ..*self }
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    /// Nearest-neighbour bonds `(i, i + 1)`, wrapping around when periodic.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_sites;
        let count = match self.boundary {
            Boundary::Periodic => n,
            Boundary::Open => n - 1,
        };
        (0..count).map(|i| (i, (i + 1) % n)).collect()
    }

    /// Energy of `|up ... up>`, an eigenstate for every spec.
    pub fn polarized_energy(&self) -> T {
        let bonds = T::of_usize(self.bonds().len());
        let sites = T::of_usize(self.n_sites);
        bonds * self.delta_z / T::lit(4.0) - sites * self.h / T::lit(2.0)
    }
}

/// Precomputed matrix-free form of [`ModelSpec`]'s Hamiltonian.
#[derive(Clone, Debug)]
pub struct Hamiltonian<T> {
    spec: ModelSpec<T>,
    diagonal: Vec<T>,
    bond_masks: Vec<(usize, usize)>,
    flip_parallel: T,
    flip_antiparallel: T,
}

impl<T: Real> Hamiltonian<T> {
    pub fn new(spec: &ModelSpec<T>) -> Result<Self> {
        spec.validate()?;
        let quarter = T::lit(0.25);
        let half_h = spec.h / T::lit(2.0);
        let bonds = spec.bonds();
        let diagonal = (0..spec.dim())
            .map(|b| {
                let sign = |k: usize| if (b >> k) & 1 == 0 { T::one() } else { -T::one() };
                let zz: T = bonds.iter().map(|&(i, j)| sign(i) * sign(j)).sum();
                let mz: T = (0..spec.n_sites).map(sign).sum();
                spec.delta_z * quarter * zz - half_h * mz
            })
            .collect();
        let bond_masks = bonds.iter().map(|&(i, j)| (i, j)).collect();
        Ok(Self {
            spec: *spec,
            diagonal,
            bond_masks,
            flip_parallel: (T::one() - spec.delta_y) * quarter,
            flip_antiparallel: (T::one() + spec.delta_y) * quarter,
        })
    }

    pub fn spec(&self) -> &ModelSpec<T> {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diagonal
    }

    /// `<a|H|b>` for product basis states `a` and `b`.
    pub fn matrix_element(&self, a: usize, b: usize) -> T {
        if a == b {
            return self.diagonal[a];
        }
        self.bond_masks
            .iter()
            .filter(|&&(i, j)| a ^ b == (1 << i) | (1 << j))
            .map(|&(i, j)| self.flip_amplitude(b, i, j))
            .sum()
    }

    /// Column-major dense matrix, for small-chain oracles.
    pub fn dense(&self) -> Vec<T> {
        let dim = self.dim();
        let mut m = vec![T::zero(); dim * dim];
        for b in 0..dim {
            m[b * dim + b] = self.diagonal[b];
            for &(i, j) in &self.bond_masks {
                let a = b ^ (1 << i) ^ (1 << j);
                m[b * dim + a] = m[b * dim + a] + self.flip_amplitude(b, i, j);
            }
        }
        m
    }

    fn flip_amplitude(&self, b: usize, i: usize, j: usize) -> T {
        if ((b >> i) ^ (b >> j)) & 1 == 0 {
            self.flip_parallel
        } else {
            self.flip_antiparallel
        }
    }

    fn gather<V>(&self, x: &[V], out: &mut [V])
    where
        V: Copy + Send + Sync + Zero + Add<Output = V> + Mul<T, Output = V>,
    {
        let row = |b: usize| {
            self.bond_masks
                .iter()
                .fold(x[b] * self.diagonal[b], |acc, &(i, j)| {
                    acc + x[b ^ (1 << i) ^ (1 << j)] * self.flip_amplitude(b, i, j)
                })
        };
        if out.len() >= PARALLEL_DIM {
            out.par_iter_mut().enumerate().for_each(|(b, o)| *o = row(b));
        } else {
            out.iter_mut().enumerate().for_each(|(b, o)| *o = row(b));
        }
    }

    /// `out = H x` for real vectors.
    pub fn apply_real(&self, x: &[T], out: &mut [T]) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(out.len(), self.dim());
        self.gather(x, out);
    }

    pub fn apply(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        self.check_state(state)?;
        let mut out = vec![Complex::zero(); self.dim()];
        self.gather(state.amplitudes(), &mut out);
        StateVector::new(self.spec.n_sites, out)
    }

    /// `Re <state|H|state>`; the imaginary part vanishes since H is Hermitian.
    pub fn energy(&self, state: &StateVector<T>) -> Result<T> {
        Ok(state.inner(&self.apply(state)?)?.re)
    }

    fn check_state(&self, state: &StateVector<T>) -> Result<()> {
        if state.dim() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                got: state.dim(),
            });
        }
        Ok(())
    }
}

pub fn apply_hamiltonian<T: Real>(
    spec: &ModelSpec<T>,
    state: &StateVector<T>,
) -> Result<StateVector<T>> {
    Hamiltonian::new(spec)?.apply(state)
}

pub fn energy_expectation<T: Real>(spec: &ModelSpec<T>, state: &StateVector<T>) -> Result<T> {
    Hamiltonian::new(spec)?.energy(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{Axis, BasisIndex};
    use proptest::prelude::*;

    type Spec = ModelSpec<f64>;
    type Sv = StateVector<f64>;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    /// Dense H assembled from Kronecker products of 2x2 Pauli matrices,
    /// independent of the bit-twiddling matvec.
    fn kron_hamiltonian(spec: &Spec) -> Vec<Vec<Complex<f64>>> {
        let n = spec.n_sites;
        let dim = 1 << n;
        let i = Complex::new(0.0, 1.0);
        let pauli = |axis: Axis| -> [[Complex<f64>; 2]; 2] {
            match axis {
                Axis::X => [[c(0.0), c(1.0)], [c(1.0), c(0.0)]],
                Axis::Y => [[c(0.0), -i], [i, c(0.0)]],
                Axis::Z => [[c(1.0), c(0.0)], [c(0.0), c(-1.0)]],
            }
        };
        // <a| sigma^p_k sigma^q_l |b> for the little-endian basis
        let two_site = |k: usize, p: Axis, l: usize, q: Axis, a: usize, b: usize| {
            let mut amp = c(1.0);
            for site in 0..n {
                let (ra, rb) = ((a >> site) & 1, (b >> site) & 1);
                let m = if site == k {
                    pauli(p)[ra][rb]
                } else if site == l {
                    pauli(q)[ra][rb]
                } else if ra == rb {
                    c(1.0)
                } else {
                    c(0.0)
                };
                amp *= m;
            }
            amp
        };
        let mut h = vec![vec![c(0.0); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let mut v = c(0.0);
                for (k, l) in spec.bonds() {
                    v += two_site(k, Axis::X, l, Axis::X, a, b) * 0.25;
                    v += two_site(k, Axis::Y, l, Axis::Y, a, b) * (0.25 * spec.delta_y);
                    v += two_site(k, Axis::Z, l, Axis::Z, a, b) * (0.25 * spec.delta_z);
                }
                for k in 0..n {
                    // single-site term: pair site k with itself on the identity
                    let mut amp = c(1.0);
                    for site in 0..n {
                        let (ra, rb) = ((a >> site) & 1, (b >> site) & 1);
                        amp *= if site == k {
                            pauli(Axis::Z)[ra][rb]
                        } else if ra == rb {
                            c(1.0)
                        } else {
                            c(0.0)
                        };
                    }
                    v -= amp * (0.5 * spec.h);
                }
                h[a][b] = v;
            }
        }
        h
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Spec::periodic(2, 1.0, 1.0, 0.0).is_err());
        assert!(Spec::open(3, 1.0, 1.0, 0.0).is_err());
        let err = Spec::periodic(4, 1.5, 0.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidModel { field: "delta_y", .. }));
        assert!(Spec::periodic(4, 0.5, -0.1, 0.0).is_err());
        assert!(Spec::periodic(4, 0.5, 0.5, -1.0).is_err());
        assert!(Spec::periodic(4, f64::NAN, 0.5, 0.0).is_err());
        assert!(matches!(
            Spec::periodic(22, 0.5, 0.5, 0.0),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn heisenberg_pair_spectrum() {
        let spec = Spec::open(2, 1.0, 1.0, 0.0).unwrap();
        let h = Hamiltonian::new(&spec).unwrap();
        let (values, _) = f64::symmetric_eigen(4, &h.dense());
        let expected = [-0.75, 0.25, 0.25, 0.25];
        for (v, e) in values.iter().zip(expected) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn up_up_image_is_direct_expansion() {
        for (dy, dz, field) in [(0.3, 0.7, 0.2), (1.0, 0.0, 1.5), (0.0, 0.0, 0.0)] {
            let spec = Spec::open(2, dy, dz, field).unwrap();
            let out = apply_hamiltonian(&spec, &Sv::all_up(2).unwrap()).unwrap();
            let amps = out.amplitudes();
            assert!((amps[0] - c(dz / 4.0 - field)).norm() < 1e-15);
            assert!((amps[3] - c((1.0 - dy) / 4.0)).norm() < 1e-15);
            assert_eq!(amps[1], c(0.0));
            assert_eq!(amps[2], c(0.0));
        }
    }

    #[test]
    fn polarized_energy_xx() {
        let h = 0.8;
        let spec = Spec::periodic(4, 1.0, 0.0, h).unwrap();
        let e = energy_expectation(&spec, &Sv::all_up(4).unwrap()).unwrap();
        assert!((e + 2.0 * h).abs() < 1e-14);
        assert!((spec.polarized_energy() - e).abs() < 1e-14);
    }

    #[test]
    fn singlet_energy() {
        let spec = Spec::open(2, 1.0, 1.0, 0.0).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = Sv::new(2, vec![c(0.0), c(s), c(-s), c(0.0)]).unwrap();
        assert!((energy_expectation(&spec, &singlet).unwrap() + 0.75).abs() < 1e-14);
    }

    #[test]
    fn matvec_matches_kronecker_build() {
        let specs = [
            Spec::periodic(4, 0.4, 0.0, 0.3).unwrap(),
            Spec::periodic(6, 0.25, 1.0, 1.1).unwrap(),
            Spec::open(4, 0.9, 0.3, 0.05).unwrap(),
        ];
        for spec in specs {
            let dense = kron_hamiltonian(&spec);
            let h = Hamiltonian::new(&spec).unwrap();
            for a in 0..spec.dim() {
                for b in 0..spec.dim() {
                    assert!(dense[a][b].im.abs() < 1e-14, "complex element");
                    assert!((dense[a][b].re - h.matrix_element(a, b)).abs() < 1e-14);
                }
            }
            let psi = Sv::random(spec.n_sites, 9).unwrap();
            let out = h.apply(&psi).unwrap();
            for a in 0..spec.dim() {
                let expect: Complex<f64> = (0..spec.dim())
                    .map(|b| dense[a][b] * psi.amplitudes()[b])
                    .sum();
                assert!((expect - out.amplitudes()[a]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn expectation_matches_dense_quadratic_form() {
        for (seed, n) in [(1u64, 4usize), (2, 6), (3, 8)] {
            let spec = Spec::periodic(n, 0.37, 0.61, 0.9).unwrap();
            let h = Hamiltonian::new(&spec).unwrap();
            let m = h.dense();
            let psi = Sv::random(n, seed).unwrap();
            let amps = psi.amplitudes();
            let dim = spec.dim();
            let mut form = Complex::new(0.0, 0.0);
            for a in 0..dim {
                for b in 0..dim {
                    form += amps[a].conj() * m[b * dim + a] * amps[b];
                }
            }
            assert!((h.energy(&psi).unwrap() - form.re).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_parity_is_conserved() {
        let spec = Spec::periodic(6, 0.3, 0.2, 0.4).unwrap();
        let h = Hamiltonian::new(&spec).unwrap();
        for a in 0..spec.dim() {
            for b in 0..spec.dim() {
                let pa = BasisIndex(a).0.count_ones() % 2;
                let pb = BasisIndex(b).0.count_ones() % 2;
                if pa != pb {
                    assert_eq!(h.matrix_element(a, b), 0.0);
                }
            }
        }
    }

    #[test]
    fn large_chain_uses_parallel_path_consistently() {
        let spec = Spec::periodic(14, 0.4, 0.2, 0.7).unwrap();
        let h = Hamiltonian::new(&spec).unwrap();
        let psi = Sv::random(14, 5).unwrap();
        let out = h.apply(&psi).unwrap();
        for a in (0..spec.dim()).step_by(977) {
            let mut expect = psi.amplitudes()[a] * h.diagonal()[a];
            for (i, j) in spec.bonds() {
                let b = a ^ (1 << i) ^ (1 << j);
                expect += psi.amplitudes()[b] * h.matrix_element(a, b);
            }
            assert!((expect - out.amplitudes()[a]).norm() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn hermitian(seed in 0u64..1000, dy in 0.0f64..=1.0, dz in 0.0f64..=1.0, field in 0.0f64..2.0) {
            let spec = Spec::periodic(6, dy, dz, field).unwrap();
            let h = Hamiltonian::new(&spec).unwrap();
            let a = Sv::random(6, seed).unwrap();
            let b = Sv::random(6, seed + 7919).unwrap();
            let ab = a.inner(&h.apply(&b).unwrap()).unwrap();
            let ba = b.inner(&h.apply(&a).unwrap()).unwrap();
            prop_assert!((ab - ba.conj()).norm() < 1e-12);
        }

        #[test]
        fn linear(seed in 0u64..1000, re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let spec = Spec::open(6, 0.4, 0.8, 0.3).unwrap();
            let h = Hamiltonian::new(&spec).unwrap();
            let a = Sv::random(6, seed).unwrap();
            let b = Sv::random(6, seed + 1).unwrap();
            let z = Complex::new(re, im);
            let lhs = h.apply(&a.add_scaled(z, &b).unwrap()).unwrap();
            let rhs = h.apply(&a).unwrap().add_scaled(z, &h.apply(&b).unwrap()).unwrap();
            let diff = lhs.add_scaled(c(-1.0), &rhs).unwrap();
            prop_assert!(diff.norm() < 1e-12);
        }
    }
}
