//! Full state vectors over the `2^N` product basis and single-site Pauli
//! actions on them.
//!
//! Bit `k` of a basis index is the spin on site `k`: `0` is up, `1` is down.
//! Site order is little-endian. Every operator here is applied matrix-free
//! by permuting and phasing amplitudes.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Hard cap on chain length for any full-vector computation.
pub const MAX_SITES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// A product-basis label: bit `k` set means site `k` points down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex(pub usize);

impl BasisIndex {
    pub fn is_down(self, site: usize) -> bool {
        (self.0 >> site) & 1 == 1
    }

    /// `+1` for up, `-1` for down.
    pub fn spin_sign(self, site: usize) -> i32 {
        1 - 2 * ((self.0 >> site) & 1) as i32
    }

    pub fn flipped(self, site: usize) -> Self {
        BasisIndex(self.0 ^ (1 << site))
    }

    /// Builds the index from per-site orientations, `true` meaning down.
    pub fn from_spins(down: &[bool]) -> Self {
        BasisIndex(
            down.iter()
                .enumerate()
                .fold(0, |acc, (k, &d)| acc | (usize::from(d) << k)),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n_sites: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(n_sites: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_sites(n_sites)?;
        let expected = 1usize << n_sites;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: amplitudes.len(),
            });
        }
        Ok(Self {
            n_sites,
            amplitudes,
        })
    }

    pub fn from_real(n_sites: usize, amplitudes: &[T]) -> Result<Self> {
        Self::new(
            n_sites,
            amplitudes.iter().map(|&a| Complex::new(a, T::zero())).collect(),
        )
    }

    pub fn basis(n_sites: usize, index: BasisIndex) -> Result<Self> {
        check_sites(n_sites)?;
        let dim = 1usize << n_sites;
        if index.0 >= dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: index.0,
            });
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[index.0] = Complex::new(T::one(), T::zero());
        Ok(Self {
            n_sites,
            amplitudes,
        })
    }

    /// The fully polarized state `|up ... up>`.
    pub fn all_up(n_sites: usize) -> Result<Self> {
        Self::basis(n_sites, BasisIndex(0))
    }

    /// Normalized state with independent uniform real and imaginary parts.
    pub fn random(n_sites: usize, seed: u64) -> Result<Self> {
        check_sites(n_sites)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amplitudes = (0..1usize << n_sites)
            .map(|_| {
                Complex::new(
                    T::lit(rng.gen_range(-1.0..1.0)),
                    T::lit(rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        Ok(Self {
            n_sites,
            amplitudes,
        }
        .normalized())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// Returns the state scaled to unit norm. A zero vector is returned
    /// unchanged.
    pub fn normalized(mut self) -> Self {
        let norm = self.norm();
        if norm > T::zero() {
            let inv = norm.recip();
            for a in &mut self.amplitudes {
                *a = a.scale(inv);
            }
        }
        self
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            n_sites: self.n_sites,
            amplitudes: self.amplitudes.iter().map(|&a| a * factor).collect(),
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: Complex<T>, other: &Self) -> Result<Self> {
        self.check_same_len(other)?;
        Ok(Self {
            n_sites: self.n_sites,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(&a, &b)| a + factor * b)
                .collect(),
        })
    }

    pub fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites {
            return Err(Error::SiteOutOfRange {
                site,
                n_sites: self.n_sites,
            });
        }
        Ok(())
    }

    fn check_same_len(&self, other: &Self) -> Result<()> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::LengthMismatch {
                expected: self.amplitudes.len(),
                got: other.amplitudes.len(),
            });
        }
        Ok(())
    }

    /// Hermitian inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_len(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            }))
    }

    /// `sigma^axis` on `site`.
    pub fn apply_pauli(&self, site: usize, axis: Axis) -> Result<Self> {
        self.check_site(site)?;
        let mask = 1usize << site;
        let i = Complex::new(T::zero(), T::one());
        let mut out = self.amplitudes.clone();
        match axis {
            Axis::X => {
                for b in 0..out.len() {
                    out[b ^ mask] = self.amplitudes[b];
                }
            }
            Axis::Y => {
                // sigma^y |up> = i |down>, sigma^y |down> = -i |up>
                for b in 0..out.len() {
                    let phase = if b & mask == 0 { i } else { -i };
                    out[b ^ mask] = phase * self.amplitudes[b];
                }
            }
            Axis::Z => {
                for (b, a) in out.iter_mut().enumerate() {
                    if b & mask != 0 {
                        *a = -*a;
                    }
                }
            }
        }
        Ok(Self {
            n_sites: self.n_sites,
            amplitudes: out,
        })
    }

    /// `u . sigma` on `site`, for a unit vector `u`.
    pub fn apply_bloch(&self, site: usize, u: [T; 3]) -> Result<Self> {
        self.check_site(site)?;
        check_unit(u)?;
        let mask = 1usize << site;
        let [ux, uy, uz] = u;
        let down_from_up = Complex::new(ux, uy);
        let up_from_down = Complex::new(ux, -uy);
        let mut out = self.amplitudes.clone();
        for b0 in (0..out.len()).filter(|b| b & mask == 0) {
            let b1 = b0 | mask;
            let (a0, a1) = (self.amplitudes[b0], self.amplitudes[b1]);
            out[b0] = a0.scale(uz) + up_from_down * a1;
            out[b1] = down_from_up * a0 - a1.scale(uz);
        }
        Ok(Self {
            n_sites: self.n_sites,
            amplitudes: out,
        })
    }

    /// `Re <self| sigma^axis_site |self>` without building the image state.
    pub fn pauli_expectation(&self, site: usize, axis: Axis) -> Result<T> {
        self.check_site(site)?;
        let mask = 1usize << site;
        let amps = &self.amplitudes;
        let value = match axis {
            Axis::Z => amps
                .iter()
                .enumerate()
                .map(|(b, a)| {
                    if b & mask == 0 {
                        a.norm_sqr()
                    } else {
                        -a.norm_sqr()
                    }
                })
                .sum(),
            Axis::X | Axis::Y => {
                let cross = (0..amps.len())
                    .filter(|b| b & mask == 0)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, b0| {
                        acc + amps[b0].conj() * amps[b0 | mask]
                    });
                let two = T::lit(2.0);
                if axis == Axis::X {
                    two * cross.re
                } else {
                    two * cross.im
                }
            }
        };
        Ok(value)
    }
}

pub(crate) fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites == 0 {
        return Err(Error::InvalidModel {
            field: "n_sites",
            reason: "must be positive".into(),
        });
    }
    if n_sites > MAX_SITES {
        return Err(Error::TooLarge {
            n_sites,
            max: MAX_SITES,
        });
    }
    Ok(())
}

pub(crate) fn check_unit<T: Real>(u: [T; 3]) -> Result<()> {
    let norm = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    let tol = T::lit(1e-12).max(T::EPS * T::lit(16.0));
    if (norm - T::one()).abs() > tol {
        return Err(Error::NonUnitDirection {
            norm: norm.to_f64_lossy(),
        });
    }
    Ok(())
}
