//! Ground-state resolution and single-site / bond observables.
//!
//! In the ordered phase a finite chain has two quasi-degenerate lowest
//! levels whose eigenvectors are symmetric cat-like superpositions with zero
//! staggered magnetization. [`resolve_ground_state`] picks the real
//! combination of the pair with the purest single-site state on site 0,
//! which at the factorization field is exactly the product state.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::eigensolver::EigenPair;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::state::{Axis, StateVector};

/// Staggered-x matrix elements at or below this mean the pair cannot be
/// broken along x.
const STAGGER_TOL: f64 = 1e-10;

/// Grid resolution of the mixing-angle search before bisection.
const ANGLE_GRID: usize = 720;

/// Candidates within this of the best `|m|^2` count as ties.
const PURITY_TIE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resolution {
    /// Non-degenerate: the lowest eigenvector is used as is.
    Single,
    /// Degenerate pair combined into the symmetry-broken state.
    Broken,
    /// Degenerate pair with no staggered-x signal; falls back to the lowest
    /// eigenvector. Closed-form consumers must not trust this state.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundStateBundle<T> {
    pub pair: (EigenPair<T>, EigenPair<T>),
    pub gap: T,
    pub degenerate: bool,
    pub resolution: Resolution,
    pub resolved: StateVector<T>,
}

impl<T: Real> GroundStateBundle<T> {
    pub fn energy(&self) -> T {
        self.pair.0.value
    }

    /// True unless the degeneracy could not be resolved.
    pub fn is_trustworthy(&self) -> bool {
        self.resolution != Resolution::Unresolved
    }
}

pub fn resolve_ground_state<T: Real>(
    pair: (EigenPair<T>, EigenPair<T>),
    tol_deg: T,
) -> Result<GroundStateBundle<T>> {
    let gap = pair.1.value - pair.0.value;
    let degenerate = gap < tol_deg;
    let (resolution, resolved) = if degenerate {
        match break_symmetry(&pair.0.vector, &pair.1.vector)? {
            Some(state) => (Resolution::Broken, state),
            None => (Resolution::Unresolved, pair.0.vector.clone()),
        }
    } else {
        (Resolution::Single, pair.0.vector.clone())
    };
    Ok(GroundStateBundle {
        pair,
        gap,
        degenerate,
        resolution,
        resolved,
    })
}

/// `Re <a| sum_k (-1)^k sigma^x_k |b>`.
fn staggered_x<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    let mut total = T::zero();
    for k in 0..a.n_sites() {
        let term = a.inner(&b.apply_pauli(k, Axis::X)?)?.re;
        total = if k % 2 == 0 { total + term } else { total - term };
    }
    Ok(total)
}

/// Site-0 Pauli expectation along one axis for `cos(t/2) v1 + sin(t/2) v2`,
/// as `p + q cos t + r sin t`.
#[derive(Clone, Copy)]
struct Harmonic<T> {
    p: T,
    q: T,
    r: T,
}

impl<T: Real> Harmonic<T> {
    fn at(&self, t: T) -> T {
        self.p + self.q * t.cos() + self.r * t.sin()
    }

    fn slope(&self, t: T) -> T {
        self.r * t.cos() - self.q * t.sin()
    }
}

fn break_symmetry<T: Real>(
    v1: &StateVector<T>,
    v2: &StateVector<T>,
) -> Result<Option<StateVector<T>>> {
    let x11 = staggered_x(v1, v1)?;
    let x22 = staggered_x(v2, v2)?;
    let x12 = staggered_x(v1, v2)?;
    let largest = x11.abs().max(x22.abs()).max(x12.abs());
    if largest <= T::lit(STAGGER_TOL) * T::of_usize(v1.n_sites()) {
        return Ok(None);
    }

    let half = T::lit(0.5);
    let mut components = Vec::with_capacity(3);
    for axis in Axis::ALL {
        let b11 = v1.inner(&v1.apply_pauli(0, axis)?)?.re;
        let b22 = v2.inner(&v2.apply_pauli(0, axis)?)?.re;
        // symmetrized off-diagonal element of the real 2x2 block
        let b12 = half
            * (v1.inner(&v2.apply_pauli(0, axis)?)?.re + v2.inner(&v1.apply_pauli(0, axis)?)?.re);
        components.push(Harmonic {
            p: half * (b11 + b22),
            q: half * (b11 - b22),
            r: b12,
        });
    }
    let purity = |t: T| components.iter().map(|c| c.at(t).powi(2)).sum::<T>();
    let purity_slope = |t: T| {
        components
            .iter()
            .map(|c| T::lit(2.0) * c.at(t) * c.slope(t))
            .sum::<T>()
    };

    let tau = T::TAU();
    let grid: Vec<T> = (0..ANGLE_GRID)
        .map(|i| tau * T::of_usize(i) / T::of_usize(ANGLE_GRID))
        .collect();
    let values: Vec<T> = grid.iter().map(|&t| purity(t)).collect();
    let step = tau / T::of_usize(ANGLE_GRID);
    let mut candidates = Vec::new();
    for i in 0..ANGLE_GRID {
        let prev = values[(i + ANGLE_GRID - 1) % ANGLE_GRID];
        let next = values[(i + 1) % ANGLE_GRID];
        if values[i] >= prev && values[i] > next {
            let t = refine_maximum(grid[i] - step, grid[i] + step, &purity_slope)
                .unwrap_or(grid[i]);
            candidates.push((t, purity(t)));
        }
    }
    if candidates.is_empty() {
        candidates.push((T::zero(), values[0]));
    }

    let best = candidates
        .iter()
        .map(|&(_, f)| f)
        .fold(T::neg_infinity(), T::max);
    let tied: Vec<(T, T)> = candidates
        .iter()
        .copied()
        .filter(|&(_, f)| f >= best - T::lit(PURITY_TIE))
        .collect();
    let x_component = &components[Axis::X.index()];
    let (t, _) = tied
        .iter()
        .copied()
        .find(|&(t, _)| x_component.at(t) >= T::zero())
        .unwrap_or(tied[0]);

    let a = t * half;
    let state = v1
        .scale(Complex::new(a.cos(), T::zero()))
        .add_scaled(Complex::new(a.sin(), T::zero()), v2)?
        .normalized();
    Ok(Some(state))
}

/// Bisection on the slope of a smooth function over a bracket that holds a
/// maximum (`slope(lo) >= 0 >= slope(hi)`).
fn refine_maximum<T: Real>(lo: T, hi: T, slope: &impl Fn(T) -> T) -> Option<T> {
    let (mut lo, mut hi) = (lo, hi);
    if slope(lo) < T::zero() || slope(hi) > T::zero() {
        return None;
    }
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo + hi) * T::lit(0.5))
}

/// `<sigma^x>, <sigma^y>, <sigma^z>` on `site`.
pub fn pauli_vector<T: Real>(state: &StateVector<T>, site: usize) -> Result<[T; 3]> {
    Ok([
        state.pauli_expectation(site, Axis::X)?,
        state.pauli_expectation(site, Axis::Y)?,
        state.pauli_expectation(site, Axis::Z)?,
    ])
}

/// Spin expectations `<S^a> = <sigma^a> / 2`.
pub fn magnetization<T: Real>(state: &StateVector<T>, site: usize) -> Result<[T; 3]> {
    Ok(pauli_vector(state, site)?.map(|m| m * T::lit(0.5)))
}

/// `g[a][b] = <S^a_i S^b_{i+1}>`, wrapping around the chain end.
pub fn bond_correlator<T: Real>(state: &StateVector<T>, i: usize) -> Result<[[T; 3]; 3]> {
    state.check_site(i)?;
    let j = (i + 1) % state.n_sites();
    let left: Vec<_> = Axis::ALL
        .iter()
        .map(|&a| state.apply_pauli(i, a))
        .collect::<Result<_>>()?;
    let right: Vec<_> = Axis::ALL
        .iter()
        .map(|&b| state.apply_pauli(j, b))
        .collect::<Result<_>>()?;
    let quarter = T::lit(0.25);
    let mut g = [[T::zero(); 3]; 3];
    for (a, l) in left.iter().enumerate() {
        for (b, r) in right.iter().enumerate() {
            g[a][b] = quarter * l.inner(r)?.re;
        }
    }
    Ok(g)
}

/// Single-site reduced density matrix, indexed `[row][col]` with 0 = up.
pub fn reduced_density<T: Real>(state: &StateVector<T>, site: usize) -> Result<[[Complex<T>; 2]; 2]> {
    state.check_site(site)?;
    let mask = 1usize << site;
    let amps = state.amplitudes();
    let zero = Complex::new(T::zero(), T::zero());
    let mut rho = [[zero; 2]; 2];
    for b0 in (0..amps.len()).filter(|b| b & mask == 0) {
        let pair = [amps[b0], amps[b0 | mask]];
        for r in 0..2 {
            for s in 0..2 {
                rho[r][s] = rho[r][s] + pair[r] * pair[s].conj();
            }
        }
    }
    Ok(rho)
}

/// `4 det rho_site`, clamped to `[0, 1]`.
pub fn tangle<T: Real>(state: &StateVector<T>, site: usize) -> Result<T> {
    let rho = reduced_density(state, site)?;
    let det = rho[0][0] * rho[1][1] - rho[0][1] * rho[1][0];
    Ok((T::lit(4.0) * det.re).max(T::zero()).min(T::one()))
}

/// Von Neumann entropy (bits) of a qubit whose tangle is `tangle`.
pub fn vn_entropy<T: Real>(tangle: T) -> Result<T> {
    let slack = T::lit(1e-10);
    if !(tangle >= -slack && tangle <= T::one() + slack) {
        return Err(Error::TangleOutOfRange(tangle.to_f64_lossy()));
    }
    let tau = tangle.max(T::zero()).min(T::one());
    // smaller eigenvalue of rho, written to stay accurate as tau -> 0
    let small = tau / (T::lit(2.0) * (T::one() + (T::one() - tau).sqrt()));
    let large = T::one() - small;
    let plogp = |p: T, ln_p: T| if p > T::zero() { -p * ln_p } else { T::zero() };
    let nats = plogp(small, small.ln()) + plogp(large, (-small).ln_1p());
    Ok(nats / T::LN_2())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteObservables<T> {
    pub site: usize,
    /// `<sigma^a>`.
    pub m_pauli: [T; 3],
    /// `<S^a>`.
    pub m_spin: [T; 3],
    /// Correlators on the bond `(site, site + 1)`.
    pub g: [[T; 3]; 3],
    pub tangle: T,
    /// `1 - |m_pauli|^2`.
    pub linear_entropy: T,
    pub vn_entropy: T,
}

pub fn site_observables<T: Real>(state: &StateVector<T>, site: usize) -> Result<SiteObservables<T>> {
    let m_pauli = pauli_vector(state, site)?;
    let tangle = tangle(state, site)?;
    let bloch_sq = m_pauli.iter().map(|&m| m * m).sum::<T>();
    Ok(SiteObservables {
        site,
        m_pauli,
        m_spin: m_pauli.map(|m| m * T::lit(0.5)),
        g: bond_correlator(state, site)?,
        tangle,
        linear_entropy: T::one() - bloch_sq,
        vn_entropy: vn_entropy(tangle)?,
    })
}
