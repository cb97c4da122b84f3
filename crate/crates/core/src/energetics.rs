//! Excitation energies under single-site unitary operations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{extremal_frame, Direction, ExtremalFrame};
use crate::ground_state::{pauli_vector, site_observables, GroundStateBundle, SiteObservables};
use crate::model::{Hamiltonian, ModelSpec};
use crate::real::Real;
use crate::state::{Axis, StateVector};
use crate::tolerances::Tolerances;

/// `Delta E(u) = u^T A u` for unit `u`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm<T> {
    pub a: [[T; 3]; 3],
    pub e0: T,
}

impl<T: Real> QuadraticForm<T> {
    pub fn eval(&self, u: [T; 3]) -> T {
        let mut total = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                total = total + u[i] * self.a[i][j] * u[j];
            }
        }
        total
    }

    /// Smallest eigenvalue and its unit eigenvector.
    pub fn min_eigen(&self) -> (T, [T; 3]) {
        let data: Vec<T> = (0..9).map(|k| self.a[k % 3][k / 3]).collect();
        let (values, vectors) = T::symmetric_eigen(3, &data);
        (values[0], [vectors[0], vectors[1], vectors[2]])
    }
}

/// Entanglement energy ratio, which diverges when the extremal excitation
/// energy vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Eer<T> {
    Finite(T),
    PosInfinite,
    NegInfinite,
    /// Both numerator and denominator below the floor.
    Indeterminate,
}

impl<T: Real> Eer<T> {
    pub fn new(numerator: T, exe: T, floor: T) -> Self {
        if exe > floor {
            Eer::Finite(numerator / exe)
        } else if numerator > floor {
            Eer::PosInfinite
        } else if numerator < -floor {
            Eer::NegInfinite
        } else {
            Eer::Indeterminate
        }
    }

    pub fn value(&self) -> T {
        match *self {
            Eer::Finite(v) => v,
            Eer::PosInfinite => T::infinity(),
            Eer::NegInfinite => T::neg_infinity(),
            Eer::Indeterminate => T::nan(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Eer::Finite(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport<T> {
    pub site: usize,
    pub exe: T,
    pub de_perp1: T,
    pub de_perp2: T,
    pub eer: Eer<T>,
    /// `None` when the bundle is unresolved, the frame undefined, or the
    /// site maximally mixed.
    pub exe_closed_form: Option<T>,
    pub frame: ExtremalFrame<T>,
    pub frame_defined: bool,
    pub form: QuadraticForm<T>,
}

/// `<G| U H U |G> - <G|H|G>` with `U = u.sigma_site`.
pub fn excitation_energy_direct<T: Real>(
    spec: &ModelSpec<T>,
    ground: &StateVector<T>,
    site: usize,
    u: [T; 3],
) -> Result<T> {
    let ham = Hamiltonian::new(spec)?;
    let image = ground.apply_bloch(site, u)?;
    Ok(ham.energy(&image)? - ham.energy(ground)?)
}

/// `<G| s_a H s_b + s_b H s_a |G>` on one site.
pub fn epsilon_cross<T: Real>(
    spec: &ModelSpec<T>,
    ground: &StateVector<T>,
    site: usize,
    alpha: Axis,
    beta: Axis,
) -> Result<T> {
    if alpha == beta {
        return Err(Error::SameAxis(alpha));
    }
    let ham = Hamiltonian::new(spec)?;
    let sa = ground.apply_pauli(site, alpha)?;
    let sb = ground.apply_pauli(site, beta)?;
    let forward = sa.inner(&ham.apply(&sb)?)?;
    let backward = sb.inner(&ham.apply(&sa)?)?;
    Ok((forward + backward).re)
}

pub fn build_quadratic_form<T: Real>(
    spec: &ModelSpec<T>,
    ground: &StateVector<T>,
    site: usize,
) -> Result<QuadraticForm<T>> {
    let ham = Hamiltonian::new(spec)?;
    let e0 = ham.energy(ground)?;
    let flipped: Vec<StateVector<T>> = Axis::ALL
        .iter()
        .map(|&a| ground.apply_pauli(site, a))
        .collect::<Result<_>>()?;
    let images: Vec<StateVector<T>> = flipped.iter().map(|s| ham.apply(s)).collect::<Result<_>>()?;
    let norm = ground.inner(ground)?.re;
    let mut a = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v = (flipped[i].inner(&images[j])?.re + flipped[j].inner(&images[i])?.re) * T::lit(0.5);
            a[i][j] = v;
            a[j][i] = v;
        }
        a[i][i] = a[i][i] - e0 * norm;
    }
    Ok(QuadraticForm { a, e0 })
}

/// Excitation energies along the extremal frame of `site`.
pub fn exe<T: Real>(
    spec: &ModelSpec<T>,
    bundle: &GroundStateBundle<T>,
    site: usize,
    tol: &Tolerances<T>,
) -> Result<EnergyReport<T>> {
    let ground = &bundle.resolved;
    let form = build_quadratic_form(spec, ground, site)?;
    let m = pauli_vector(ground, site)?;
    let mut frame = extremal_frame(m, tol.tol_bloch);
    if !frame.defined {
        let (_, v) = form.min_eigen();
        frame = ExtremalFrame::around(Direction::along(v), false);
    }
    let exe = form.eval(frame.tilde.u);
    let de_perp1 = form.eval(frame.perp1.u);
    let de_perp2 = form.eval(frame.perp2.u);
    let exe_closed_form = if bundle.is_trustworthy() && frame.defined {
        let obs = site_observables(ground, site)?;
        exe_closed_form(&obs, spec.delta_y, spec.delta_z).ok()
    } else {
        None
    };
    Ok(EnergyReport {
        site,
        exe,
        de_perp1,
        de_perp2,
        eer: Eer::new(de_perp1 - de_perp2, exe, tol.eer_floor),
        exe_closed_form,
        frame,
        frame_defined: frame.defined,
        form,
    })
}

/// Closed-form extremal excitation energy from one-site magnetizations and
/// nearest-neighbour correlators (spin normalization, `S = sigma / 2`).
pub fn exe_closed_form<T: Real>(obs: &SiteObservables<T>, delta_y: T, delta_z: T) -> Result<T> {
    let tau = obs.tangle;
    if tau >= T::one() - T::lit(1e-12) {
        return Err(Error::MaximallyMixed(tau.to_f64_lossy()));
    }
    let [mx, _, mz] = obs.m_spin;
    let g = &obs.g;
    let (gxx, gyy, gzz, gzx) = (g[0][0], g[1][1], g[2][2], g[2][0]);
    let purity = T::one() - tau;
    let bracket = (gxx * mz * mz - mx * mz * gzx) / purity
        + delta_y * gyy * T::lit(0.25)
        + delta_z * (gzz * mx * mx + mx * mz * gzx) / purity;
    Ok(-T::lit(16.0) * bracket)
}

/// Field at which the ground state is an exact product state.
pub fn factorization_field<T: Real>(delta_y: T, delta_z: T) -> T {
    ((T::one() + delta_z) * (delta_y + delta_z)).sqrt()
}
