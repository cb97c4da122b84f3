//! Single-qubit unitary directions and their distance geometry.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ground_state::pauli_vector;
use crate::real::Real;
use crate::state::StateVector;

/// Polar angle `theta` in `[0, pi]` measured from +z, azimuth `phi` in
/// `[0, 2 pi)`, and the unit vector they describe.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction<T> {
    pub theta: T,
    pub phi: T,
    pub u: [T; 3],
}

impl<T: Real> Direction<T> {
    pub fn from_angles(theta: T, phi: T) -> Self {
        let u = [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ];
        Self { theta, phi, u }
    }

    /// Direction of a nonzero vector; the stored `u` is renormalized. An
    /// azimuth lost in rounding noise (in-plane part below `1e-12 |v|`) is
    /// set to zero.
    pub fn along(v: [T; 3]) -> Self {
        let [x, y, z] = v;
        let rho = x.hypot(y);
        let norm = rho.hypot(z);
        let theta = rho.atan2(z);
        let mut phi = if rho <= T::lit(1e-12) * norm { T::zero() } else { y.atan2(x) };
        if phi < T::zero() {
            phi = phi + T::TAU();
        }
        if phi >= T::TAU() {
            phi = T::zero();
        }
        Self {
            theta,
            phi,
            u: [x / norm, y / norm, z / norm],
        }
    }

    pub fn x() -> Self {
        Self::along([T::one(), T::zero(), T::zero()])
    }

    pub fn y() -> Self {
        Self::along([T::zero(), T::one(), T::zero()])
    }

    pub fn z() -> Self {
        Self::along([T::zero(), T::zero(), T::one()])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalFrame<T> {
    pub tilde: Direction<T>,
    pub perp1: Direction<T>,
    pub perp2: Direction<T>,
    /// False when the Bloch vector was too short to fix `tilde`.
    pub defined: bool,
}

impl<T: Real> ExtremalFrame<T> {
    /// Spherical frame around `tilde`: `perp1` is the polar unit vector
    /// and `perp2` the azimuthal one.
    pub fn around(tilde: Direction<T>, defined: bool) -> Self {
        let (st, ct) = tilde.theta.sin_cos();
        let (sp, cp) = tilde.phi.sin_cos();
        Self {
            tilde,
            perp1: Direction::along([ct * cp, ct * sp, -st]),
            perp2: Direction::along([-sp, cp, T::zero()]),
            defined,
        }
    }
}

pub fn dot<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm<T: Real>(a: [T; 3]) -> T {
    dot(a, a).sqrt()
}

/// `sqrt(1 - |<psi| u.sigma_site |psi>|^2)`.
pub fn distance<T: Real>(state: &StateVector<T>, site: usize, u: &Direction<T>) -> Result<T> {
    let image = state.apply_bloch(site, u.u)?;
    let overlap = state.inner(&image)?.norm();
    Ok((T::one() - overlap * overlap).max(T::zero()).min(T::one()).sqrt())
}

/// Direction parallel to the Bloch vector, or `None` when
/// `|m| < tol_bloch`.
pub fn extremal_direction<T: Real>(m_pauli: [T; 3], tol_bloch: T) -> Option<Direction<T>> {
    if norm(m_pauli) < tol_bloch {
        None
    } else {
        Some(Direction::along(m_pauli))
    }
}

/// Squared distance to the nearest image, `1 - |m|^2` for a pure state.
pub fn min_squared_distance<T: Real>(state: &StateVector<T>, site: usize, tol_bloch: T) -> Result<T> {
    let m = pauli_vector(state, site)?;
    match extremal_direction(m, tol_bloch) {
        Some(dir) => Ok(distance(state, site, &dir)?.powi(2)),
        None => Ok((T::one() - dot(m, m)).max(T::zero())),
    }
}

/// Extremal frame from a Bloch vector. When undefined, `tilde` is a
/// placeholder (+z) that callers are expected to replace.
pub fn extremal_frame<T: Real>(m_pauli: [T; 3], tol_bloch: T) -> ExtremalFrame<T> {
    match extremal_direction(m_pauli, tol_bloch) {
        Some(dir) => ExtremalFrame::around(dir, true),
        None => ExtremalFrame::around(Direction::z(), false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use proptest::prelude::*;

    type Sv = StateVector<f64>;
    const TOL: f64 = 1e-9;

    fn assert_vec(a: [f64; 3], b: [f64; 3], tol: f64) {
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < tol, "{a:?} vs {b:?}");
        }
    }

    fn bell() -> Sv {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |x| Complex::new(x, 0.0);
        Sv::new(2, vec![c(s), c(0.0), c(0.0), c(s)]).unwrap()
    }

    #[test]
    fn distance_examples() {
        let up = Sv::all_up(2).unwrap();
        assert_eq!(distance(&up, 0, &Direction::z()).unwrap(), 0.0);
        assert_eq!(distance(&up, 0, &Direction::x()).unwrap(), 1.0);
        let b = bell();
        for seed in 0..10u64 {
            let t = seed as f64 * 0.3;
            let dir = Direction::from_angles(t, 2.0 * t);
            assert!((distance(&b, 1, &dir).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn extremal_direction_examples() {
        let d = extremal_direction([0.0, 0.0, 0.8], TOL).unwrap();
        assert_eq!((d.theta, d.phi), (0.0, 0.0));
        assert_vec(d.u, [0.0, 0.0, 1.0], 1e-15);

        let d = extremal_direction([0.6, 0.0, 0.8], TOL).unwrap();
        assert_vec(d.u, [0.6, 0.0, 0.8], 1e-15);
        assert!((d.theta - (0.6f64 / 0.8).atan()).abs() < 1e-15);
        assert!((d.theta - 0.6435).abs() < 1e-4);

        assert!(extremal_direction([1e-10, 0.0, 0.0], TOL).is_none());
        let d = extremal_direction([1e-17, -1e-17, -0.5], TOL).unwrap();
        assert_eq!(d.phi, 0.0);
        let d = extremal_direction([0.0, -0.5, 0.0], TOL).unwrap();
        assert!((d.phi - 1.5 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn frame_examples() {
        let f = extremal_frame([0.0, 0.0, 0.8], TOL);
        assert!(f.defined);
        assert_vec(f.tilde.u, [0.0, 0.0, 1.0], 1e-15);
        assert_vec(f.perp1.u, [1.0, 0.0, 0.0], 1e-15);
        assert_vec(f.perp2.u, [0.0, 1.0, 0.0], 1e-15);

        let f = extremal_frame([0.6, 0.0, 0.8], TOL);
        assert_vec(f.perp1.u, [0.8, 0.0, -0.6], 1e-15);
        assert_vec(f.perp2.u, [0.0, 1.0, 0.0], 1e-15);

        assert!(!extremal_frame([0.0; 3], TOL).defined);
    }

    #[test]
    fn min_distance_examples() {
        let product = Sv::all_up(3).unwrap();
        assert!(min_squared_distance(&product, 2, TOL).unwrap() < 1e-15);
        assert!((min_squared_distance(&bell(), 0, TOL).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grid_search_finds_extremal_direction() {
        let psi = Sv::random(3, 77).unwrap();
        let site = 0;
        // expectation of u.sigma from an explicitly traced density matrix
        let amps = psi.amplitudes();
        let mut rho = [[Complex::new(0.0, 0.0); 2]; 2];
        for b in 0..8usize {
            for c in 0..8usize {
                if b >> 1 == c >> 1 {
                    rho[b & 1][c & 1] += amps[b] * amps[c].conj();
                }
            }
        }
        let expect = |u: [f64; 3]| {
            let op = [
                [Complex::new(u[2], 0.0), Complex::new(u[0], -u[1])],
                [Complex::new(u[0], u[1]), Complex::new(-u[2], 0.0)],
            ];
            let mut tr = Complex::new(0.0, 0.0);
            for r in 0..2 {
                for s in 0..2 {
                    tr += rho[r][s] * op[s][r];
                }
            }
            tr.re
        };
        let (nt, np) = (721, 1441);
        let mut best = (f64::INFINITY, [0.0; 3]);
        for i in 0..nt {
            let theta = std::f64::consts::PI * i as f64 / (nt - 1) as f64;
            for j in 0..np {
                let phi = std::f64::consts::TAU * j as f64 / (np - 1) as f64;
                let u = Direction::from_angles(theta, phi).u;
                let d = (1.0 - expect(u).powi(2)).max(0.0).sqrt();
                if d < best.0 {
                    best = (d, u);
                }
            }
        }
        let m = pauli_vector(&psi, site).unwrap();
        let tilde = extremal_direction(m, TOL).unwrap();
        let flip = best.1.map(|x| -x);
        let gap = norm(std::array::from_fn(|i| best.1[i] - tilde.u[i]))
            .min(norm(std::array::from_fn(|i| flip[i] - tilde.u[i])));
        let resolution = std::f64::consts::TAU / (np - 1) as f64;
        assert!(gap < 2.0 * resolution, "gap {gap}");
        let dmin = min_squared_distance(&psi, site, TOL).unwrap();
        assert!(best.0.powi(2) >= dmin - 1e-6);
        assert!((distance(&psi, site, &tilde).unwrap().powi(2) - dmin).abs() < 1e-12);
    }

    fn unit() -> impl Strategy<Value = [f64; 3]> {
        (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
            .prop_map(|(t, p)| Direction::from_angles(t, p).u)
    }

    proptest! {
        #[test]
        fn distance_is_sign_symmetric(seed in 0u64..500, u in unit(), site in 0usize..4) {
            let psi = Sv::random(4, seed).unwrap();
            let d1 = distance(&psi, site, &Direction::along(u)).unwrap();
            let d2 = distance(&psi, site, &Direction::along(u.map(|x| -x))).unwrap();
            prop_assert!((d1 - d2).abs() < 1e-12);
        }

        #[test]
        fn distance_complements_expectation(seed in 0u64..500, u in unit(), site in 0usize..4) {
            let psi = Sv::random(4, seed).unwrap();
            let d = distance(&psi, site, &Direction::along(u)).unwrap();
            let e = dot(u, pauli_vector(&psi, site).unwrap());
            prop_assert!((d * d + e * e - 1.0).abs() < 1e-12);
        }

        #[test]
        fn extremal_is_parallel_and_minimal(seed in 0u64..500, u in unit(), site in 0usize..4) {
            let psi = Sv::random(4, seed).unwrap();
            let m = pauli_vector(&psi, site).unwrap();
            let tilde = extremal_direction(m, TOL).unwrap();
            prop_assert!(norm(cross(tilde.u, m)) < 1e-10 * norm(m));
            prop_assert!(dot(tilde.u, m) > 0.0);
            let dmin = min_squared_distance(&psi, site, TOL).unwrap();
            prop_assert!((dmin - (1.0 - dot(m, m))).abs() < 1e-12);
            prop_assert!(distance(&psi, site, &Direction::along(u)).unwrap().powi(2) >= dmin - 1e-12);
        }

        #[test]
        fn frames_are_orthonormal(m in unit(), scale in 1e-6f64..1.0) {
            let f = extremal_frame(m.map(|x| x * scale), TOL);
            let vs = [f.tilde.u, f.perp1.u, f.perp2.u];
            for i in 0..3 {
                for j in 0..3 {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((dot(vs[i], vs[j]) - expected).abs() < 1e-10);
                }
            }
        }

        #[test]
        fn angles_reproduce_vector(m in unit()) {
            let d = Direction::along(m);
            let back = Direction::from_angles(d.theta, d.phi);
            prop_assert!((0.0..std::f64::consts::TAU).contains(&d.phi));
            for i in 0..3 {
                prop_assert!((back.u[i] - d.u[i]).abs() < 1e-12);
            }
        }
    }
}
