//! Field sweeps, numerical derivatives and factorization/critical-point
//! detection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolver::{lowest_two, SolverConfig};
use crate::energetics::{exe, factorization_field, Eer};
use crate::error::{Error, Result};
use crate::ground_state::{resolve_ground_state, site_observables, tangle, Resolution};
use crate::model::ModelSpec;
use crate::real::Real;
use crate::tolerances::Tolerances;

/// Tangle below which the ground state counts as a product state.
pub const PRODUCT_TANGLE: f64 = 1e-7;

/// Interior tangle minima above this are not reported as factorization.
const DIP_TANGLE: f64 = 1e-2;

const FACTORIZE_GRID: usize = 41;

/// Slopes of `exe` below this are numerical noise.
const SLOPE_FLOOR: f64 = 1e-6;

/// Site whose observables fill a sweep row.
pub const ROW_SITE: usize = 0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanConfig<T> {
    pub h_min: T,
    pub h_max: T,
    pub steps: usize,
    pub tol_h: T,
    /// Minimum peak prominence for critical candidates, relative to the
    /// largest `|d exe / dh|` in the sweep.
    pub prominence: T,
}

impl<T: Real> Default for ScanConfig<T> {
    fn default() -> Self {
        Self {
            h_min: T::zero(),
            h_max: T::lit(1.5),
            steps: 61,
            tol_h: T::lit(1e-4),
            prominence: T::lit(0.1),
        }
    }
}

impl<T: Real> ScanConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSweep(msg));
        if !(self.h_min.is_finite() && self.h_max.is_finite()) {
            return bad("field range must be finite".into());
        }
        if self.h_min < T::zero() {
            return bad(format!("h_min must be non-negative, got {}", self.h_min));
        }
        if self.steps == 0 {
            return bad("steps must be at least 1".into());
        }
        if self.steps == 1 && self.h_max < self.h_min {
            return bad(format!("h_max {} below h_min {}", self.h_max, self.h_min));
        }
        if self.steps > 1 && self.h_max <= self.h_min {
            return bad(format!("need h_min < h_max, got [{}, {}]", self.h_min, self.h_max));
        }
        if !(self.tol_h > T::zero() && self.tol_h.is_finite()) {
            return bad(format!("tol_h must be positive, got {}", self.tol_h));
        }
        if !(self.prominence >= T::zero() && self.prominence.is_finite()) {
            return bad(format!("prominence must be non-negative, got {}", self.prominence));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<T> {
        if self.steps == 1 {
            return vec![self.h_min];
        }
        let span = self.h_max - self.h_min;
        let last = T::of_usize(self.steps - 1);
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.h_max
                } else {
                    self.h_min + span * T::of_usize(i) / last
                }
            })
            .collect()
    }

    pub fn spacing(&self) -> T {
        if self.steps < 2 {
            T::zero()
        } else {
            (self.h_max - self.h_min) / T::of_usize(self.steps - 1)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow<T> {
    pub h: T,
    pub energy0: T,
    pub gap: T,
    pub m_x: T,
    pub m_z: T,
    pub g_xx: T,
    pub g_yy: T,
    pub g_zz: T,
    pub tangle: T,
    pub vn_entropy: T,
    pub exe: T,
    pub exe_closed_form: Option<T>,
    pub de_perp1: T,
    pub de_perp2: T,
    pub eer: Eer<T>,
    /// The row was computed on a symmetry-broken combination of a
    /// degenerate pair.
    pub resolved: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    Energy0,
    Gap,
    MX,
    MZ,
    GXx,
    GYy,
    GZz,
    Tangle,
    VnEntropy,
    Exe,
    DePerp1,
    DePerp2,
    Eer,
}

impl<T: Real> SweepRow<T> {
    pub fn get(&self, column: Column) -> T {
        match column {
            Column::Energy0 => self.energy0,
            Column::Gap => self.gap,
            Column::MX => self.m_x,
            Column::MZ => self.m_z,
            Column::GXx => self.g_xx,
            Column::GYy => self.g_yy,
            Column::GZz => self.g_zz,
            Column::Tangle => self.tangle,
            Column::VnEntropy => self.vn_entropy,
            Column::Exe => self.exe,
            Column::DePerp1 => self.de_perp1,
            Column::DePerp2 => self.de_perp2,
            Column::Eer => self.eer.value(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult<T> {
    pub rows: Vec<SweepRow<T>>,
    pub h_f_detected: Option<T>,
    pub h_f_formula: T,
    /// `(h, |d exe / dh|)` in increasing `h`.
    pub critical_candidates: Vec<(T, T)>,
}

/// Full pipeline at the field stored in `spec`.
pub fn point<T: Real>(spec: &ModelSpec<T>, solver: &SolverConfig<T>, tol: &Tolerances<T>) -> Result<SweepRow<T>> {
    spec.validate()?;
    tol.validate()?;
    let pair = lowest_two(spec, solver)?;
    let bundle = resolve_ground_state(pair, tol.tol_deg)?;
    let obs = site_observables(&bundle.resolved, ROW_SITE)?;
    let report = exe(spec, &bundle, ROW_SITE, tol)?;
    Ok(SweepRow {
        h: spec.h,
        energy0: bundle.energy(),
        gap: bundle.gap,
        m_x: obs.m_spin[0],
        m_z: obs.m_spin[2],
        g_xx: obs.g[0][0],
        g_yy: obs.g[1][1],
        g_zz: obs.g[2][2],
        tangle: obs.tangle,
        vn_entropy: obs.vn_entropy,
        exe: report.exe,
        exe_closed_form: report.exe_closed_form,
        de_perp1: report.de_perp1,
        de_perp2: report.de_perp2,
        eer: report.eer,
        resolved: bundle.resolution == Resolution::Broken,
    })
}

fn at_field<T: Real>(h: T) -> impl Fn(Error) -> Error {
    move |e| Error::AtField {
        h: h.to_f64_lossy(),
        source: Box::new(e),
    }
}

/// One row per grid point of `scan`, computed concurrently. The field
/// stored in `template` is ignored.
pub fn sweep<T: Real>(
    template: &ModelSpec<T>,
    scan: &ScanConfig<T>,
    solver: &SolverConfig<T>,
    tol: &Tolerances<T>,
) -> Result<ScanResult<T>> {
    scan.validate()?;
    solver.validate()?;
    tol.validate()?;
    template.with_field(scan.h_min).validate()?;
    let outcomes: Vec<Result<SweepRow<T>>> = scan
        .grid()
        .into_par_iter()
        .map(|h| point(&template.with_field(h), solver, tol).map_err(at_field(h)))
        .collect();
    let rows = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let h_f_detected = detect_factorization(&rows);
    let mut result = ScanResult {
        rows,
        h_f_detected,
        h_f_formula: factorization_field(template.delta_y, template.delta_z),
        critical_candidates: Vec::new(),
    };
    let window = scan.tol_h.max(T::lit(2.0) * scan.spacing());
    result.critical_candidates = critical_candidates(&result, scan.prominence, window);
    Ok(result)
}

/// First product-state row, or else the deepest interior dip in tangle.
pub fn detect_factorization<T: Real>(rows: &[SweepRow<T>]) -> Option<T> {
    if let Some(row) = rows.iter().find(|r| r.tangle < T::lit(PRODUCT_TANGLE)) {
        return Some(row.h);
    }
    (1..rows.len().saturating_sub(1))
        .filter(|&i| rows[i].tangle < rows[i - 1].tangle && rows[i].tangle <= rows[i + 1].tangle)
        .filter(|&i| rows[i].tangle < T::lit(DIP_TANGLE))
        .min_by(|&a, &b| rows[a].tangle.partial_cmp(&rows[b].tangle).expect("finite tangle"))
        .map(|i| rows[i].h)
}

/// `(tangle, gap)` of the resolved ground state at `h`.
fn tangle_and_gap<T: Real>(
    template: &ModelSpec<T>,
    h: T,
    solver: &SolverConfig<T>,
    tol: &Tolerances<T>,
) -> Result<(T, T)> {
    let spec = template.with_field(h);
    let pair = lowest_two(&spec, solver).map_err(at_field(h))?;
    let bundle = resolve_ground_state(pair, tol.tol_deg)?;
    Ok((tangle(&bundle.resolved, ROW_SITE)?, bundle.gap))
}

/// Ternary search for the minimum of a function unimodal on `[a, b]`.
fn minimize<T: Real>(mut a: T, mut b: T, width: T, f: impl Fn(T) -> Result<T>) -> Result<T> {
    let third = T::one() / T::lit(3.0);
    while b - a > width {
        let m1 = a + (b - a) * third;
        let m2 = b - (b - a) * third;
        if f(m1)? <= f(m2)? {
            b = m2;
        } else {
            a = m1;
        }
    }
    Ok((a + b) * T::lit(0.5))
}

/// Locate the product-state field inside `bracket` to within `tol_h`.
///
/// A product phase starting inside the bracket is found by bisection on
/// the tangle threshold. Otherwise every interior minimum of the gap (a
/// level crossing) or of the tangle is refined, and the refined point with
/// the smallest tangle is accepted if it is a product state.
pub fn find_factorization<T: Real>(
    template: &ModelSpec<T>,
    bracket: (T, T),
    tol_h: T,
    solver: &SolverConfig<T>,
    tol: &Tolerances<T>,
) -> Result<T> {
    let (lo, hi) = bracket;
    let no_bracket = || Error::NoBracket {
        lo: lo.to_f64_lossy(),
        hi: hi.to_f64_lossy(),
    };
    let grid_cfg = ScanConfig {
        h_min: lo,
        h_max: hi,
        steps: FACTORIZE_GRID,
        tol_h,
        prominence: T::zero(),
    };
    grid_cfg.validate()?;
    solver.validate()?;
    tol.validate()?;
    template.with_field(lo).validate()?;
    let threshold = T::lit(PRODUCT_TANGLE);
    let probe = |h: T| tangle_and_gap(template, h, solver, tol);
    let half = T::lit(0.5);

    let grid = grid_cfg.grid();
    let samples = grid
        .par_iter()
        .map(|&h| probe(h))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<(T, T)>>>()?;
    let n = samples.len();
    let (first, last) = (samples[0].0, samples[n - 1].0);
    if (first < threshold) != (last < threshold) {
        let (mut a, mut b) = (lo, hi);
        let entangled_left = first >= threshold;
        while b - a > tol_h {
            let mid = (a + b) * half;
            if (probe(mid)?.0 >= threshold) == entangled_left {
                a = mid;
            } else {
                b = mid;
            }
        }
        let onset = (a + b) * half;
        // a degenerate pair already mixes in the product state before the
        // actual crossing; walk on to the gap zero
        let gap0 = probe(onset)?.1;
        if gap0 >= tol.tol_deg {
            return Ok(onset);
        }
        let towards = if entangled_left { T::one() } else { -T::one() };
        let mut reach = tol_h;
        let limit = if entangled_left { hi - onset } else { onset - lo };
        while reach < limit && probe(onset + towards * reach)?.1 < gap0 {
            reach = reach + reach;
        }
        let reach = reach.min(limit);
        let (a, b) = if entangled_left { (onset, onset + reach) } else { (onset - reach, onset) };
        return minimize(a, b, tol_h, |h| Ok(probe(h)?.1));
    }

    let is_min = |i: usize, pick: fn((T, T)) -> T| {
        pick(samples[i]) < pick(samples[i - 1]) && pick(samples[i]) <= pick(samples[i + 1])
    };
    let mut best: Option<(T, T)> = None;
    for i in 1..n - 1 {
        for pick in [|s: (T, T)| s.1, |s: (T, T)| s.0] {
            if !is_min(i, pick) {
                continue;
            }
            let h = minimize(grid[i - 1], grid[i + 1], tol_h, |h| Ok(pick(probe(h)?)))?;
            let t = probe(h)?.0;
            if best.is_none_or(|(_, bt)| t < bt) {
                best = Some((h, t));
            }
        }
    }
    match best {
        Some((h, t)) if t < threshold => Ok(h),
        _ => Err(no_bracket()),
    }
}

/// `d column / dh`: central differences inside, one-sided at the ends.
pub fn derivative<T: Real>(rows: &[SweepRow<T>], column: Column) -> Result<Vec<(T, T)>> {
    let hs: Vec<T> = rows.iter().map(|r| r.h).collect();
    let ys: Vec<T> = rows.iter().map(|r| r.get(column)).collect();
    derivative_of(&hs, &ys)
}

pub fn derivative_of<T: Real>(hs: &[T], ys: &[T]) -> Result<Vec<(T, T)>> {
    let n = hs.len();
    if ys.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: ys.len() });
    }
    if n < 3 {
        return Err(Error::TooFewRows { needed: 3, got: n });
    }
    Ok((0..n)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1),
                i if i + 1 == n => (n - 2, n - 1),
                i => (i - 1, i + 1),
            };
            (hs[i], (ys[b] - ys[a]) / (hs[b] - hs[a]))
        })
        .collect())
}

/// Local maxima of `|d exe / dh|` whose prominence is at least
/// `prominence` times the largest slope, away from `h_f_detected` by more
/// than `window`. Slopes whose stencil straddles a change of the
/// `resolved` flag are ignored.
pub fn critical_candidates<T: Real>(result: &ScanResult<T>, prominence: T, window: T) -> Vec<(T, T)> {
    let rows = &result.rows;
    let Ok(slopes) = derivative(rows, Column::Exe) else {
        return Vec::new();
    };
    let n = rows.len();
    let values: Vec<Option<T>> = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(n - 1);
            let same = rows[lo..=hi].iter().all(|r| r.resolved == rows[i].resolved);
            let v = slopes[i].1.abs();
            (same && v.is_finite()).then_some(v)
        })
        .collect();
    let peak = values.iter().flatten().copied().fold(T::zero(), T::max);
    let hs: Vec<T> = rows.iter().map(|r| r.h).collect();
    let excluded = |h: T| result.h_f_detected.is_some_and(|hf| (h - hf).abs() <= window);
    peaks(&hs, &values, (prominence * peak).max(T::lit(SLOPE_FLOOR)))
        .into_iter()
        .filter(|&(h, _)| !excluded(h))
        .collect()
}

/// Interior local maxima of a gappy series with topographic prominence at
/// least `min_prominence`. Gaps act as walls.
pub fn peaks<T: Real>(hs: &[T], values: &[Option<T>], min_prominence: T) -> Vec<(T, T)> {
    let n = values.len();
    let mut out = Vec::new();
    for i in 1..n.saturating_sub(1) {
        let (Some(v), Some(left), Some(right)) = (values[i], values[i - 1], values[i + 1]) else {
            continue;
        };
        if !(v > left && v >= right) {
            continue;
        }
        let base = |range: &mut dyn Iterator<Item = usize>| {
            let mut low = v;
            for j in range {
                match values[j] {
                    Some(w) if w > v => break,
                    Some(w) => low = low.min(w),
                    None => break,
                }
            }
            low
        };
        let left_base = base(&mut (0..i).rev());
        let right_base = base(&mut (i + 1..n));
        if v - left_base.max(right_base) >= min_prominence {
            out.push((hs[i], v));
        }
    }
    out
}
