//! Boundary-circle sampling of functionals on the unit disk.
//!
//! Extrema are taken over an equispaced grid of `M` angles and then polished
//! by golden-section search around the best few grid extrema, so the estimate
//! does not depend on `M` once the grid resolves the extremal basin.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::Series;

/// Number of grid extrema that get polished.
const REFINE_CANDIDATES: usize = 4;
const GOLDEN_ITERS: usize = 60;
const WINDING_REFINE_DEPTH: u32 = 3;

/// Boundary sampling plan.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    radii: Vec<f64>,
    angular_count: usize,
    tol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { radii: vec![0.9, 0.99, 0.999], angular_count: 4096, tol: 1e-9 }
    }
}

impl GridSpec {
    pub fn new(mut radii: Vec<f64>, angular_count: usize, tol: f64) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::ParamOutOfRange("at least one radius is required".into()));
        }
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(Error::ParamOutOfRange(format!("radius {r} not in (0, 1)")));
        }
        if angular_count < 16 {
            return Err(Error::ParamOutOfRange(format!("angular count {angular_count} < 16")));
        }
        if !(tol > 0.0) {
            return Err(Error::ParamOutOfRange(format!("tolerance {tol} must be positive")));
        }
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        Ok(Self { radii, angular_count, tol })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn outer_radius(&self) -> f64 {
        *self.radii.last().expect("validated non-empty")
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_angular_count(&self, angular_count: usize) -> Result<Self> {
        Self::new(self.radii.clone(), angular_count, self.tol)
    }
}

pub fn grid_angle(j: usize, m: usize) -> f64 {
    TAU * j as f64 / m as f64
}

/// Location and value of a sampled extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleExtremum {
    pub value: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

/// Minimizes (or maximizes) a real function of the angle on `[0, 2pi)`.
pub fn angular_extremum<G>(g: G, m: usize, kind: Extremum) -> Result<CircleExtremum>
where
    G: Fn(f64) -> Result<f64>,
{
    let sign = match kind {
        Extremum::Min => 1.0,
        Extremum::Max => -1.0,
    };
    let h = |t: f64| g(t).map(|v| sign * v);
    let m = m.max(3);
    let values = (0..m).map(|j| h(grid_angle(j, m))).collect::<Result<Vec<f64>>>()?;

    let mut candidates: Vec<usize> = (0..m)
        .filter(|&j| {
            let prev = values[(j + m - 1) % m];
            let next = values[(j + 1) % m];
            values[j] <= prev && values[j] <= next
        })
        .collect();
    candidates.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    candidates.truncate(REFINE_CANDIDATES);

    let mut best = (0..m)
        .map(|j| CircleExtremum { value: values[j], theta: grid_angle(j, m) })
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("non-empty grid");

    let step = TAU / m as f64;
    for j in candidates {
        let c = golden_min(&h, grid_angle(j, m) - step, grid_angle(j, m) + step)?;
        if c.value < best.value {
            best = c;
        }
    }
    best.value *= sign;
    best.theta = best.theta.rem_euclid(TAU);
    Ok(best)
}

fn golden_min<H>(h: &H, mut a: f64, mut b: f64) -> Result<CircleExtremum>
where
    H: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = h(x1)?;
    let mut f2 = h(x2)?;
    for _ in 0..GOLDEN_ITERS {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = h(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = h(x2)?;
        }
    }
    Ok(if f1 <= f2 {
        CircleExtremum { value: f1, theta: x1 }
    } else {
        CircleExtremum { value: f2, theta: x2 }
    })
}

fn on_circle<F>(f: &F, r: f64) -> impl Fn(f64) -> Result<Complex64> + '_
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    move |t| f(Complex64::from_polar(r, t))
}

/// Infimum of `Re F` over the circle of radius `r`.
pub fn inf_re_on_circle<F>(f: F, r: f64, m: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let g = on_circle(&f, r);
    Ok(angular_extremum(|t| g(t).map(|v| v.re), m, Extremum::Min)?.value)
}

/// Supremum of `Re F` over the circle of radius `r`.
pub fn sup_re_on_circle<F>(f: F, r: f64, m: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let g = on_circle(&f, r);
    Ok(angular_extremum(|t| g(t).map(|v| v.re), m, Extremum::Max)?.value)
}

/// Supremum of `|F|` over the circle of radius `r`.
pub fn sup_mod_on_circle<F>(f: F, r: f64, m: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let g = on_circle(&f, r);
    Ok(angular_extremum(|t| g(t).map(|v| v.norm()), m, Extremum::Max)?.value)
}

/// Supremum of a real-valued functional over the circle.
pub fn sup_real_on_circle<F>(f: F, r: f64, m: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    angular_extremum(|t| f(Complex64::from_polar(r, t)), m, Extremum::Max).map(|e| e.value)
}

/// Number of zeros of `s` inside `|z| < r`, by the argument principle.
pub fn winding_number(s: &Series, r: f64, m: usize, tol: f64) -> Result<i64> {
    let m = m.max(3);
    let eval = |t: f64| -> Result<Complex64> {
        let z = Complex64::from_polar(r, t);
        let v = s.eval(z);
        if v.norm() <= tol {
            return Err(Error::ZeroOnContour { z });
        }
        Ok(v)
    };
    let values = (0..m).map(|j| eval(grid_angle(j, m))).collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for j in 0..m {
        let t0 = grid_angle(j, m);
        let t1 = grid_angle(j + 1, m);
        total += segment_phase(&eval, t0, t1, values[j], values[(j + 1) % m], 0)?;
    }
    let turns = (total / TAU).round();
    if (total - turns * TAU).abs() > 0.1 {
        return Err(Error::UnstableWinding { phase: total });
    }
    Ok(turns as i64)
}

fn segment_phase<E>(eval: &E, t0: f64, t1: f64, v0: Complex64, v1: Complex64, depth: u32) -> Result<f64>
where
    E: Fn(f64) -> Result<Complex64>,
{
    let d = (v1 / v0).arg();
    if d.abs() <= FRAC_PI_2 {
        return Ok(d);
    }
    if depth >= WINDING_REFINE_DEPTH {
        return Err(Error::UnstableWinding { phase: d });
    }
    let dt = (t1 - t0) / 4.0;
    let mut prev = v0;
    let mut sum = 0.0;
    for i in 1..=4 {
        let t = t0 + dt * i as f64;
        let next = if i == 4 { v1 } else { eval(t)? };
        sum += segment_phase(eval, t - dt, t, prev, next, depth + 1)?;
        prev = next;
    }
    Ok(sum)
}
