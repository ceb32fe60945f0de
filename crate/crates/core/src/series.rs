//! Truncated complex power series and the function classes built on them.
//!
//! A [`Series`] stores the coefficients `c_0 .. c_N` densely. Quotients with a
//! removable singularity at the origin (`f'/z^{p-1}`, `f''/z^{p-2}`, ...) are
//! evaluated by shifting indices, never by dividing by a power of `z`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default truncation order.
pub const DEFAULT_TRUNCATION: usize = 64;

/// Threshold below which a denominator is treated as zero.
pub const DENOMINATOR_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    coeffs: Vec<Complex64>,
}

impl Series {
    /// Builds a series of truncation order `truncation` from a sparse map.
    pub fn from_map(map: &BTreeMap<usize, Complex64>, truncation: usize) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); truncation + 1];
        for (&k, &c) in map {
            if k > truncation {
                return Err(Error::IndexOutOfRange { index: k, lo: 0, hi: truncation });
            }
            coeffs[k] = c;
        }
        Ok(Self { coeffs })
    }

    /// Dense constructor; `coeffs[k]` is the coefficient of `z^k`.
    pub fn from_dense(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient slot");
        Self { coeffs }
    }

    pub fn monomial(k: usize, c: Complex64, truncation: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); truncation.max(k) + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Nonzero coefficients in ascending index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(k, c)| (k, *c))
    }

    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.nonzero().next().map(|(k, _)| k)
    }

    pub fn highest_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.lowest_nonzero().is_none()
    }

    /// Term-wise derivative: `k c_k` moves to index `k-1`, truncation drops by one.
    pub fn derivative(&self) -> Series {
        if self.coeffs.len() == 1 {
            return Series { coeffs: vec![Complex64::new(0.0, 0.0)] };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        Series { coeffs }
    }

    /// Multiplies by `z` (indices move up by one).
    pub fn mul_z(&self) -> Series {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        Series { coeffs }
    }

    pub fn scale(&self, a: Complex64) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| c * a).collect() }
    }

    /// Ordinary evaluation `sum c_k z^k`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// The series divided by `z^shift` as a new series. `shift` must not exceed
    /// the lowest nonzero index.
    pub fn shifted(&self, shift: usize) -> Result<Series> {
        check_shift(self, shift as i64)?;
        if shift >= self.coeffs.len() {
            return Ok(Series { coeffs: vec![Complex64::new(0.0, 0.0)] });
        }
        Ok(Series { coeffs: self.coeffs[shift..].to_vec() })
    }
}

fn combine(a: &Series, b: &Series, op: impl Fn(Complex64, Complex64) -> Complex64) -> Series {
    let len = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..len).map(|k| op(a.coeff(k), b.coeff(k))).collect();
    Series { coeffs }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        combine(self, rhs, |x, y| x + y)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        combine(self, rhs, |x, y| x - y)
    }
}

impl Mul<Complex64> for &Series {
    type Output = Series;
    fn mul(self, rhs: Complex64) -> Series {
        self.scale(rhs)
    }
}

pub fn differentiate(s: &Series) -> Series {
    s.derivative()
}

fn check_shift(s: &Series, shift: i64) -> Result<()> {
    if let Some(k) = s.lowest_nonzero() {
        if (k as i64) < shift {
            return Err(Error::ShiftUnderflow { index: k, shift });
        }
    }
    Ok(())
}

/// Evaluates `sum c_k z^{k - shift}`. Negative shifts multiply by `z^{|shift|}`.
pub fn eval_shifted(s: &Series, shift: i64, z: Complex64) -> Result<Complex64> {
    check_shift(s, shift)?;
    let start = shift.max(0) as usize;
    if start >= s.coeffs.len() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let body = s.coeffs[start..]
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    if shift < 0 {
        Ok(body * z.powu((-shift) as u32))
    } else {
        Ok(body)
    }
}

/// `eval_shifted(numer) / eval_shifted(denom)` with a vanishing-denominator guard.
pub fn quotient_eval(numer: &Series, denom: &Series, shift: i64, z: Complex64) -> Result<Complex64> {
    let d = eval_shifted(denom, shift, z)?;
    if d.norm() <= DENOMINATOR_EPS {
        return Err(Error::DenominatorVanishes { z });
    }
    Ok(eval_shifted(numer, shift, z)? / d)
}

/// A member of `A_{p,n}`: `z^p + a_{p+n} z^{p+n} + ...` truncated at order `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    p: u32,
    n: u32,
    series: Series,
    exact: bool,
    tail_coeff: f64,
    // f', z f'' and z f', precomputed for the boundary functionals
    d1: Series,
    zd2: Series,
    zd1: Series,
}

impl FunctionSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn truncation(&self) -> usize {
        self.series.truncation()
    }

    /// True when the stored polynomial is the whole function.
    pub fn exact(&self) -> bool {
        self.exact
    }

    /// Coefficient magnitude bound used for the truncation tail (0 when exact).
    pub fn tail_coeff(&self) -> f64 {
        self.tail_coeff
    }

    /// Bound `|c_{N+1}| r^{N+1} / (1 - r)` on the discarded tail at radius `r`.
    pub fn tail_bound(&self, r: f64) -> f64 {
        if self.exact {
            return 0.0;
        }
        self.tail_coeff * r.powi(self.truncation() as i32 + 1) / (1.0 - r)
    }

    /// Marks the function as a truncation of an infinite series.
    pub fn with_tail(mut self, tail_coeff: f64) -> Self {
        self.exact = false;
        self.tail_coeff = tail_coeff;
        self
    }

    pub fn coeff_map(&self) -> BTreeMap<usize, Complex64> {
        self.series.nonzero().collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.series.eval(z)
    }

    /// `f'(z) / (p z^{p-1})`.
    pub fn normalized_derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(eval_shifted(&self.d1, self.p as i64 - 1, z)? / self.p as f64)
    }

    /// `1 + z f''(z) / f'(z)`.
    pub fn convexity_functional(&self, z: Complex64) -> Result<Complex64> {
        Ok(1.0 + quotient_eval(&self.zd2, &self.d1, self.p as i64 - 1, z)?)
    }

    /// `(1/p) z f'(z) / f(z)`.
    pub fn starlike_functional(&self, z: Complex64) -> Result<Complex64> {
        Ok(quotient_eval(&self.zd1, &self.series, self.p as i64, z)? / self.p as f64)
    }
}

/// Validates `A_{p,n}` membership and builds the function; `c_p` is forced to 1.
pub fn make_function(
    p: u32,
    n: u32,
    coeffs: &BTreeMap<usize, Complex64>,
    truncation: usize,
) -> Result<FunctionSpec> {
    if p == 0 || n == 0 {
        return Err(Error::InvalidFunction(format!("p and n must be positive (p={p}, n={n})")));
    }
    let pu = p as usize;
    if truncation < pu {
        return Err(Error::InvalidFunction(format!("truncation {truncation} below p={p}")));
    }
    for (&k, c) in coeffs {
        if k < pu || k > truncation {
            return Err(Error::IndexOutOfRange { index: k, lo: pu, hi: truncation });
        }
        if k > pu && k < pu + n as usize && *c != Complex64::new(0.0, 0.0) {
            return Err(Error::GapViolation { index: k, p, n });
        }
    }
    let mut map = coeffs.clone();
    map.insert(pu, Complex64::new(1.0, 0.0));
    let series = Series::from_map(&map, truncation)?;
    let d1 = series.derivative();
    let zd2 = d1.derivative().mul_z();
    let zd1 = d1.mul_z();
    Ok(FunctionSpec { p, n, series, exact: true, tail_coeff: 0.0, d1, zd2, zd1 })
}

/// An auxiliary function `w(z) = a_k z^k + ...` with `w(0) = 0` and `w` not identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    order: u32,
    series: Series,
}

impl TestFunction {
    /// The order is the lowest nonzero index, which must be at least 1.
    pub fn new(series: Series) -> Result<Self> {
        match series.lowest_nonzero() {
            None => Err(Error::InvalidFunction("test function is identically zero".into())),
            Some(0) => Err(Error::InvalidFunction("test function must vanish at the origin".into())),
            Some(k) => Ok(Self { order: k as u32, series }),
        }
    }

    /// Like [`TestFunction::new`] but also requires order at least `min_order`.
    pub fn with_min_order(series: Series, min_order: u32) -> Result<Self> {
        let w = Self::new(series)?;
        if w.order < min_order {
            return Err(Error::InvalidFunction(format!(
                "test function has order {} below the required {}",
                w.order, min_order
            )));
        }
        Ok(w)
    }

    pub fn from_map(coeffs: &BTreeMap<usize, Complex64>, truncation: usize) -> Result<Self> {
        Self::new(Series::from_map(coeffs, truncation)?)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn series(&self) -> &Series {
        &self.series
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn map(entries: &[(usize, f64)]) -> BTreeMap<usize, Complex64> {
        entries.iter().map(|&(k, v)| (k, c(v))).collect()
    }

    #[test]
    fn make_function_examples() {
        let f = make_function(1, 1, &map(&[(2, 0.1)]), 8).unwrap();
        assert_eq!(f.series().coeff(1), c(1.0));
        assert_eq!(f.series().coeff(2), c(0.1));
        assert!(f.exact());

        let err = make_function(2, 3, &map(&[(3, 0.5)]), 8).unwrap_err();
        assert!(matches!(err, Error::GapViolation { index: 3, .. }));

        let f = make_function(1, 2, &map(&[(3, 0.2)]), 8).unwrap();
        assert_eq!(f.series().coeff(2), c(0.0));
        assert_eq!(f.series().coeff(3), c(0.2));
    }

    #[test]
    fn make_function_rejects_bad_indices() {
        assert!(matches!(
            make_function(2, 1, &map(&[(1, 0.5)]), 8),
            Err(Error::IndexOutOfRange { index: 1, .. })
        ));
        assert!(matches!(
            make_function(1, 1, &map(&[(9, 0.5)]), 8),
            Err(Error::IndexOutOfRange { index: 9, .. })
        ));
        // a zero coefficient inside the gap is harmless
        assert!(make_function(2, 3, &map(&[(3, 0.0)]), 8).is_ok());
        // c_p is overridden
        let f = make_function(1, 1, &map(&[(1, 7.0)]), 4).unwrap();
        assert_eq!(f.series().coeff(1), c(1.0));
    }

    #[test]
    fn differentiate_examples() {
        let zp = Series::monomial(3, c(1.0), 8);
        let d = differentiate(&zp);
        assert_eq!(d.coeff(2), c(3.0));
        assert_eq!(d.truncation(), 7);

        let f = make_function(1, 1, &map(&[(2, 0.1)]), 8).unwrap();
        let d = differentiate(f.series());
        assert_eq!(d.coeff(0), c(1.0));
        assert!((d.coeff(1) - c(0.2)).norm() < 1e-15);
    }

    #[test]
    fn eval_shifted_examples() {
        let f = make_function(1, 1, &map(&[(2, 0.1)]), 8).unwrap();
        let d = f.series().derivative();
        assert_eq!(eval_shifted(&d, 0, c(0.0)).unwrap(), c(1.0));

        let g = make_function(2, 1, &BTreeMap::new(), 8).unwrap();
        assert!((g.normalized_derivative(c(0.5)).unwrap() - c(1.0)).norm() < 1e-15);
        assert!((g.normalized_derivative(c(0.0)).unwrap() - c(1.0)).norm() < 1e-15);

        // 1 + 0.2z/(1+0.2z) at z = -0.9
        let v = f.convexity_functional(c(-0.9)).unwrap();
        assert!((v.re - (1.0 - 0.18 / 0.82)).abs() < 1e-12);
        assert!((v.re - 0.780488).abs() < 1e-6);
    }

    #[test]
    fn eval_shifted_negative_shift_and_underflow() {
        let s = Series::from_dense(vec![c(2.0), c(3.0)]);
        let z = Complex64::new(0.3, -0.4);
        let v = eval_shifted(&s, -1, z).unwrap();
        assert!((v - z * (c(2.0) + c(3.0) * z)).norm() < 1e-15);
        assert!(matches!(
            eval_shifted(&s, 1, z),
            Err(Error::ShiftUnderflow { index: 0, shift: 1 })
        ));
    }

    #[test]
    fn quotient_eval_examples() {
        let s = Series::from_dense(vec![c(1.0), c(0.5), c(0.25)]);
        let z = Complex64::new(0.2, 0.7);
        assert!((quotient_eval(&s, &s, 0, z).unwrap() - c(1.0)).norm() < 1e-15);

        let f = make_function(1, 1, &map(&[(2, 0.45)]), 8).unwrap();
        let d1 = f.series().derivative();
        let zd2 = d1.derivative().mul_z();
        let z = c(-0.999);
        let v = quotient_eval(&zd2, &d1, 0, z).unwrap();
        let expected = 0.9 * -0.999 / (1.0 + 0.9 * -0.999);
        assert!((v.re - expected).abs() < 1e-9);
        assert!((v.re + 8.9108).abs() < 1e-4);

        // f'(z) = 1 + z vanishes at z = -1
        let g = make_function(1, 1, &map(&[(2, 0.5)]), 4).unwrap();
        let d1 = g.series().derivative();
        let zd2 = d1.derivative().mul_z();
        assert!(matches!(
            quotient_eval(&zd2, &d1, 0, c(-1.0)),
            Err(Error::DenominatorVanishes { .. })
        ));
    }

    #[test]
    fn tail_bound_geometric() {
        let ones: BTreeMap<usize, Complex64> = (1..=8).map(|k| (k, c(1.0))).collect();
        let f = make_function(1, 1, &ones, 8).unwrap().with_tail(1.0);
        assert!(!f.exact());
        let r: f64 = 0.5;
        assert!((f.tail_bound(r) - r.powi(9) / (1.0 - r)).abs() < 1e-15);
    }

    #[test]
    fn test_function_order() {
        let w = TestFunction::from_map(&map(&[(2, 1.0), (3, 0.5)]), 8).unwrap();
        assert_eq!(w.order(), 2);
        assert!(TestFunction::from_map(&map(&[(0, 1.0)]), 8).is_err());
        assert!(TestFunction::from_map(&BTreeMap::new(), 8).is_err());
        assert!(TestFunction::with_min_order(Series::monomial(1, c(1.0), 4), 2).is_err());
    }
}
