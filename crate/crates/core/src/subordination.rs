//! Subordination `(1/p) zf'/f ≺ λ(1-z)/(λ-z)` checked through the image disk
//! of the Möbius target: the disk centered at `λ/(λ+1)` with the same radius.

use num_complex::Complex64;

use crate::disk::{inf_re_on_circle, sup_mod_on_circle, winding_number, GridSpec};
use crate::error::{Error, Result};
use crate::series::FunctionSpec;

/// The map `z -> λ(1-z)/(λ-z)` together with its image disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusTarget {
    lambda: f64,
}

impl MobiusTarget {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 1.0 && lambda.is_finite()) {
            return Err(Error::ParamOutOfRange(format!("lambda={lambda} must exceed 1")));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn center(&self) -> f64 {
        self.lambda / (self.lambda + 1.0)
    }

    pub fn radius(&self) -> f64 {
        self.lambda / (self.lambda + 1.0)
    }

    pub fn map(&self, z: Complex64) -> Complex64 {
        self.lambda * (1.0 - z) / (self.lambda - z)
    }

    /// Signed distance from `w` to the boundary circle, positive inside.
    pub fn depth(&self, w: Complex64) -> f64 {
        self.radius() - (w - self.center()).norm()
    }
}

fn check_zero_free(f: &FunctionSpec, r: f64, grid: &GridSpec) -> Result<()> {
    let found = winding_number(f.series(), r, grid.angular_count(), grid.tol())?;
    if found != f.p() as i64 {
        return Err(Error::ExtraZeros { expected: f.p() as i64, found });
    }
    Ok(())
}

/// `λ/(λ+1) - sup |(1/p) zf'/f - λ/(λ+1)|` on the outermost circle.
pub fn disk_inequality_margin(f: &FunctionSpec, lambda: f64, grid: &GridSpec) -> Result<f64> {
    let target = MobiusTarget::new(lambda)?;
    let r = grid.outer_radius();
    check_zero_free(f, r, grid)?;
    let sup = sup_mod_on_circle(|z| Ok(f.starlike_functional(z)? - target.center()), r, grid.angular_count())?;
    Ok(target.radius() - sup)
}

/// Whether every sampled value of `(1/p) zf'/f` on every configured circle
/// lies strictly inside the target disk (by more than `tol`).
pub fn containment_subordination_check(f: &FunctionSpec, lambda: f64, grid: &GridSpec) -> Result<bool> {
    let target = MobiusTarget::new(lambda)?;
    for &r in grid.radii() {
        check_zero_free(f, r, grid)?;
        let sup = sup_mod_on_circle(|z| Ok(f.starlike_functional(z)? - target.center()), r, grid.angular_count())?;
        if !(sup < target.radius() - grid.tol()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `inf Re (1/p) zf'/f` on the outermost circle; positive means starlike there.
pub fn starlike_inf(f: &FunctionSpec, grid: &GridSpec) -> Result<f64> {
    inf_re_on_circle(|z| f.starlike_functional(z), grid.outer_radius(), grid.angular_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::make_function;
    use std::collections::BTreeMap;

    fn poly(p: u32, n: u32, entries: &[(usize, f64)]) -> FunctionSpec {
        let map: BTreeMap<usize, Complex64> = entries.iter().map(|&(k, v)| (k, Complex64::new(v, 0.0))).collect();
        make_function(p, n, &map, 16).unwrap()
    }

    #[test]
    fn identity_margin() {
        let grid = GridSpec::default();
        let f = poly(1, 1, &[]);
        let m = disk_inequality_margin(&f, 2.0, &grid).unwrap();
        assert!((m - 1.0 / 3.0).abs() < 1e-14);
        assert!(containment_subordination_check(&f, 2.0, &grid).unwrap());
    }

    #[test]
    fn small_perturbation_is_inside() {
        let grid = GridSpec::default();
        let f = poly(1, 1, &[(2, 0.1)]);
        assert!(disk_inequality_margin(&f, 1.5, &grid).unwrap() > 0.0);
        assert!(containment_subordination_check(&f, 1.5, &grid).unwrap());
    }

    #[test]
    fn large_coefficient_leaves_disk() {
        let grid = GridSpec::default();
        let f = poly(1, 1, &[(2, 0.45)]);
        let m = disk_inequality_margin(&f, 1.05, &grid).unwrap();
        assert!(m < 0.0);
        // zf'/f = (1 + 0.9z)/(1 + 0.45z) reaches about 1.31 near z = 0.999
        let target = MobiusTarget::new(1.05).unwrap();
        let v = f.starlike_functional(Complex64::new(0.999, 0.0)).unwrap();
        assert!((v.re - 1.31).abs() < 0.01);
        assert!(v.re > target.center() + target.radius());
        assert!(!containment_subordination_check(&f, 1.05, &grid).unwrap());
    }

    #[test]
    fn target_geometry() {
        let t = MobiusTarget::new(2.0).unwrap();
        assert!((t.map(Complex64::new(-1.0, 0.0)).re - 4.0 / 3.0).abs() < 1e-15);
        assert!(t.map(Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((t.center() + t.radius() - 4.0 / 3.0).abs() < 1e-15);
        for k in 1..=90 {
            let l = 1.0 + k as f64 * 0.1;
            let t = MobiusTarget::new(l).unwrap();
            assert_eq!(t.center(), t.radius());
            assert!(t.radius() > 0.0 && t.radius() < 1.0);
            // boundary of the unit circle lands on the boundary of the image disk
            let w = t.map(Complex64::from_polar(1.0, 0.3 * k as f64));
            assert!(t.depth(w).abs() < 1e-12);
        }
        assert!(MobiusTarget::new(1.0).is_err());
    }

    #[test]
    fn extra_zeros_rejected() {
        let grid = GridSpec::default();
        // z + 2z^2 vanishes at -1/2
        let f = poly(1, 1, &[(2, 2.0)]);
        assert!(matches!(
            disk_inequality_margin(&f, 2.0, &grid),
            Err(Error::ExtraZeros { expected: 1, found: 2 })
        ));
    }
}
