use alloc::vec::Vec;

use crate::circle_map::{CircleMap, HomeoSpec};
use crate::conjugacy::Conjugacy;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Increments below this are treated as exhausted resolution.
pub const RATIO_FLOOR: f64 = 1e-300;

/// Something with an evaluable lift `H` of a circle homeomorphism.
pub trait CircleHomeo {
    fn value(&self, x: f64) -> Result<f64>;
}

impl CircleHomeo for HomeoSpec {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(self.lift(x))
    }
}

/// A conjugacy evaluated at enclosure midpoints with tolerance `tol`.
#[derive(Debug, Clone, Copy)]
pub struct ConjugacyLift<'a> {
    pub conjugacy: Conjugacy<'a>,
    pub tol: f64,
}

impl CircleHomeo for ConjugacyLift<'_> {
    fn value(&self, x: f64) -> Result<f64> {
        self.conjugacy.lift(x, self.tol)
    }
}

/// `x ↦ -H(-x)`; swaps the two increments of every ratio.
#[derive(Debug, Clone, Copy)]
pub struct Reflected<'a, H: ?Sized>(pub &'a H);

impl<H: CircleHomeo + ?Sized> CircleHomeo for Reflected<'_, H> {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(-self.0.value(-x)?)
    }
}

fn ratio(num: f64, den: f64) -> Result<f64> {
    for increment in [num, den] {
        if !(increment >= RATIO_FLOOR) {
            return Err(Error::ResolutionExhausted { increment });
        }
    }
    Ok(num / den)
}

/// `(H(x + t) - H(x)) / (H(x) - H(x - t))` for `0 < t <= 1/2`.
pub fn qs_ratio<H: CircleHomeo + ?Sized>(h: &H, x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 0.5) {
        return Err(Error::InvalidParameter("scale t must lie in (0, 1/2]"));
    }
    let mid = h.value(x)?;
    let right = h.value(x + t)? - mid;
    let left = mid - h.value(x - t)?;
    ratio(right, left)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusRow {
    pub scale: f64,
    /// Worst ratio or deviation at this scale.
    pub value: f64,
    /// First grid point attaining it.
    pub argmax: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusReport {
    pub quantity: &'static str,
    pub grid: usize,
    /// Scales strictly decreasing.
    pub rows: Vec<ModulusRow>,
}

/// `t = 2^{-j}` for `j = 1..=20`.
pub fn default_scales() -> Vec<f64> {
    (1..=20).map(|j| libm::ldexp(1.0, -j)).collect()
}

fn check_scales(scales: &[f64]) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::InvalidParameter("at least one scale is required"));
    }
    if scales.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter("scales must be strictly decreasing"));
    }
    Ok(())
}

/// `ε̂(t) = max_x max(r - 1, 1/r - 1)` with `r = qs_ratio(h, x, t)` on the
/// grid `x_j = j / grid`.
pub fn symmetry_modulus<H: CircleHomeo + ?Sized>(h: &H, scales: &[f64], grid: usize) -> Result<ModulusReport> {
    check_scales(scales)?;
    if grid == 0 {
        return Err(Error::InvalidParameter("grid must be positive"));
    }
    let mut rows = Vec::with_capacity(scales.len());
    for &t in scales {
        let mut row = ModulusRow {
            scale: t,
            value: 0.0,
            argmax: 0.0,
        };
        for j in 0..grid {
            let x = j as f64 / grid as f64;
            let r = qs_ratio(h, x, t)?;
            let dev = (r - 1.0).max(1.0 / r - 1.0);
            if dev > row.value {
                row.value = dev;
                row.argmax = x;
            }
        }
        rows.push(row);
    }
    Ok(ModulusReport {
        quantity: "symmetry_deviation",
        grid,
        rows,
    })
}

/// `(F^{-n}(x + t) - F^{-n}(x)) / (F^{-n}(x) - F^{-n}(x - t))`.
pub fn uqs_ratio_endo(map: &CircleMap, x: f64, t: f64, n: usize, limits: &Limits) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter("scale t must be positive"));
    }
    let mid = map.global_inverse_lift(x, n, limits)?;
    let right = map.global_inverse_lift(x + t, n, limits)? - mid;
    let left = mid - map.global_inverse_lift(x - t, n, limits)?;
    ratio(right, left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_map::MapSpec;
    use crate::conjugacy::endpoint_table;

    #[test]
    fn identity_ratios() {
        let id = HomeoSpec::Identity;
        for (x, t) in [(0.0, 0.5), (0.3, 0.01), (0.77, 1e-6)] {
            assert!((qs_ratio(&id, x, t).unwrap() - 1.0).abs() < 1e-9);
        }
        let rep = symmetry_modulus(&id, &[0.25, 0.125], 64).unwrap();
        assert!(rep.rows.iter().all(|r| r.value < 1e-12));
    }

    #[test]
    fn scale_validation() {
        let id = HomeoSpec::Identity;
        assert!(qs_ratio(&id, 0.1, 0.0).is_err());
        assert!(qs_ratio(&id, 0.1, 0.6).is_err());
        assert!(symmetry_modulus(&id, &[0.1, 0.2], 8).is_err());
        assert!(symmetry_modulus(&id, &[], 8).is_err());
    }

    #[test]
    fn degenerate_increment() {
        let id = HomeoSpec::Identity;
        assert!(matches!(
            qs_ratio(&id, 0.5, 1e-320),
            Err(Error::ResolutionExhausted { .. })
        ));
    }

    #[test]
    fn conjugacy_ratio_at_zero() {
        let f = CircleMap::new(MapSpec::falpha(0.6)).unwrap();
        let g = CircleMap::new(MapSpec::Linear { degree: 2 }).unwrap();
        let limits = Limits::default();
        let h = ConjugacyLift {
            conjugacy: Conjugacy::new(&f, &g, &limits).unwrap(),
            tol: 1e-12,
        };
        let t = 0.4f64.powi(3);
        let r = qs_ratio(&h, 0.0, t).unwrap();
        // oracle: I_111 = [1 - 0.4^3, 1] maps onto [7/8, 1]; 0.4^3 lies in I_00000
        let table = endpoint_table(&f, &g, 5, &limits).unwrap();
        let (e, img) = table.pairs[table.pairs.len() - 5];
        assert!((e - (1.0 - t)).abs() < 1e-15 && img == 0.875);
        assert!(table.pairs[1].0 >= t && table.pairs[1].1 == 1.0 / 32.0);
        assert!(r <= 0.25, "{r}");
    }

    #[test]
    fn smooth_homeo_ratio_tends_to_one() {
        let h = HomeoSpec::SineHomeo { c: 0.5 };
        let mut prev = f64::INFINITY;
        for j in 2..12 {
            let t = libm::ldexp(1.0, -j);
            let dev = (qs_ratio(&h, 0.25, t).unwrap() - 1.0).abs();
            assert!(dev < prev);
            prev = dev;
        }
        assert!(prev < 1e-2);
    }

    #[test]
    fn reflection_inverts_ratio() {
        let h = HomeoSpec::SineHomeo { c: 0.3 };
        for (x, t) in [(0.1, 0.2), (0.45, 0.01), (0.9, 0.3)] {
            let r = qs_ratio(&h, x, t).unwrap();
            let s = qs_ratio(&Reflected(&h), -x, t).unwrap();
            assert!((r * s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uqs_examples() {
        let limits = Limits::default();
        let lin = CircleMap::new(MapSpec::Linear { degree: 2 }).unwrap();
        for n in 1..8 {
            assert!((uqs_ratio_endo(&lin, 0.3, 0.1, n, &limits).unwrap() - 1.0).abs() < 1e-12);
        }
        let f = CircleMap::new(MapSpec::falpha(0.6)).unwrap();
        let r4 = uqs_ratio_endo(&f, 0.0, 0.2, 4, &limits).unwrap();
        let right = f.global_inverse_lift(0.2, 4, &limits).unwrap();
        let left = -f.global_inverse_lift(-0.2, 4, &limits).unwrap();
        assert!((right / left - 5.0625).abs() < 1e-12);
        assert!((r4 - 5.0625).abs() < 1e-12);
    }
}
