use alloc::vec::Vec;

use crate::circle_map::CircleMap;
use crate::error::{Error, Result};

/// `||f^{-1}([a, b])| - (b - a)|` for each interval, where the preimage
/// length is summed over the inverse branches.
pub fn measure_deviations(map: &CircleMap, intervals: &[(f64, f64)]) -> Result<Vec<f64>> {
    intervals
        .iter()
        .map(|&(a, b)| {
            if !(0.0 <= a && a <= b && b <= 1.0) {
                return Err(Error::InvalidParameter("intervals must satisfy 0 <= a <= b <= 1"));
            }
            let mut preimage = 0.0;
            for i in 0..map.degree() {
                preimage += map.inverse_branch(i, b)? - map.inverse_branch(i, a)?;
            }
            Ok((preimage - (b - a)).abs())
        })
        .collect()
}

pub fn measure_deviation(map: &CircleMap, intervals: &[(f64, f64)]) -> Result<f64> {
    Ok(measure_deviations(map, intervals)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// `[j / 2^level, (j + 1) / 2^level]` for `j = 0..2^level`.
pub fn dyadic_intervals(level: u32) -> Vec<(f64, f64)> {
    let m = 1u64 << level;
    (0..m)
        .map(|j| (j as f64 / m as f64, (j + 1) as f64 / m as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_map::MapSpec;
    use alloc::vec;

    #[test]
    fn linear_and_piecewise_preserve_lebesgue() {
        let intervals = vec![(0.0, 1.0), (0.1, 0.35), (0.6, 0.61), (0.0, 0.0), (0.2, 0.9)];
        let lin = CircleMap::new(MapSpec::Linear { degree: 2 }).unwrap();
        assert!(measure_deviation(&lin, &intervals).unwrap() <= 1e-14);
        let f = CircleMap::new(MapSpec::falpha(0.6)).unwrap();
        assert!(measure_deviation(&f, &intervals).unwrap() <= 1e-12);
        assert!(measure_deviation(&f, &dyadic_intervals(8)).unwrap() <= 1e-12);
    }

    #[test]
    fn rejects_bad_intervals() {
        let f = CircleMap::new(MapSpec::falpha(0.6)).unwrap();
        assert!(measure_deviation(&f, &[(0.5, 0.2)]).is_err());
        assert!(measure_deviation(&f, &[(-0.1, 0.2)]).is_err());
    }

    #[test]
    fn dyadic_family() {
        let d = dyadic_intervals(3);
        assert_eq!(d.len(), 8);
        assert_eq!(d[0], (0.0, 0.125));
        assert_eq!(d[7], (0.875, 1.0));
    }
}
