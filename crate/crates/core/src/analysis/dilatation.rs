use alloc::vec::Vec;

use crate::circle_map::CircleMap;
use crate::conjugacy::Conjugacy;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partition::level_endpoints;
use crate::word::Word;

/// Extremes of `|h(I_w)| / |I_w|` over the level-`n` cylinders of `f`.
///
/// `h` maps `f`-cylinders onto same-word `g`-cylinders, so the ratios are
/// exact quotients of cylinder lengths. The argmax word is one step of a
/// nested interval sequence along which the dilatation approaches its
/// supremum.
#[derive(Debug, Clone, PartialEq)]
pub struct DilatationReport {
    pub level: usize,
    pub coarse_level: usize,
    /// `Φ_n`.
    pub max_ratio: f64,
    pub argmax: Word,
    /// `φ_n`.
    pub min_ratio: f64,
    pub argmin: Word,
    /// For each level-`m` cell, the largest ratio among its level-`n`
    /// descendants.
    pub coarse_maxima: Vec<(Word, f64)>,
}

pub fn dilatation_report(
    f: &CircleMap,
    g: &CircleMap,
    n: usize,
    coarse_level: usize,
    limits: &Limits,
) -> Result<DilatationReport> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch {
            from: f.degree(),
            to: g.degree(),
        });
    }
    if coarse_level > n {
        return Err(Error::InvalidParameter("coarse level must not exceed the level"));
    }
    let d = f.degree();
    let fe = level_endpoints(f, n, limits)?;
    let ge = level_endpoints(g, n, limits)?;
    let ratios: Vec<f64> = fe
        .windows(2)
        .zip(ge.windows(2))
        .map(|(a, b)| (b[1] - b[0]) / (a[1] - a[0]))
        .collect();

    // strict comparisons keep the leftmost (lexicographically smallest) word
    let (mut imax, mut imin) = (0, 0);
    for (j, &r) in ratios.iter().enumerate() {
        if r > ratios[imax] {
            imax = j;
        }
        if r < ratios[imin] {
            imin = j;
        }
    }

    let block = (d as usize).pow((n - coarse_level) as u32);
    let coarse_maxima = ratios
        .chunks(block)
        .enumerate()
        .map(|(j, chunk)| {
            (
                Word::from_index(j, d, coarse_level),
                chunk.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            )
        })
        .collect();

    Ok(DilatationReport {
        level: n,
        coarse_level,
        max_ratio: ratios[imax],
        argmax: Word::from_index(imax, d, n),
        min_ratio: ratios[imin],
        argmin: Word::from_index(imin, d, n),
        coarse_maxima,
    })
}

/// Cross-check of the cylinder extremes on arbitrary intervals: returns
/// `(max, min)` of `|h(I)| / |I|` with `h` evaluated at enclosure midpoints.
pub fn sampled_dilatation(h: &Conjugacy<'_>, intervals: &[(f64, f64)], tol: f64) -> Result<(f64, f64)> {
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for &(a, b) in intervals {
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(Error::InvalidParameter("intervals must satisfy 0 <= a < b <= 1"));
        }
        let r = (h.eval(b, tol)?.midpoint() - h.eval(a, tol)?.midpoint()) / (b - a);
        hi = hi.max(r);
        lo = lo.min(r);
    }
    Ok((hi, lo))
}
