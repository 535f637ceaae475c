//! Nested Markov partitions `η_n` cut by `f^{-n}(0)`.
//!
//! The cylinder of `w = i_0 ... i_{n-1}` is
//! `I_w = F_{i_0}^{-1} ∘ ... ∘ F_{i_{n-1}}^{-1}([0, 1])`, where `F_i^{-1}` is
//! the inverse of the `i`-th branch. Because `F_i^{-1}(0)` and `F_i^{-1}(1)`
//! return the stored cut points exactly, neighbouring cylinders computed along
//! any route share their endpoints bit for bit.

use alloc::vec::Vec;

use crate::circle_map::CircleMap;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq)]
pub struct Cylinder {
    pub word: Word,
    pub left: f64,
    pub right: f64,
    /// Enclosure radius of each endpoint.
    pub radius: f64,
}

impl Cylinder {
    pub fn level(&self) -> usize {
        self.word.level()
    }

    pub fn length(&self) -> f64 {
        self.right - self.left
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.left + self.right)
    }
}

/// Conservative endpoint radius after `solves` inverse-branch evaluations.
pub fn endpoint_radius(map: &CircleMap, solves: usize) -> f64 {
    solves as f64 * map.step_error() * map.inverse_expansion()
}

/// `F_{s_0}^{-1} ∘ ... ∘ F_{s_{k-1}}^{-1}(p)`, innermost symbol first.
pub(crate) fn apply_inverse_word(map: &CircleMap, symbols: &[u32], p: f64) -> Result<f64> {
    symbols
        .iter()
        .rev()
        .try_fold(p, |acc, &s| map.inverse_branch(s, acc))
}

pub fn interval_of_word(map: &CircleMap, word: &Word, limits: &Limits) -> Result<Cylinder> {
    limits.check_depth(word.level())?;
    word.check_degree(map.degree())?;
    let left = apply_inverse_word(map, word.symbols(), 0.0)?;
    let right = apply_inverse_word(map, word.symbols(), 1.0)?;
    Ok(Cylinder {
        word: word.clone(),
        left,
        right,
        radius: endpoint_radius(map, word.level()),
    })
}

/// Level-`n` cylinder containing `x` (taken modulo 1), refined top-down.
///
/// At a shared endpoint the right-hand cylinder wins.
pub fn cylinder_of_point(map: &CircleMap, x: f64, n: usize, limits: &Limits) -> Result<Cylinder> {
    limits.check_depth(n)?;
    if !x.is_finite() {
        return Err(Error::OutOfDomain {
            value: x,
            domain: "finite reals",
        });
    }
    let mut x = x - libm::floor(x);
    if x >= 1.0 {
        x = 0.0;
    }
    let d = map.degree();
    let cuts = map.cuts();
    let mut word = Word::empty();
    let (mut left, mut right) = (0.0, 1.0);
    for _ in 0..n {
        let mut child = 0;
        let mut child_right = right;
        let mut child_left = left;
        for k in (1..d).rev() {
            let b = apply_inverse_word(map, word.symbols(), cuts[k as usize])?;
            if b <= x {
                child = k;
                child_left = b;
                break;
            }
            child_right = b;
        }
        word.push(child);
        left = child_left;
        right = child_right;
    }
    Ok(Cylinder {
        radius: endpoint_radius(map, n),
        word,
        left,
        right,
    })
}

pub fn word_of_point(map: &CircleMap, x: f64, n: usize, limits: &Limits) -> Result<Word> {
    cylinder_of_point(map, x, n, limits).map(|c| c.word)
}

/// The `d^n + 1` ordered endpoints of level `n`.
///
/// Level `j + 1` is the image of level `j` under each inverse branch in turn,
/// which is the same composition order as [`interval_of_word`].
pub fn level_endpoints(map: &CircleMap, n: usize, limits: &Limits) -> Result<Vec<f64>> {
    let cells = limits.check_cells(map.degree(), n)?;
    let d = map.degree();
    let mut points = alloc::vec![0.0, 1.0];
    for _ in 0..n {
        let mut next = Vec::with_capacity(points.len() * d as usize);
        for i in 0..d {
            for &p in &points[..points.len() - 1] {
                next.push(map.inverse_branch(i, p)?);
            }
        }
        next.push(1.0);
        points = next;
    }
    debug_assert_eq!(points.len(), cells + 1);
    Ok(points)
}

fn level_lengths(points: &[f64]) -> Vec<f64> {
    points.windows(2).map(|w| w[1] - w[0]).collect()
}

/// All `d^n` cylinders of level `n`, left to right.
pub fn enumerate_level(map: &CircleMap, n: usize, limits: &Limits) -> Result<Vec<Cylinder>> {
    let points = level_endpoints(map, n, limits)?;
    let radius = endpoint_radius(map, n);
    Ok(points
        .windows(2)
        .enumerate()
        .map(|(j, w)| Cylinder {
            word: Word::from_index(j, map.degree(), n),
            left: w[0],
            right: w[1],
            radius,
        })
        .collect())
}

/// `|I_{σ*(w)}| / |I_w|` for every level-`n` word, in cylinder order.
pub fn cylinder_ratios(map: &CircleMap, n: usize, limits: &Limits) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("level must be at least 1"));
    }
    let d = map.degree() as usize;
    let parent = level_lengths(&level_endpoints(map, n - 1, limits)?);
    let child = level_lengths(&level_endpoints(map, n, limits)?);
    Ok(child
        .iter()
        .enumerate()
        .map(|(j, &len)| parent[j / d] / len)
        .collect())
}

/// `max_{1 <= n <= n_max} max_w |I_{σ*(w)}| / |I_w|`, a lower bound for the
/// bounded-geometry constant.
pub fn bounded_geometry_constant(map: &CircleMap, n_max: usize, limits: &Limits) -> Result<f64> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1"));
    }
    limits.check_cells(map.degree(), n_max)?;
    let d = map.degree() as usize;
    let mut parent = alloc::vec![1.0];
    let mut best = 0.0f64;
    for n in 1..=n_max {
        let child = level_lengths(&level_endpoints(map, n, limits)?);
        for (j, &len) in child.iter().enumerate() {
            best = best.max(parent[j / d] / len);
        }
        parent = child;
    }
    Ok(best)
}

/// `τ_n`, the largest cylinder length at level `n`.
pub fn mesh(map: &CircleMap, n: usize, limits: &Limits) -> Result<f64> {
    let points = level_endpoints(map, n, limits)?;
    Ok(points.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovReport {
    pub level: usize,
    pub tol: f64,
    /// Largest `|right_j - left_{j+1}|` between neighbouring cylinders.
    pub tiling_gap: f64,
    /// Largest `|left_0|`, `|right_last - 1|`.
    pub boundary_gap: f64,
    /// Smallest cylinder length; must be positive for disjoint interiors.
    pub min_length: f64,
    /// Largest distance of `f^n(endpoint)` from `{0, 1}`.
    pub endpoint_residual: f64,
    pub worst_word: Word,
    pub passed: bool,
}

/// Distance of `f^n(x)` to the nearest integer, iterating with the lift and
/// reducing to `[-1/2, 1/2)` between steps.
fn forward_residual(map: &CircleMap, x: f64, n: usize) -> f64 {
    let mut y = x;
    for _ in 0..n {
        y = map.eval_lift(y);
        y -= libm::floor(y + 0.5);
    }
    y.abs()
}

/// Checks the Markov properties of `η_n` with independently computed cylinders.
pub fn verify_markov(map: &CircleMap, n: usize, tol: f64, limits: &Limits) -> Result<MarkovReport> {
    let cells = limits.check_cells(map.degree(), n)?;
    let mut tiling_gap = 0.0f64;
    let mut min_length = f64::INFINITY;
    let mut endpoint_residual = 0.0f64;
    let mut worst_word = Word::empty();
    let mut prev_right = 0.0;
    let mut first_left = 0.0;
    for j in 0..cells {
        let word = Word::from_index(j, map.degree(), n);
        let cyl = interval_of_word(map, &word, limits)?;
        if j == 0 {
            first_left = cyl.left;
        } else {
            tiling_gap = tiling_gap.max((cyl.left - prev_right).abs());
        }
        prev_right = cyl.right;
        min_length = min_length.min(cyl.length());
        let r = forward_residual(map, cyl.left, n).max(forward_residual(map, cyl.right, n));
        if r > endpoint_residual {
            endpoint_residual = r;
            worst_word = word;
        }
    }
    let boundary_gap = first_left.abs().max((prev_right - 1.0).abs());
    let passed = tiling_gap <= tol && boundary_gap <= tol && min_length > 0.0 && endpoint_residual <= tol;
    Ok(MarkovReport {
        level: n,
        tol,
        tiling_gap,
        boundary_gap,
        min_length,
        endpoint_residual,
        worst_word,
        passed,
    })
}
