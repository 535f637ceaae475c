//! Tail sums over block itineraries that avoid a fixed word.
//!
//! For a word `w` of length `n`,
//! `S_k = Σ_{w^1 ≠ w} ... Σ_{w^k ≠ w} |I_{w^1 ... w^k}|`
//! is the Lebesgue measure of the stage-`k` cover of the set of points whose
//! `n`-block itinerary never shows `w`. Whenever every level-`n` child of a
//! cylinder keeps at least a fraction `A` of its parent, `S_k <= (1 - A)^k`.

use alloc::vec::Vec;

use crate::circle_map::CircleMap;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partition::{apply_inverse_word, bounded_geometry_constant, level_endpoints};
use crate::word::Word;

/// Deepest level used when estimating the bounded-geometry constant for the
/// constant-based bound.
const CONSTANT_LEVEL_CAP: usize = 12;

/// Prefix cylinders shorter than this no longer resolve their children.
const RESOLUTION_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMethod {
    /// Product of branch lengths; piecewise-linear and linear maps.
    ClosedForm,
    Enumeration,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailRow {
    pub k: usize,
    /// `S_k`.
    pub sum: f64,
    /// `(1 - A)^k` with the empirical `A`.
    pub bound: f64,
    /// `(1 - C^{-n})^k` with the estimated bounded-geometry constant `C`.
    pub bound_from_constant: f64,
    /// Number of level-`nk` cylinders in the sum, `(d^n - 1)^k`.
    pub count: u128,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailSumReport {
    pub word: Word,
    pub method: TailMethod,
    /// Smallest observed `|I_{uv}| / |I_u|` over the avoiding prefixes `u`
    /// with fewer than `k_max` blocks and all words `v` of length `n`.
    pub a_empirical: f64,
    /// Estimated bounded-geometry constant.
    pub constant: f64,
    /// Level the constant was estimated to.
    pub constant_level: usize,
    /// `C^{-n}`.
    pub a_from_constant: f64,
    pub rows: Vec<TailRow>,
}

impl TailSumReport {
    /// First stage whose cover measure drops below `threshold`.
    pub fn first_stage_below(&self, threshold: f64) -> Option<usize> {
        self.rows.iter().find(|r| r.sum < threshold).map(|r| r.k)
    }
}

fn check_inputs(map: &CircleMap, word: &Word, k_max: usize, limits: &Limits) -> Result<()> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    word.check_degree(map.degree())?;
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1"));
    }
    limits.check_depth(word.level())?;
    Ok(())
}

fn block_count(map: &CircleMap, n: usize) -> u128 {
    (map.degree() as u128)
        .checked_pow(n as u32)
        .map(|c| c - 1)
        .unwrap_or(u128::MAX)
}

fn rows_from(
    sums: &[f64],
    a: f64,
    a_c: f64,
    blocks: u128,
) -> Vec<TailRow> {
    sums.iter()
        .enumerate()
        .map(|(i, &sum)| {
            let k = i + 1;
            TailRow {
                k,
                sum,
                bound: libm::pow(1.0 - a, k as f64),
                bound_from_constant: libm::pow(1.0 - a_c, k as f64),
                count: blocks.checked_pow(k as u32).unwrap_or(u128::MAX),
            }
        })
        .collect()
}

fn estimated_constant(map: &CircleMap, n: usize, k_max: usize, limits: &Limits) -> Result<(f64, usize)> {
    let mut level = (n * k_max).clamp(1, CONSTANT_LEVEL_CAP);
    while level > 1 && limits.check_cells(map.degree(), level).is_err() {
        level -= 1;
    }
    Ok((bounded_geometry_constant(map, level, limits)?, level))
}

/// Tail sums for `k = 1..=k_max`, in closed form for piecewise-linear maps
/// and by enumeration otherwise.
pub fn tail_sum(map: &CircleMap, word: &Word, k_max: usize, limits: &Limits) -> Result<TailSumReport> {
    check_inputs(map, word, k_max, limits)?;
    let lens = match map.branch_lengths() {
        Some(lens) => lens,
        None => return tail_sum_enumerated(map, word, k_max, limits),
    };
    let n = word.level();
    // |I_v| is the product of branch lengths along v for these maps
    let target: f64 = word.symbols().iter().map(|&s| lens[s as usize]).product();
    let shortest = lens.iter().copied().fold(f64::INFINITY, f64::min);
    let a = libm::pow(shortest, n as f64);
    let constant = 1.0 / shortest;
    let sums: Vec<f64> = (1..=k_max).map(|k| libm::pow(1.0 - target, k as f64)).collect();
    Ok(TailSumReport {
        word: word.clone(),
        method: TailMethod::ClosedForm,
        a_empirical: a,
        constant,
        constant_level: 1,
        a_from_constant: a,
        rows: rows_from(&sums, a, a, block_count(map, n)),
    })
}

/// Tail sums by explicit enumeration of the avoiding block words.
///
/// Each avoiding prefix `u` carries `F_u^{-1}` applied to the level-`n`
/// endpoints, from which `|I_u|`, every `|I_{uv}|` and the stage increment
/// `|I_u| - |I_{uw}|` are read off. Children are formed by prepending a block,
/// which costs `n` inverse-branch solves per point.
pub fn tail_sum_enumerated(map: &CircleMap, word: &Word, k_max: usize, limits: &Limits) -> Result<TailSumReport> {
    check_inputs(map, word, k_max, limits)?;
    let n = word.level();
    let d = map.degree();
    let blocks = block_count(map, n);
    let work = blocks.checked_pow(k_max as u32).unwrap_or(u128::MAX);
    if work > limits.work_cap as u128 {
        return Err(Error::WorkCapExceeded {
            requested: work,
            cap: limits.work_cap,
        });
    }
    let endpoints = level_endpoints(map, n, limits)?;
    let avoid = word.index(d);
    let block_words: Vec<Word> = (0..=blocks as usize)
        .filter(|&v| v != avoid)
        .map(|v| Word::from_index(v, d, n))
        .collect();

    let mut sums = alloc::vec![0.0; k_max];
    let mut a = f64::INFINITY;
    let mut stack: Vec<(usize, Vec<f64>)> = alloc::vec![(0, endpoints)];
    while let Some((depth, points)) = stack.pop() {
        let whole = points[points.len() - 1] - points[0];
        if !(whole > RESOLUTION_FLOOR) {
            return Err(Error::ResolutionExhausted { increment: whole });
        }
        for v in 0..points.len() - 1 {
            a = a.min((points[v + 1] - points[v]) / whole);
        }
        sums[depth] += whole - (points[avoid + 1] - points[avoid]);
        if depth + 1 < k_max {
            for v in block_words.iter().rev() {
                let child = points
                    .iter()
                    .map(|&p| apply_inverse_word(map, v.symbols(), p))
                    .collect::<Result<Vec<f64>>>()?;
                stack.push((depth + 1, child));
            }
        }
    }

    let (constant, constant_level) = estimated_constant(map, n, k_max, limits)?;
    let a_c = libm::pow(constant, -(n as f64));
    Ok(TailSumReport {
        word: word.clone(),
        method: TailMethod::Enumeration,
        a_empirical: a,
        constant,
        constant_level,
        a_from_constant: a_c,
        rows: rows_from(&sums, a, a_c, blocks),
    })
}
