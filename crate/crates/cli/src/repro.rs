//! The acceptance experiments, each reduced to one measured value compared
//! against a tolerance.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symrig_core::analysis::{
    dilatation_report, dyadic_intervals, measure_deviation, qs_ratio, symmetry_modulus, tail_sum,
    uqs_ratio_endo, ConjugacyLift,
};
use symrig_core::{
    bounded_geometry_constant, conjugacy_residual, cylinder_ratios, enumerate_level, level_endpoints,
    make_conjugated, CircleMap, Conjugacy, HomeoSpec, Limits, MapSpec, Word,
};

use crate::error::CliResult;
use crate::report::Report;

/// Measure deviation of the sine-conjugated doubling map on the 256 level-8
/// dyadic intervals, from an independent root-finding computation.
pub const PINNED_MEASURE_DEVIATION: f64 = 0.0039046823935964814;

#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub measured: f64,
    /// `"<="` or `">"`.
    pub relation: &'static str,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

pub const NAMES: [&str; 9] = [
    "falpha_uqs_growth",
    "falpha_bounded_geometry",
    "tail_sums",
    "conjugacy_functional_equation",
    "oracle_round_trip",
    "identity_rigidity",
    "rigidity_contrapositive",
    "piecewise_linear_properties",
    "measure_discrimination",
];

fn at_most(measured: f64, tolerance: f64) -> bool {
    measured <= tolerance
}

fn lin2() -> CliResult<CircleMap> {
    Ok(CircleMap::new(MapSpec::Linear { degree: 2 })?)
}

fn f06() -> CliResult<CircleMap> {
    Ok(CircleMap::new(MapSpec::falpha(0.6))?)
}

struct Measured {
    measured: f64,
    passed: bool,
    detail: String,
}

fn falpha_uqs(limits: &Limits) -> CliResult<Measured> {
    let f = f06()?;
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 1..=20 {
        let r = uqs_ratio_endo(&f, 0.0, 0.2, n, limits)?;
        worst = worst.max((r / 1.5f64.powi(n as i32) - 1.0).abs());
    }
    let fast = start.elapsed() < Duration::from_secs(1);
    Ok(Measured {
        measured: worst,
        passed: at_most(worst, 1e-10) && fast,
        detail: format!("n=1..20 vs 1.5^n; runtime under 1 s: {fast}"),
    })
}

fn falpha_geometry(limits: &Limits) -> CliResult<Measured> {
    let f = f06()?;
    let c = bounded_geometry_constant(&f, 12, limits)?;
    let mut off_set = 0.0f64;
    for n in 1..=12 {
        for r in cylinder_ratios(&f, n, limits)? {
            off_set = off_set.max((r - 1.0 / 0.6).abs().min((r - 1.0 / 0.4).abs()));
        }
    }
    let measured = (c - 2.5).abs().max(off_set);
    Ok(Measured {
        measured,
        passed: at_most(measured, 1e-9),
        detail: format!("C_12={c:.17e}; largest distance of a ratio from {{1/0.6, 1/0.4}}: {off_set:.3e}"),
    })
}

fn all_words(degree: u32, n: usize) -> Vec<Word> {
    (0..(degree as usize).pow(n as u32)).map(|i| Word::from_index(i, degree, n)).collect()
}

fn tail_sums(limits: &Limits) -> CliResult<Measured> {
    let maps = [
        lin2()?,
        f06()?,
        CircleMap::new(MapSpec::SmoothSine { degree: 2, epsilon: 0.5 })?,
    ];
    let mut margin = f64::NEG_INFINITY;
    for map in &maps {
        for n in 1..=2 {
            for w in all_words(2, n) {
                let r = tail_sum(map, &w, 10, limits)?;
                for row in &r.rows {
                    margin = margin.max(row.sum - row.bound);
                }
            }
        }
    }
    let doubling = tail_sum(&maps[0], &Word::new(vec![0]), 10, limits)?;
    let equality = doubling
        .rows
        .iter()
        .map(|row| (row.sum - 0.5f64.powi(row.k as i32)).abs())
        .fold(0.0, f64::max);
    let stage = doubling.first_stage_below(1e-3);
    Ok(Measured {
        measured: margin,
        passed: at_most(margin, 0.0) && at_most(equality, 1e-12) && stage.is_some(),
        detail: format!(
            "max S_k-(1-A)^k over 3 maps, n=1,2, k<=10; doubling w=0 |S_k-2^-k|={equality:.3e}; cover below 1e-3 at k={}",
            stage.map_or("none".to_string(), |k| k.to_string())
        ),
    })
}

fn functional_equation(limits: &Limits) -> CliResult<Measured> {
    let (f, g) = (f06()?, lin2()?);
    let start = Instant::now();
    let r = conjugacy_residual(&f, &g, 1024, 1e-8, limits)?;
    let fast = start.elapsed() < Duration::from_secs(10);
    Ok(Measured {
        measured: r.max_residual,
        passed: at_most(r.max_residual, 1e-6) && r.all_converged && fast,
        detail: format!(
            "grid 1024, tol 1e-8; widest enclosure {:.3e}; all converged: {}; runtime under 10 s: {fast}",
            r.max_width, r.all_converged
        ),
    })
}

fn sine_conjugated() -> CliResult<CircleMap> {
    let spec = make_conjugated(&MapSpec::Linear { degree: 2 }, &HomeoSpec::SineHomeo { c: 0.5 })?;
    Ok(CircleMap::new(spec)?)
}

fn round_trip(limits: &Limits) -> CliResult<Measured> {
    let f = sine_conjugated()?;
    let g = lin2()?;
    let homeo = HomeoSpec::SineHomeo { c: 0.5 };
    let h = Conjugacy::new(&f, &g, limits)?;
    let mut worst = 0.0f64;
    let mut converged = true;
    for e in level_endpoints(&f, 10, limits)? {
        let enc = h.eval(e, 1e-8)?;
        converged &= enc.converged;
        worst = worst.max((enc.midpoint() - homeo.lift(e)).abs());
    }
    Ok(Measured {
        measured: worst,
        passed: at_most(worst, 1e-6) && converged,
        detail: "max |h(e) - H(e)| over the 1025 level-10 endpoints of f".to_string(),
    })
}

fn identity(limits: &Limits) -> CliResult<Measured> {
    let f = f06()?;
    let tol = 1e-10;
    let h = Conjugacy::new(&f, &f, limits)?;
    let mut worst = 0.0f64;
    let mut converged = true;
    for j in 0..=1024 {
        let x = j as f64 / 1024.0;
        let e = h.eval(x, tol)?;
        converged &= e.converged;
        worst = worst.max((e.midpoint() - x).abs());
    }
    let scales: Vec<f64> = (1..=10).map(|j| 0.5f64.powi(j)).collect();
    let modulus = symmetry_modulus(&ConjugacyLift { conjugacy: h, tol }, &scales, 1024)?;
    let eps = modulus.rows.iter().map(|r| r.value).fold(0.0, f64::max);
    Ok(Measured {
        measured: worst,
        passed: at_most(worst, 1e-10) && at_most(eps, 1e-6) && converged,
        detail: format!("max epsilon_hat(t) for t>=2^-10: {eps:.3e}; all converged: {converged}"),
    })
}

fn contrapositive(limits: &Limits) -> CliResult<Measured> {
    let (f, g) = (f06()?, lin2()?);
    let mut worst = 0.0f64;
    for n in 1..=10 {
        let r = dilatation_report(&f, &g, n, 0, limits)?;
        worst = worst.max((r.max_ratio - 1.25f64.powi(n as i32)).abs());
    }
    let h = Conjugacy::new(&f, &g, limits)?;
    let ratio = qs_ratio(&ConjugacyLift { conjugacy: h, tol: 1e-10 }, 0.0, 0.4f64.powi(3))?;
    let deviation = (ratio - 1.0).max(1.0 / ratio - 1.0);
    Ok(Measured {
        measured: worst,
        passed: at_most(worst, 1e-9) && ratio <= 0.25 && deviation >= 0.75,
        detail: format!("|Phi_n - 1.25^n| for n<=10; qs ratio at x=0, t=0.4^3: {ratio:.6}; deviation {deviation:.6}"),
    })
}

/// Results of the randomized piecewise-linear property suite.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub maps: usize,
    pub tiling: f64,
    pub refinement: f64,
    pub dynamics: f64,
    pub measure: f64,
    pub ordering_ok: bool,
    pub mediant_ok: bool,
}

/// Sorted cuts of a full-branch map whose branches are all at least
/// `min_gap` long.
pub fn random_cuts<R: Rng>(rng: &mut R, degree: u32, min_gap: f64) -> Vec<f64> {
    loop {
        let mut cuts: Vec<f64> = (1..degree).map(|_| rng.random::<f64>()).collect();
        cuts.sort_by(f64::total_cmp);
        let mut prev = 0.0;
        let ok = cuts.iter().chain([1.0].iter()).all(|&c| {
            let wide = c - prev >= min_gap;
            prev = c;
            wide
        });
        if ok {
            return cuts;
        }
    }
}

fn partition_errors(map: &CircleMap, level: usize, limits: &Limits) -> CliResult<(f64, f64, f64)> {
    let d = map.degree() as usize;
    let (mut tiling, mut refinement, mut dynamics) = (0.0f64, 0.0f64, 0.0f64);
    let mut parents = enumerate_level(map, 0, limits)?;
    for n in 1..=level {
        let cyl = enumerate_level(map, n, limits)?;
        tiling = tiling
            .max(cyl[0].left.abs())
            .max((cyl[cyl.len() - 1].right - 1.0).abs())
            .max((cyl.iter().map(|c| c.length()).sum::<f64>() - 1.0).abs());
        for pair in cyl.windows(2) {
            tiling = tiling.max((pair[0].right - pair[1].left).abs());
        }
        for (j, c) in cyl.iter().enumerate() {
            let p = &parents[j / d];
            refinement = refinement.max(p.left - c.left).max(c.right - p.right);
            if j % d == 0 {
                refinement = refinement.max((c.left - p.left).abs());
            }
            if j % d == d - 1 {
                refinement = refinement.max((c.right - p.right).abs());
            }
            // f(I_w) = I_{σw}: the image of I_w is the parent-level cylinder
            // whose word drops the first symbol
            let first = j / d.pow(n as u32 - 1);
            let shifted = &parents[j - first * d.pow(n as u32 - 1)];
            let i = first as f64;
            dynamics = dynamics
                .max((map.eval_lift(c.left) - i - shifted.left).abs())
                .max((map.eval_lift(c.right) - i - shifted.right).abs());
        }
        parents = cyl;
    }
    Ok((tiling, refinement, dynamics))
}

/// Checks partition invariants, dilatation ordering and mediant
/// monotonicity, and measure preservation on `count` random maps.
pub fn property_suite(count: usize, seed: u64, limits: &Limits) -> CliResult<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = PropertyReport {
        maps: count,
        tiling: 0.0,
        refinement: 0.0,
        dynamics: 0.0,
        measure: 0.0,
        ordering_ok: true,
        mediant_ok: true,
    };
    let dyadics = dyadic_intervals(8);
    for _ in 0..count {
        let degree = rng.random_range(2..=4u32);
        let f = CircleMap::new(MapSpec::PiecewiseLinear { cuts: random_cuts(&mut rng, degree, 0.02) })?;
        let g = CircleMap::new(MapSpec::PiecewiseLinear { cuts: random_cuts(&mut rng, degree, 0.02) })?;
        let (t, r, dy) = partition_errors(&f, 8, limits)?;
        out.tiling = out.tiling.max(t);
        out.refinement = out.refinement.max(r);
        out.dynamics = out.dynamics.max(dy);
        out.measure = out.measure.max(measure_deviation(&f, &dyadics)?);
        let (mut prev_max, mut prev_min) = (1.0, 1.0);
        for n in 1..=8 {
            let rep = dilatation_report(&f, &g, n, 0, limits)?;
            out.ordering_ok &= rep.min_ratio <= 1.0 && 1.0 <= rep.max_ratio;
            out.mediant_ok &= rep.max_ratio >= prev_max && rep.min_ratio <= prev_min;
            prev_max = rep.max_ratio;
            prev_min = rep.min_ratio;
        }
    }
    Ok(out)
}

fn properties(limits: &Limits, seed: u64) -> CliResult<Measured> {
    let p = property_suite(crate::defaults::PROPERTY_MAPS, seed, limits)?;
    let worst = p.tiling.max(p.refinement).max(p.dynamics);
    Ok(Measured {
        measured: worst,
        passed: at_most(worst, 1e-10) && at_most(p.measure, 1e-12) && p.ordering_ok && p.mediant_ok,
        detail: format!(
            "{} maps, levels<=8: tiling {:.3e}, refinement {:.3e}, dynamics {:.3e}; measure deviation {:.3e}; phi<=1<=Phi: {}; mediant monotone: {}",
            p.maps, p.tiling, p.refinement, p.dynamics, p.measure, p.ordering_ok, p.mediant_ok
        ),
    })
}

fn discrimination() -> CliResult<Measured> {
    let f = sine_conjugated()?;
    let dev = measure_deviation(&f, &dyadic_intervals(8))?;
    let drift = (dev - PINNED_MEASURE_DEVIATION).abs();
    Ok(Measured {
        measured: dev,
        passed: dev > 1e-3 && at_most(drift, 1e-10),
        detail: format!("256 dyadic intervals; pinned {PINNED_MEASURE_DEVIATION:.17e}, drift {drift:.3e}"),
    })
}

/// Runs one criterion by number; failures of the underlying computation
/// become failed rows.
pub fn run_criterion(id: u32, limits: &Limits, seed: u64) -> Criterion {
    let (relation, tolerance) = match id {
        1 => ("<=", 1e-10),
        2 => ("<=", 1e-9),
        3 => ("<=", 0.0),
        4 => ("<=", 1e-6),
        5 => ("<=", 1e-6),
        6 => ("<=", 1e-10),
        7 => ("<=", 1e-9),
        8 => ("<=", 1e-10),
        9 => (">", 1e-3),
        _ => panic!("criteria are numbered 1 to 9"),
    };
    let result = match id {
        1 => falpha_uqs(limits),
        2 => falpha_geometry(limits),
        3 => tail_sums(limits),
        4 => functional_equation(limits),
        5 => round_trip(limits),
        6 => identity(limits),
        7 => contrapositive(limits),
        8 => properties(limits, seed),
        _ => discrimination(),
    };
    let m = result.unwrap_or_else(|e| Measured {
        measured: f64::NAN,
        passed: false,
        detail: format!("error: {e}"),
    });
    Criterion {
        id,
        name: NAMES[id as usize - 1],
        measured: m.measured,
        relation,
        tolerance,
        passed: m.passed,
        detail: m.detail,
    }
}

pub fn run_all(limits: &Limits, seed: u64) -> Vec<Criterion> {
    (1..=9).map(|id| run_criterion(id, limits, seed)).collect()
}

pub fn table(rows: &[Criterion]) -> Report {
    let mut report = Report::new(
        "repro all",
        &["id", "criterion", "measured", "relation", "tolerance", "passed", "detail"],
    );
    let failed = rows.iter().filter(|r| !r.passed).count();
    report
        .summary("passed", rows.len() - failed)
        .summary("failed", failed);
    for r in rows {
        report.push(vec![
            (r.id as usize).into(),
            r.name.into(),
            r.measured.into(),
            r.relation.into(),
            r.tolerance.into(),
            r.passed.into(),
            r.detail.clone().into(),
        ]);
    }
    if failed > 0 {
        report.raise(format!("{failed} criterion row(s) failed"));
    }
    report
}
