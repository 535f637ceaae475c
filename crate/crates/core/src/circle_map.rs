//! Lifts of circle endomorphisms and circle homeomorphisms.
//!
//! A [`MapSpec`] is the declarative description that gets ingested and
//! validated; a [`CircleMap`] is the validated, evaluable form. Every
//! `CircleMap` satisfies `F(0) = 0`, `F(x + 1) = F(x) + d` and is strictly
//! increasing, so the operations on it are infallible except where a root
//! solve or a caller-supplied index is involved.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::solve::{solve_increasing, SolverConfig};

/// Cuts closer than this are rejected.
pub const MIN_CUT_GAP: f64 = 1e-9;
/// Grid density of the monotonicity scan in [`validate`].
pub const VALIDATION_GRID: usize = 4096;

const ENDPOINT_TOL: f64 = 1e-12;
const SURJECTIVITY_TOL: f64 = 1e-9;

/// `amp * sin(2πx) / 2π`, with the argument reduced exactly to `[-1/2, 1/2]`.
fn sine_term(amp: f64, x: f64) -> f64 {
    amp * libm::sin(TAU * (x - libm::round(x))) / TAU
}

fn cosine_factor(amp: f64, x: f64) -> f64 {
    amp * libm::cos(TAU * (x - libm::round(x)))
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    /// Full-branch piecewise-linear map; branch `i` maps `[c_i, c_{i+1}]`
    /// linearly onto `[i, i + 1]`. The degree is `cuts.len() + 1`.
    PiecewiseLinear { cuts: Vec<f64> },
    /// `F(x) = d x`.
    Linear { degree: u32 },
    /// `F(x) = d x + ε sin(2πx) / 2π`.
    SmoothSine { degree: u32, epsilon: f64 },
    /// `F = H^{-1} ∘ G ∘ H` at lift level.
    Conjugated {
        base: Box<MapSpec>,
        homeo: HomeoSpec,
    },
}

impl MapSpec {
    /// The piecewise-linear degree-2 map with its single cut at `alpha`.
    pub fn falpha(alpha: f64) -> Self {
        MapSpec::PiecewiseLinear {
            cuts: alloc::vec![alpha],
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            MapSpec::PiecewiseLinear { cuts } => cuts.len() as u32 + 1,
            MapSpec::Linear { degree } | MapSpec::SmoothSine { degree, .. } => *degree,
            MapSpec::Conjugated { base, .. } => base.degree(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MapSpec::PiecewiseLinear { .. } => "piecewise_linear_full_branch",
            MapSpec::Linear { .. } => "linear",
            MapSpec::SmoothSine { .. } => "smooth_sine",
            MapSpec::Conjugated { .. } => "conjugated",
        }
    }
}

/// Lift of a circle homeomorphism fixing 0.
#[derive(Debug, Clone, PartialEq)]
pub enum HomeoSpec {
    Identity,
    /// `H(x) = x + c sin(2πx) / 2π`, `|c| < 1`.
    SineHomeo { c: f64 },
    /// Applied left to right: `Compose([A, B])` is `B ∘ A`.
    Compose(Vec<HomeoSpec>),
}

impl HomeoSpec {
    pub fn lift(&self, x: f64) -> f64 {
        match self {
            HomeoSpec::Identity => x,
            HomeoSpec::SineHomeo { c } => x + sine_term(*c, x),
            HomeoSpec::Compose(parts) => parts.iter().fold(x, |acc, h| h.lift(acc)),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            HomeoSpec::Identity => 1.0,
            HomeoSpec::SineHomeo { c } => 1.0 + cosine_factor(*c, x),
            HomeoSpec::Compose(parts) => {
                let mut at = x;
                let mut slope = 1.0;
                for h in parts {
                    slope *= h.derivative(at);
                    at = h.lift(at);
                }
                slope
            }
        }
    }

    /// `H^{-1}(y)`, solved on `[⌊y⌋, ⌊y⌋ + 1]` using `H(k) = k` for integers.
    ///
    /// Returns NaN only for non-finite input; valid homeomorphisms always
    /// bracket their root.
    pub fn inverse_lift(&self, y: f64, cfg: &SolverConfig) -> f64 {
        match self {
            HomeoSpec::Identity => y,
            HomeoSpec::SineHomeo { c } => {
                let k = libm::floor(y);
                let c = *c;
                solve_increasing(
                    |x| (x + sine_term(c, x) - y, Some(1.0 + cosine_factor(c, x))),
                    k,
                    k + 1.0,
                    cfg,
                )
                .unwrap_or(f64::NAN)
            }
            HomeoSpec::Compose(parts) => parts
                .iter()
                .rev()
                .fold(y, |acc, h| h.inverse_lift(acc, cfg)),
        }
    }

    /// Lower and upper bounds on `H'`.
    pub fn slope_bounds(&self) -> (f64, f64) {
        match self {
            HomeoSpec::Identity => (1.0, 1.0),
            HomeoSpec::SineHomeo { c } => (1.0 - c.abs(), 1.0 + c.abs()),
            HomeoSpec::Compose(parts) => parts.iter().fold((1.0, 1.0), |(lo, hi), h| {
                let (a, b) = h.slope_bounds();
                (lo * a, hi * b)
            }),
        }
    }

    fn check(&self, path: &str, out: &mut Vec<Violation>) {
        match self {
            HomeoSpec::Identity => {}
            HomeoSpec::SineHomeo { c } => {
                if !c.is_finite() || c.abs() >= 1.0 {
                    out.push(Violation::new(
                        ViolationKind::HomeoAmplitudeOutOfRange,
                        None,
                        format!("{path}: sine_homeo amplitude c = {c} must satisfy |c| < 1"),
                    ));
                }
            }
            HomeoSpec::Compose(parts) => {
                for (i, h) in parts.iter().enumerate() {
                    h.check(&format!("{path}.parts[{i}]"), out);
                }
            }
        }
    }

    /// Structural validation of the homeomorphism parameters.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        self.check("homeo", &mut violations);
        ValidationReport { violations }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    DegreeTooSmall,
    NonFinite,
    CutOutOfRange,
    CutsNotIncreasing,
    CutsTooClose,
    AmplitudeOutOfRange,
    HomeoAmplitudeOutOfRange,
    NotFixingZero,
    WrongDegreeAtOne,
    NonMonotone,
    BranchNotSurjective,
    SolverFailure,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::DegreeTooSmall => "degree_too_small",
            ViolationKind::NonFinite => "non_finite",
            ViolationKind::CutOutOfRange => "cut_out_of_range",
            ViolationKind::CutsNotIncreasing => "cuts_not_increasing",
            ViolationKind::CutsTooClose => "cuts_too_close",
            ViolationKind::AmplitudeOutOfRange => "amplitude_out_of_range",
            ViolationKind::HomeoAmplitudeOutOfRange => "homeo_amplitude_out_of_range",
            ViolationKind::NotFixingZero => "not_fixing_zero",
            ViolationKind::WrongDegreeAtOne => "wrong_degree_at_one",
            ViolationKind::NonMonotone => "non_monotone",
            ViolationKind::BranchNotSurjective => "branch_not_surjective",
            ViolationKind::SolverFailure => "solver_failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Point of the lift where the violation was observed, if any.
    pub location: Option<f64>,
    pub detail: String,
}

impl Violation {
    fn new(kind: ViolationKind, location: Option<f64>, detail: String) -> Self {
        Violation {
            kind,
            location,
            detail,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.kind.name(), v.detail)?;
        }
        Ok(())
    }
}

fn check_structure(spec: &MapSpec, path: &str, out: &mut Vec<Violation>) {
    match spec {
        MapSpec::PiecewiseLinear { cuts } => {
            if cuts.is_empty() {
                out.push(Violation::new(
                    ViolationKind::DegreeTooSmall,
                    None,
                    format!("{path}: piecewise-linear map needs at least one cut (degree >= 2)"),
                ));
                return;
            }
            if let Some(c) = cuts.iter().find(|c| !c.is_finite()) {
                out.push(Violation::new(
                    ViolationKind::NonFinite,
                    None,
                    format!("{path}: cut {c} is not finite"),
                ));
                return;
            }
            for &c in cuts {
                if !(c > 0.0 && c < 1.0) {
                    out.push(Violation::new(
                        ViolationKind::CutOutOfRange,
                        Some(c),
                        format!("{path}: cut {c} outside (0, 1)"),
                    ));
                }
            }
            for pair in cuts.windows(2) {
                if pair[1] <= pair[0] {
                    out.push(Violation::new(
                        ViolationKind::CutsNotIncreasing,
                        Some(pair[1]),
                        format!("{path}: cuts not increasing ({} then {})", pair[0], pair[1]),
                    ));
                }
            }
            let mut bounds = Vec::with_capacity(cuts.len() + 2);
            bounds.push(0.0);
            bounds.extend_from_slice(cuts);
            bounds.push(1.0);
            for pair in bounds.windows(2) {
                let gap = pair[1] - pair[0];
                if gap > 0.0 && gap < MIN_CUT_GAP {
                    out.push(Violation::new(
                        ViolationKind::CutsTooClose,
                        Some(pair[0]),
                        format!("{path}: branch [{}, {}] shorter than {MIN_CUT_GAP:e}", pair[0], pair[1]),
                    ));
                }
            }
        }
        MapSpec::Linear { degree } => {
            if *degree < 2 {
                out.push(Violation::new(
                    ViolationKind::DegreeTooSmall,
                    None,
                    format!("{path}: degree {degree} < 2"),
                ));
            }
        }
        MapSpec::SmoothSine { degree, epsilon } => {
            if *degree < 2 {
                out.push(Violation::new(
                    ViolationKind::DegreeTooSmall,
                    None,
                    format!("{path}: degree {degree} < 2"),
                ));
            }
            if !epsilon.is_finite() {
                out.push(Violation::new(
                    ViolationKind::NonFinite,
                    None,
                    format!("{path}: epsilon {epsilon} is not finite"),
                ));
            } else if epsilon.abs() >= *degree as f64 {
                out.push(Violation::new(
                    ViolationKind::AmplitudeOutOfRange,
                    None,
                    format!("{path}: |epsilon| = {} must be < degree {degree}", epsilon.abs()),
                ));
            }
        }
        MapSpec::Conjugated { base, homeo } => {
            check_structure(base, &format!("{path}.base"), out);
            homeo.check(&format!("{path}.homeo"), out);
        }
    }
}

/// Structural failures after which the lift cannot be sampled meaningfully.
fn blocks_sampling(kind: ViolationKind) -> bool {
    !matches!(kind, ViolationKind::AmplitudeOutOfRange)
}

fn sample_checks(map: &CircleMap, out: &mut Vec<Violation>) {
    let d = map.degree as f64;
    let f0 = map.eval_lift(0.0);
    if !(f0.abs() <= ENDPOINT_TOL) {
        out.push(Violation::new(
            ViolationKind::NotFixingZero,
            Some(0.0),
            format!("F(0) = {f0}, expected 0"),
        ));
    }
    let f1 = map.eval_lift(1.0);
    if !((f1 - d).abs() <= ENDPOINT_TOL * d) {
        out.push(Violation::new(
            ViolationKind::WrongDegreeAtOne,
            Some(1.0),
            format!("F(1) = {f1}, expected {d}"),
        ));
    }

    let mut xs: Vec<f64> = (0..=VALIDATION_GRID)
        .map(|j| j as f64 / VALIDATION_GRID as f64)
        .collect();
    xs.extend_from_slice(&map.cuts);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let values: Vec<f64> = xs.iter().map(|&x| map.eval_lift(x)).collect();
    let mut first = None;
    let mut count = 0usize;
    for j in 1..xs.len() {
        if !(values[j] > values[j - 1]) {
            count += 1;
            first.get_or_insert(j);
        }
    }
    if let Some(j) = first {
        out.push(Violation::new(
            ViolationKind::NonMonotone,
            Some(xs[j - 1]),
            format!(
                "lift not increasing: F({}) = {} >= F({}) = {} ({count} decreasing steps on the grid)",
                xs[j - 1],
                values[j - 1],
                xs[j],
                values[j]
            ),
        ));
    }

    for (i, &c) in map.cuts.iter().enumerate() {
        let v = map.eval_lift(c);
        if !((v - i as f64).abs() <= SURJECTIVITY_TOL) {
            out.push(Violation::new(
                ViolationKind::BranchNotSurjective,
                Some(c),
                format!("F({c}) = {v}, expected {i}"),
            ));
        }
    }
}

fn validate_and_build(spec: &MapSpec, solver: &SolverConfig) -> (ValidationReport, Option<CircleMap>) {
    let mut violations = Vec::new();
    check_structure(spec, "map", &mut violations);
    if violations.iter().any(|v| blocks_sampling(v.kind)) {
        return (ValidationReport { violations }, None);
    }
    match CircleMap::build_unchecked(spec, *solver) {
        Ok(map) => {
            sample_checks(&map, &mut violations);
            let report = ValidationReport { violations };
            let map = report.is_ok().then_some(map);
            (report, map)
        }
        Err(e) => {
            violations.push(Violation::new(
                ViolationKind::SolverFailure,
                None,
                format!("{e}"),
            ));
            (ValidationReport { violations }, None)
        }
    }
}

/// Checks a specification: parameter ranges, `F(0) = 0`, `F(1) = d`, strict
/// monotonicity on a dense grid plus all breakpoints, and branch surjectivity.
pub fn validate(spec: &MapSpec) -> ValidationReport {
    validate_and_build(spec, &SolverConfig::default()).0
}

/// Builds the spec of `H^{-1} ∘ G ∘ H`; both inputs must validate.
pub fn make_conjugated(base: &MapSpec, homeo: &HomeoSpec) -> Result<MapSpec> {
    let report = validate(base);
    if !report.is_ok() {
        return Err(Error::InvalidSpec(format!("base: {report}")));
    }
    let report = homeo.validate();
    if !report.is_ok() {
        return Err(Error::InvalidSpec(format!("homeo: {report}")));
    }
    Ok(MapSpec::Conjugated {
        base: Box::new(base.clone()),
        homeo: homeo.clone(),
    })
}

#[derive(Debug, Clone)]
enum Kernel {
    PiecewiseLinear,
    Linear,
    Sine { epsilon: f64 },
    Conjugated { base: Box<CircleMap>, homeo: HomeoSpec },
}

/// A validated circle endomorphism of degree `d >= 2` fixing 0.
#[derive(Debug, Clone)]
pub struct CircleMap {
    spec: MapSpec,
    degree: u32,
    kernel: Kernel,
    /// `0 = c_0 < c_1 < ... < c_d = 1`, the level-1 partition points.
    cuts: Vec<f64>,
    solver: SolverConfig,
}

impl CircleMap {
    pub fn new(spec: MapSpec) -> Result<Self> {
        Self::with_solver(spec, SolverConfig::default())
    }

    pub fn with_solver(spec: MapSpec, solver: SolverConfig) -> Result<Self> {
        let (report, map) = validate_and_build(&spec, &solver);
        map.ok_or_else(|| Error::InvalidSpec(format!("{report}")))
    }

    fn build_unchecked(spec: &MapSpec, solver: SolverConfig) -> Result<Self> {
        let degree = spec.degree();
        let d = degree as f64;
        let (kernel, cuts) = match spec {
            MapSpec::PiecewiseLinear { cuts } => {
                let mut bounds = Vec::with_capacity(cuts.len() + 2);
                bounds.push(0.0);
                bounds.extend_from_slice(cuts);
                bounds.push(1.0);
                (Kernel::PiecewiseLinear, bounds)
            }
            MapSpec::Linear { .. } => (
                Kernel::Linear,
                (0..=degree).map(|i| i as f64 / d).collect(),
            ),
            MapSpec::SmoothSine { epsilon, .. } => {
                let eps = *epsilon;
                let mut cuts = Vec::with_capacity(degree as usize + 1);
                cuts.push(0.0);
                for i in 1..degree {
                    let target = i as f64;
                    let c = solve_increasing(
                        |x| (d * x + sine_term(eps, x) - target, Some(d + cosine_factor(eps, x))),
                        0.0,
                        1.0,
                        &solver,
                    )?;
                    cuts.push(c);
                }
                cuts.push(1.0);
                (Kernel::Sine { epsilon: eps }, cuts)
            }
            MapSpec::Conjugated { base, homeo } => {
                let base = CircleMap::build_unchecked(base, solver)?;
                let mut cuts = Vec::with_capacity(degree as usize + 1);
                cuts.push(0.0);
                for &c in &base.cuts[1..degree as usize] {
                    cuts.push(homeo.inverse_lift(c, &solver));
                }
                cuts.push(1.0);
                (
                    Kernel::Conjugated {
                        base: Box::new(base),
                        homeo: homeo.clone(),
                    },
                    cuts,
                )
            }
        };
        Ok(CircleMap {
            spec: spec.clone(),
            degree,
            kernel,
            cuts,
            solver,
        })
    }

    pub fn spec(&self) -> &MapSpec {
        &self.spec
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Level-1 partition points `c_0 = 0, ..., c_d = 1`.
    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn solver(&self) -> &SolverConfig {
        &self.solver
    }

    /// Branch lengths `c_{i+1} - c_i` when the map is piecewise linear with
    /// full branches (this includes the linear kind).
    pub fn branch_lengths(&self) -> Option<Vec<f64>> {
        match self.kernel {
            Kernel::PiecewiseLinear | Kernel::Linear => {
                Some(self.cuts.windows(2).map(|w| w[1] - w[0]).collect())
            }
            _ => None,
        }
    }

    /// Index `i` with `c_i <= u < c_{i+1}` for `u` in `[0, 1)`.
    fn branch_of(&self, u: f64) -> usize {
        let d = self.degree as usize;
        let i = self.cuts[1..d].partition_point(|&c| c <= u);
        i.min(d - 1)
    }

    pub fn eval_lift(&self, x: f64) -> f64 {
        let d = self.degree as f64;
        match &self.kernel {
            Kernel::Linear => d * x,
            Kernel::Sine { epsilon } => d * x + sine_term(*epsilon, x),
            Kernel::PiecewiseLinear => {
                let k = libm::floor(x);
                let i = self.branch_of(x - k);
                let (a, b) = (self.cuts[i], self.cuts[i + 1]);
                let len = b - a;
                let base = k * d + i as f64;
                let left = x - (k + a);
                let right = (k + b) - x;
                // anchor at the nearer breakpoint to keep relative accuracy
                if left <= right {
                    base + left / len
                } else {
                    base + 1.0 - right / len
                }
            }
            Kernel::Conjugated { base, homeo } => {
                homeo.inverse_lift(base.eval_lift(homeo.lift(x)), &self.solver)
            }
        }
    }

    /// Point on the circle `[0, 1)` of `f(x)`.
    pub fn eval_circle(&self, x: f64) -> f64 {
        let y = self.eval_lift(x);
        let r = y - libm::floor(y);
        if r >= 1.0 {
            0.0
        } else {
            r
        }
    }

    /// `F'(x)` for kinds with a closed-form derivative.
    pub fn derivative(&self, x: f64) -> Option<f64> {
        let d = self.degree as f64;
        match &self.kernel {
            Kernel::Linear => Some(d),
            Kernel::Sine { epsilon } => Some(d + cosine_factor(*epsilon, x)),
            Kernel::PiecewiseLinear => {
                let u = x - libm::floor(x);
                let i = self.branch_of(u);
                Some(1.0 / (self.cuts[i + 1] - self.cuts[i]))
            }
            Kernel::Conjugated { .. } => None,
        }
    }

    /// Solves `F(x) = target` on `[lo, hi]` for the sine kernel. A root that
    /// lies within solver error of a bracket end is clamped to that end.
    fn solve_sine(&self, epsilon: f64, target: f64, lo: f64, hi: f64) -> Result<f64> {
        let d = self.degree as f64;
        let g = |x: f64| (d * x + sine_term(epsilon, x) - target, Some(d + cosine_factor(epsilon, x)));
        if g(lo).0 >= 0.0 {
            return Ok(lo);
        }
        if g(hi).0 <= 0.0 {
            return Ok(hi);
        }
        solve_increasing(g, lo, hi, &self.solver)
    }

    /// The unique `x` in `[c_branch, c_{branch+1}]` with `F(x) = y + branch`.
    ///
    /// `y = 0` and `y = 1` return the cut points themselves, so cylinders
    /// built from these inverses share endpoints bit for bit.
    pub fn inverse_branch(&self, branch: u32, y: f64) -> Result<f64> {
        if branch >= self.degree {
            return Err(Error::BranchOutOfRange {
                branch,
                degree: self.degree,
            });
        }
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::OutOfDomain {
                value: y,
                domain: "[0, 1]",
            });
        }
        let i = branch as usize;
        let (a, b) = (self.cuts[i], self.cuts[i + 1]);
        if y == 0.0 {
            return Ok(a);
        }
        if y == 1.0 {
            return Ok(b);
        }
        match &self.kernel {
            Kernel::Linear => Ok((branch as f64 + y) / self.degree as f64),
            Kernel::PiecewiseLinear => {
                let len = b - a;
                if y <= 0.5 {
                    Ok(a + y * len)
                } else {
                    Ok(b - (1.0 - y) * len)
                }
            }
            Kernel::Sine { epsilon } => self.solve_sine(*epsilon, branch as f64 + y, a, b),
            Kernel::Conjugated { base, homeo } => {
                let z = homeo.lift(y).clamp(0.0, 1.0);
                let w = base.inverse_branch(branch, z)?;
                Ok(homeo.inverse_lift(w, &self.solver).clamp(a, b))
            }
        }
    }

    /// One step of `F^{-1}` on the real line: the branch is read off the
    /// integer part of `y`.
    pub fn global_inverse_step(&self, y: f64) -> Result<f64> {
        if !y.is_finite() {
            return Err(Error::OutOfDomain {
                value: y,
                domain: "finite reals",
            });
        }
        let d = self.degree as i64;
        let k = libm::floor(y);
        let ki = k as i64;
        let q = ki.div_euclid(d) as f64;
        let r = ki.rem_euclid(d) as usize;
        let (a, b) = (self.cuts[r], self.cuts[r + 1]);
        match &self.kernel {
            Kernel::Linear => Ok(y / d as f64),
            Kernel::PiecewiseLinear => {
                let len = b - a;
                let left = y - k;
                let right = (k + 1.0) - y;
                if left <= right {
                    Ok((q + a) + left * len)
                } else {
                    Ok((q + b) - right * len)
                }
            }
            Kernel::Sine { epsilon } => self.solve_sine(*epsilon, y, q + a, q + b),
            Kernel::Conjugated { base, homeo } => {
                let w = base.global_inverse_step(homeo.lift(y))?;
                Ok(homeo.inverse_lift(w, &self.solver))
            }
        }
    }

    /// `F^{-n}(y)` by `n` single-step inversions.
    pub fn global_inverse_lift(&self, y: f64, n: usize, limits: &Limits) -> Result<f64> {
        limits.check_depth(n)?;
        let mut x = y;
        for _ in 0..n {
            x = self.global_inverse_step(x)?;
        }
        Ok(x)
    }

    /// Bounds `(min F', max F')`; exact for closed-form kinds, a product of
    /// factor bounds for conjugated maps.
    pub fn slope_bounds(&self) -> (f64, f64) {
        let d = self.degree as f64;
        match &self.kernel {
            Kernel::Linear => (d, d),
            Kernel::PiecewiseLinear => {
                let lens = self.cuts.windows(2).map(|w| w[1] - w[0]);
                let (lo, hi) = lens.fold((f64::INFINITY, 0.0f64), |(lo, hi), l| (lo.min(l), hi.max(l)));
                (1.0 / hi, 1.0 / lo)
            }
            Kernel::Sine { epsilon } => (d - epsilon.abs(), d + epsilon.abs()),
            Kernel::Conjugated { base, homeo } => {
                let (glo, ghi) = base.slope_bounds();
                let (hlo, hhi) = homeo.slope_bounds();
                (glo * hlo / hhi, ghi * hhi / hlo)
            }
        }
    }

    /// Absolute error of one inverse-branch evaluation.
    pub fn step_error(&self) -> f64 {
        match &self.kernel {
            Kernel::Linear | Kernel::PiecewiseLinear => 2.0 * f64::EPSILON,
            Kernel::Sine { .. } => self.solver.abs_tol,
            Kernel::Conjugated { base, homeo } => {
                let (hlo, hhi) = homeo.slope_bounds();
                base.step_error() * hhi / hlo + self.solver.abs_tol
            }
        }
    }

    /// Largest factor by which one inverse step can stretch an error.
    pub fn inverse_expansion(&self) -> f64 {
        let (lo, _) = self.slope_bounds();
        (1.0 / lo).max(1.0)
    }

    /// Bound on the accumulated error of `F^{-n}` and of `F^n ∘ F^{-n}`
    /// round trips: `n · step_error · (max F')^n`.
    pub fn round_trip_bound(&self, n: usize) -> f64 {
        let (_, hi) = self.slope_bounds();
        n as f64 * self.step_error().max(f64::EPSILON) * libm::pow(hi, n as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn falpha06() -> CircleMap {
        CircleMap::new(MapSpec::falpha(0.6)).unwrap()
    }

    #[test]
    fn eval_examples() {
        let lin = CircleMap::new(MapSpec::Linear { degree: 2 }).unwrap();
        assert!((lin.eval_lift(0.3) - 0.6).abs() < 1e-15);
        assert!((falpha06().eval_lift(0.8) - 1.5).abs() < 1e-15);
        let sine = CircleMap::new(MapSpec::SmoothSine {
            degree: 2,
            epsilon: 0.5,
        })
        .unwrap();
        assert_eq!(sine.eval_lift(0.0), 0.0);
    }

    #[test]
    fn inverse_branch_examples() {
        let lin = CircleMap::new(MapSpec::Linear { degree: 2 }).unwrap();
        assert!((lin.inverse_branch(1, 0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!((falpha06().inverse_branch(0, 0.6).unwrap() - 0.36).abs() < 1e-15);
        let sine = CircleMap::new(MapSpec::SmoothSine {
            degree: 2,
            epsilon: 0.5,
        })
        .unwrap();
        assert_eq!(sine.inverse_branch(0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn inverse_branch_matches_bisection_oracle() {
        // independent route: plain bisection on the lift over the branch
        let f = falpha06();
        let mut lo = 0.0f64;
        let mut hi = 0.6f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f.eval_lift(mid) < 0.6 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((f.inverse_branch(0, 0.6).unwrap() - lo).abs() < 1e-15);
        assert!((lo - 0.36).abs() < 1e-15);
    }

    #[test]
    fn inverse_branch_errors() {
        let f = falpha06();
        assert!(matches!(
            f.inverse_branch(2, 0.5),
            Err(Error::BranchOutOfRange { branch: 2, degree: 2 })
        ));
        assert!(matches!(f.inverse_branch(0, 1.5), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn global_inverse_examples() {
        let limits = Limits::default();
        let lin = CircleMap::new(MapSpec::Linear { degree: 2 }).unwrap();
        assert!((lin.global_inverse_lift(0.8, 3, &limits).unwrap() - 0.1).abs() < 1e-15);
        let f = falpha06();
        assert!((f.global_inverse_lift(0.2, 2, &limits).unwrap() - 0.072).abs() < 1e-15);
        assert!((f.global_inverse_lift(-0.2, 1, &limits).unwrap() + 0.08).abs() < 1e-15);
        assert!(matches!(
            f.global_inverse_lift(0.2, 61, &limits),
            Err(Error::DepthCapExceeded { requested: 61, cap: 60 })
        ));
    }

    #[test]
    fn global_inverse_of_negative_point_matches_bisection_oracle() {
        let f = falpha06();
        let (mut lo, mut hi) = (-1.0f64, 0.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f.eval_lift(mid) < -0.2 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo + 0.08).abs() < 1e-15);
        assert!((f.global_inverse_step(-0.2).unwrap() - lo).abs() < 1e-15);
    }

    #[test]
    fn validation_examples() {
        assert!(validate(&MapSpec::falpha(0.6)).is_ok());
        let bad = validate(&MapSpec::PiecewiseLinear {
            cuts: vec![0.7, 0.3],
        });
        assert!(bad.has(ViolationKind::CutsNotIncreasing));
        let wild = validate(&MapSpec::SmoothSine {
            degree: 2,
            epsilon: 2.5,
        });
        assert!(wild.has(ViolationKind::NonMonotone));
        assert!(wild.has(ViolationKind::AmplitudeOutOfRange));
    }

    #[test]
    fn non_monotone_location_matches_derivative_oracle() {
        // F' = 2 + 2.5 cos(2πx) < 0 exactly when |x - 1/2| < acos(0.8) / 2π
        let half_width = libm::acos(0.8) / TAU;
        let grid_min = (0..=10_000)
            .map(|j| {
                let x = j as f64 / 10_000.0;
                2.0 + 2.5 * libm::cos(TAU * x)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(grid_min < 0.0);
        let report = validate(&MapSpec::SmoothSine {
            degree: 2,
            epsilon: 2.5,
        });
        let v = report
            .violations
            .iter()
            .find(|v| v.kind == ViolationKind::NonMonotone)
            .unwrap();
        let at = v.location.unwrap();
        assert!((at - (0.5 - half_width)).abs() < 2.0 / VALIDATION_GRID as f64);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(validate(&MapSpec::Linear { degree: 1 }).has(ViolationKind::DegreeTooSmall));
        assert!(validate(&MapSpec::PiecewiseLinear { cuts: vec![] }).has(ViolationKind::DegreeTooSmall));
        assert!(validate(&MapSpec::PiecewiseLinear {
            cuts: vec![0.5, 0.5 + 1e-10]
        })
        .has(ViolationKind::CutsTooClose));
        assert!(validate(&MapSpec::PiecewiseLinear { cuts: vec![1.2] }).has(ViolationKind::CutOutOfRange));
        assert!(CircleMap::new(MapSpec::Linear { degree: 0 }).is_err());
    }

    #[test]
    fn conjugated_examples() {
        let lin = MapSpec::Linear { degree: 2 };
        let same = CircleMap::new(make_conjugated(&lin, &HomeoSpec::Identity).unwrap()).unwrap();
        let plain = CircleMap::new(lin.clone()).unwrap();
        for j in 0..1000 {
            let x = j as f64 / 1000.0;
            assert_eq!(same.eval_lift(x), plain.eval_lift(x));
        }
        let conj = CircleMap::new(make_conjugated(&lin, &HomeoSpec::SineHomeo { c: 0.5 }).unwrap()).unwrap();
        assert_eq!(conj.eval_lift(0.0), 0.0);
        assert!((conj.eval_lift(0.5) - 1.0).abs() < 1e-13);
        assert!(make_conjugated(&lin, &HomeoSpec::SineHomeo { c: 1.5 }).is_err());
        assert!(make_conjugated(&MapSpec::Linear { degree: 1 }, &HomeoSpec::Identity).is_err());
    }

    #[test]
    fn conjugated_midpoint_matches_numeric_composition() {
        // H(0.5) = 0.5, G(0.5) = 1, H^{-1}(1) = 1
        let h = HomeoSpec::SineHomeo { c: 0.5 };
        assert!((h.lift(0.5) - 0.5).abs() < 1e-15);
        let y = 2.0 * h.lift(0.5);
        assert!((h.inverse_lift(y, &SolverConfig::default()) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn homeo_inverse_round_trip() {
        let h = HomeoSpec::Compose(vec![HomeoSpec::SineHomeo { c: 0.5 }, HomeoSpec::SineHomeo { c: -0.3 }]);
        let cfg = SolverConfig::default();
        for j in -20..20 {
            let x = j as f64 * 0.137;
            assert!((h.inverse_lift(h.lift(x), &cfg) - x).abs() < 1e-12);
            assert!((h.lift(x + 1.0) - h.lift(x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sine_cut_solves_lift() {
        let sine = CircleMap::new(MapSpec::SmoothSine {
            degree: 3,
            epsilon: 1.2,
        })
        .unwrap();
        for (i, &c) in sine.cuts().iter().enumerate() {
            assert!((sine.eval_lift(c) - i as f64).abs() < 1e-12);
        }
    }
}
