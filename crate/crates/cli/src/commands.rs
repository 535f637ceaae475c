use std::cell::Cell as StdCell;
use std::path::Path;

use symrig_core::analysis::{
    dilatation_report, dyadic_intervals, measure_deviations, qs_ratio, symmetry_modulus, tail_sum,
    uqs_ratio_endo, CircleHomeo, TailMethod,
};
use symrig_core::{
    endpoint_radius, endpoint_table, enumerate_level, interval_of_word, validate, verify_markov,
    CircleMap, Conjugacy, HomeoSpec, Limits, MapSpec, Word,
};

use crate::cli::{Analyze, Cli, Command, GlobalArgs, HomeoSource, Repro};
use crate::defaults;
use crate::error::{CliError, CliResult};
use crate::repro;
use crate::report::Report;
use crate::spec_file::{homeo_json, map_json, read_homeo, read_map};

/// A finished report and the exit status it calls for.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub status: u8,
}

impl Outcome {
    fn flagged_with(report: Report, code: u8) -> Self {
        let status = if report.flag.is_some() { code } else { 0 };
        Outcome { report, status }
    }
}

/// Core defaults, then the environment work cap, then explicit flags.
pub fn resolve_limits(global: &GlobalArgs, env_work_cap: Option<&str>) -> CliResult<Limits> {
    let mut limits = Limits::default();
    if let Some(raw) = env_work_cap {
        limits.work_cap = raw.trim().parse().map_err(|_| {
            CliError::Validation(format!("{}={raw:?} is not a non-negative integer", defaults::WORK_CAP_ENV))
        })?;
    }
    if let Some(cap) = global.work_cap {
        limits.work_cap = cap;
    }
    if let Some(cap) = global.depth_cap {
        limits.depth_cap = cap;
        limits.conjugacy_depth_cap = cap;
    }
    if let Some(cap) = global.cell_cap {
        limits.cell_cap = cap;
    }
    Ok(limits)
}

fn echo_limits(report: &mut Report, limits: &Limits) {
    report
        .config("depth_cap", limits.depth_cap)
        .config("conjugacy_depth_cap", limits.conjugacy_depth_cap)
        .config("cell_cap", limits.cell_cap)
        .config("work_cap", limits.work_cap);
}

fn load_map(path: &Path) -> CliResult<CircleMap> {
    let spec = read_map(path)?;
    CircleMap::new(spec).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn echo_map(report: &mut Report, key: &str, path: &Path, map: &CircleMap) {
    report
        .config(key, path.display().to_string())
        .config(&format!("{key}_spec"), map_json(map.spec()));
}

fn positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{name} must be positive, got {v}")))
    }
}

pub fn run(cli: &Cli, limits: &Limits) -> CliResult<Outcome> {
    match &cli.command {
        Command::Validate { map } => run_validate(map),
        Command::Partition { map, level, verify, tol } => run_partition(map, *level, *verify, *tol, limits),
        Command::Conjugacy { from, to, grid, tol, level } => run_conjugacy(from, to, *grid, *tol, *level, limits),
        Command::Analyze(a) => run_analyze(a, limits),
        Command::Repro(r) => run_repro(r, limits),
    }
}

fn run_validate(path: &Path) -> CliResult<Outcome> {
    let spec = read_map(path)?;
    let found = validate(&spec);
    let mut report = Report::new("validate", &["check", "location", "detail"]);
    report
        .config("map", path.display().to_string())
        .config("map_spec", map_json(&spec))
        .summary("degree", spec.degree() as usize)
        .summary("valid", found.is_ok());
    for v in &found.violations {
        report.push(vec![v.kind.name().into(), v.location.into(), v.detail.clone().into()]);
    }
    if !found.is_ok() {
        report.raise(format!("{} violation(s)", found.violations.len()));
    }
    Ok(Outcome::flagged_with(report, 1))
}

fn run_partition(path: &Path, level: usize, verify: bool, tol: f64, limits: &Limits) -> CliResult<Outcome> {
    let map = load_map(path)?;
    let mut report = Report::new("partition", &["word", "left", "right", "length", "radius"]);
    echo_map(&mut report, "map", path, &map);
    report.config("level", level);
    echo_limits(&mut report, limits);
    report.note("radius bounds the error of each endpoint");
    for c in enumerate_level(&map, level, limits)? {
        report.push(vec![
            c.word.to_string().into(),
            c.left.into(),
            c.right.into(),
            c.length().into(),
            c.radius.into(),
        ]);
    }
    if verify {
        positive("tol", tol)?;
        report.config("tol", tol);
        let m = verify_markov(&map, level, tol, limits)?;
        report
            .summary("tiling_gap", m.tiling_gap)
            .summary("boundary_gap", m.boundary_gap)
            .summary("min_length", m.min_length)
            .summary("endpoint_residual", m.endpoint_residual)
            .summary("worst_word", m.worst_word.to_string())
            .summary("markov_passed", m.passed);
        if !m.passed {
            report.raise("Markov checks exceed the tolerance");
        }
    }
    Ok(Outcome::flagged_with(report, 2))
}

fn run_conjugacy(
    from: &Path,
    to: &Path,
    grid: usize,
    tol: f64,
    level: Option<usize>,
    limits: &Limits,
) -> CliResult<Outcome> {
    let f = load_map(from)?;
    let g = load_map(to)?;
    if let Some(n) = level {
        let table = endpoint_table(&f, &g, n, limits)?;
        let mut report = Report::new("conjugacy", &["word", "f_endpoint", "g_endpoint", "f_radius", "g_radius"]);
        echo_map(&mut report, "from", from, &f);
        echo_map(&mut report, "to", to, &g);
        report.config("level", n);
        echo_limits(&mut report, limits);
        report.note("row j pairs the left endpoints of the level cylinders with word j; the last row is the endpoint 1");
        let (rf, rg) = (endpoint_radius(&f, n), endpoint_radius(&g, n));
        for (j, &(a, b)) in table.pairs.iter().enumerate() {
            let word = table.word_of_row(j).map(|w| w.to_string()).unwrap_or_default();
            report.push(vec![word.into(), a.into(), b.into(), rf.into(), rg.into()]);
        }
        return Ok(Outcome::flagged_with(report, 2));
    }

    positive("tol", tol)?;
    if grid == 0 {
        return Err(CliError::Validation("grid must be positive".into()));
    }
    let h = Conjugacy::new(&f, &g, limits)?;
    let mut report = Report::new("conjugacy", &["x", "h_lo", "h_hi", "depth", "width", "converged"]);
    echo_map(&mut report, "from", from, &f);
    echo_map(&mut report, "to", to, &g);
    report.config("grid", grid).config("tol", tol);
    echo_limits(&mut report, limits);
    report.note("h satisfies h o f = g o h, h(0) = 0; [h_lo, h_hi] encloses h(x)");
    let mut unconverged = 0usize;
    for j in 0..grid {
        let x = j as f64 / grid as f64;
        let e = h.eval(x, tol)?;
        unconverged += usize::from(!e.converged);
        report.push(vec![
            x.into(),
            e.lo.into(),
            e.hi.into(),
            e.depth.into(),
            e.width().into(),
            e.converged.into(),
        ]);
    }
    report.summary("unconverged", unconverged);
    if unconverged > 0 {
        report.raise(format!("{unconverged} enclosure(s) wider than tol at the depth cap"));
    }
    Ok(Outcome::flagged_with(report, 2))
}

/// A homeomorphism lift that remembers the widest conjugacy enclosure it
/// has produced since the last reset.
struct Tracked<'a> {
    spec: Option<HomeoSpec>,
    conjugacy: Option<Conjugacy<'a>>,
    tol: f64,
    widest: StdCell<f64>,
}

impl Tracked<'_> {
    /// Error bound on a single value.
    fn value_error(&self) -> f64 {
        if self.conjugacy.is_some() {
            0.5 * self.widest.get()
        } else {
            4.0 * f64::EPSILON
        }
    }

    fn reset(&self) {
        self.widest.set(0.0);
    }

    fn unconverged(&self) -> bool {
        self.conjugacy.is_some() && self.widest.get() > self.tol
    }
}

impl CircleHomeo for Tracked<'_> {
    fn value(&self, x: f64) -> symrig_core::Result<f64> {
        if let Some(spec) = &self.spec {
            return Ok(spec.lift(x));
        }
        let h = self.conjugacy.as_ref().expect("one source is set");
        let k = x.floor();
        let e = h.eval((x - k).min(1.0), self.tol)?;
        self.widest.set(self.widest.get().max(e.width()));
        Ok(k + e.midpoint())
    }
}

struct Source {
    spec: Option<HomeoSpec>,
    maps: Option<(CircleMap, CircleMap)>,
}

impl Source {
    fn load(src: &HomeoSource, report: &mut Report) -> CliResult<Source> {
        positive("tol", src.tol)?;
        if let Some(path) = &src.homeo {
            let spec = read_homeo(path)?;
            let checked = spec.validate();
            if !checked.is_ok() {
                return Err(CliError::Validation(format!("{}: {checked}", path.display())));
            }
            report
                .config("homeo", path.display().to_string())
                .config("homeo_spec", homeo_json(&spec));
            return Ok(Source { spec: Some(spec), maps: None });
        }
        let (from, to) = match (&src.from, &src.to) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(CliError::Validation("give --homeo or both --from and --to".into())),
        };
        let f = load_map(from)?;
        let g = load_map(to)?;
        echo_map(report, "from", from, &f);
        echo_map(report, "to", to, &g);
        report.config("tol", src.tol);
        Ok(Source { spec: None, maps: Some((f, g)) })
    }

    fn tracked(&self, tol: f64, limits: &Limits) -> CliResult<Tracked<'_>> {
        let conjugacy = match &self.maps {
            Some((f, g)) => Some(Conjugacy::new(f, g, limits)?),
            None => None,
        };
        Ok(Tracked {
            spec: self.spec.clone(),
            conjugacy,
            tol,
            widest: StdCell::new(0.0),
        })
    }
}

fn run_analyze(a: &Analyze, limits: &Limits) -> CliResult<Outcome> {
    match a {
        Analyze::Qs { source, x, t } => analyze_qs(source, *x, t, limits),
        Analyze::Symmetry { source, grid, scales } => analyze_symmetry(source, *grid, scales, limits),
        Analyze::Uqs { map, x, t, n } => analyze_uqs(map, *x, *t, *n, limits),
        Analyze::Measure { map, level } => analyze_measure(map, *level),
        Analyze::Phi { from, to, level, cells } => analyze_phi(from, to, *level, *cells, limits),
        Analyze::Tailsum { map, word, k_max } => analyze_tailsum(map, word, *k_max, limits),
    }
}

fn analyze_qs(src: &HomeoSource, x: f64, scales: &[f64], limits: &Limits) -> CliResult<Outcome> {
    let mut report = Report::new("analyze qs", &["x", "t", "ratio", "ratio_error_bound"]);
    let source = Source::load(src, &mut report)?;
    report.config("x", x);
    echo_limits(&mut report, limits);
    let h = source.tracked(src.tol, limits)?;
    for &t in scales {
        h.reset();
        let r = qs_ratio(&h, x, t)?;
        let left = h.value(x)? - h.value(x - t)?;
        let e = h.value_error();
        report.push(vec![x.into(), t.into(), r.into(), (2.0 * e * (1.0 + r) / left).into()]);
        if h.unconverged() {
            report.raise(format!("enclosures wider than tol at t={t}"));
        }
    }
    Ok(Outcome::flagged_with(report, 2))
}

fn analyze_symmetry(src: &HomeoSource, grid: usize, scales: &[f64], limits: &Limits) -> CliResult<Outcome> {
    let mut report = Report::new("analyze symmetry", &["t", "epsilon_hat", "argmax_x", "max_width"]);
    let source = Source::load(src, &mut report)?;
    let scales: Vec<f64> = if scales.is_empty() {
        defaults::SCALE_EXPONENTS.map(|j| 0.5f64.powi(j)).collect()
    } else {
        scales.to_vec()
    };
    report
        .config("grid", grid)
        .config("scales", scales.iter().map(|t| crate::report::format_float(*t)).collect::<Vec<_>>().join(" "));
    echo_limits(&mut report, limits);
    report.note("epsilon_hat(t) = max over x = j/grid of max(r - 1, 1/r - 1); a sampled lower bound for the true modulus");
    // validates the whole ladder before any work
    symmetry_modulus(&HomeoSpec::Identity, &scales, grid)?;
    let h = source.tracked(src.tol, limits)?;
    for &t in &scales {
        h.reset();
        let m = symmetry_modulus(&h, &[t], grid)?;
        let row = m.rows[0];
        report.push(vec![t.into(), row.value.into(), row.argmax.into(), h.widest.get().into()]);
        if h.unconverged() {
            report.raise(format!("enclosures wider than tol at t={t}"));
        }
    }
    Ok(Outcome::flagged_with(report, 2))
}

/// Error bound on `F^{-n}(y)`.
fn inverse_error(map: &CircleMap, n: usize) -> f64 {
    n as f64 * map.step_error().max(f64::EPSILON) * map.inverse_expansion().powi(n as i32)
}

fn uqs_rows(map: &CircleMap, x: f64, t: f64, n: usize, limits: &Limits) -> CliResult<Vec<(usize, f64, f64)>> {
    (1..=n)
        .map(|k| {
            let r = uqs_ratio_endo(map, x, t, k, limits)?;
            let left = map.global_inverse_lift(x, k, limits)? - map.global_inverse_lift(x - t, k, limits)?;
            Ok((k, r, 2.0 * inverse_error(map, k) * (1.0 + r) / left))
        })
        .collect()
}

fn analyze_uqs(path: &Path, x: f64, t: f64, n: usize, limits: &Limits) -> CliResult<Outcome> {
    let map = load_map(path)?;
    positive("t", t)?;
    let mut report = Report::new("analyze uqs", &["n", "ratio", "ratio_error_bound"]);
    echo_map(&mut report, "map", path, &map);
    report.config("x", x).config("t", t).config("n", n);
    echo_limits(&mut report, limits);
    report.note("ratio = (F^-n(x+t) - F^-n(x)) / (F^-n(x) - F^-n(x-t))");
    for (k, r, e) in uqs_rows(&map, x, t, n, limits)? {
        report.push(vec![k.into(), r.into(), e.into()]);
    }
    Ok(Outcome::flagged_with(report, 2))
}

fn analyze_measure(path: &Path, level: u32) -> CliResult<Outcome> {
    let map = load_map(path)?;
    if level > 20 {
        return Err(CliError::Validation("measure level must be at most 20".into()));
    }
    let intervals = dyadic_intervals(level);
    let devs = measure_deviations(&map, &intervals)?;
    let bound = 2.0 * map.degree() as f64 * map.step_error() + 8.0 * f64::EPSILON;
    let mut report = Report::new("analyze measure", &["a", "b", "deviation", "error_bound"]);
    echo_map(&mut report, "map", path, &map);
    report.config("level", level as usize);
    report.note("deviation = | |f^-1([a,b])| - (b - a) | summed over inverse branches");
    let (mut worst, mut at) = (0.0f64, 0usize);
    for (j, (&(a, b), &dev)) in intervals.iter().zip(&devs).enumerate() {
        if dev > worst {
            worst = dev;
            at = j;
        }
        report.push(vec![a.into(), b.into(), dev.into(), bound.into()]);
    }
    report
        .summary("max_deviation", worst)
        .summary("argmax_a", intervals[at].0)
        .summary("error_bound", bound);
    Ok(Outcome::flagged_with(report, 2))
}

fn relative_error(f: &CircleMap, g: &CircleMap, word: &Word, limits: &Limits) -> CliResult<f64> {
    let cf = interval_of_word(f, word, limits)?;
    let cg = interval_of_word(g, word, limits)?;
    Ok(2.0 * cf.radius / cf.length() + 2.0 * cg.radius / cg.length())
}

fn analyze_phi(from: &Path, to: &Path, level: usize, cells: Option<usize>, limits: &Limits) -> CliResult<Outcome> {
    let f = load_map(from)?;
    let g = load_map(to)?;
    if let Some(m) = cells {
        let r = dilatation_report(&f, &g, level, m, limits)?;
        let mut report = Report::new("analyze phi", &["cell", "max_ratio"]);
        echo_map(&mut report, "from", from, &f);
        echo_map(&mut report, "to", to, &g);
        report.config("level", level).config("coarse_level", m);
        echo_limits(&mut report, limits);
        report
            .note("largest |I_w(g)| / |I_w(f)| over the level descendants of each coarse cell")
            .summary("max_ratio", r.max_ratio)
            .summary("max_rel_error", relative_error(&f, &g, &r.argmax, limits)?)
            .summary("argmax", r.argmax.to_string());
        for (w, v) in r.coarse_maxima {
            report.push(vec![w.to_string().into(), v.into()]);
        }
        return Ok(Outcome::flagged_with(report, 2));
    }
    if level == 0 {
        return Err(CliError::Validation("level must be at least 1".into()));
    }
    let mut report = Report::new(
        "analyze phi",
        &["level", "max_ratio", "max_rel_error", "argmax", "min_ratio", "min_rel_error", "argmin"],
    );
    echo_map(&mut report, "from", from, &f);
    echo_map(&mut report, "to", to, &g);
    report.config("level", level);
    echo_limits(&mut report, limits);
    report.note("ratios |h(I_w)| / |I_w| = |I_w(g)| / |I_w(f)| over the level cylinders");
    let (mut up, mut down) = (true, true);
    let (mut prev_max, mut prev_min) = (1.0, 1.0);
    for n in 1..=level {
        let r = dilatation_report(&f, &g, n, 0, limits)?;
        up &= r.max_ratio >= prev_max;
        down &= r.min_ratio <= prev_min;
        prev_max = r.max_ratio;
        prev_min = r.min_ratio;
        report.push(vec![
            n.into(),
            r.max_ratio.into(),
            relative_error(&f, &g, &r.argmax, limits)?.into(),
            r.argmax.to_string().into(),
            r.min_ratio.into(),
            relative_error(&f, &g, &r.argmin, limits)?.into(),
            r.argmin.to_string().into(),
        ]);
    }
    report
        .summary("max_nondecreasing", up)
        .summary("min_nonincreasing", down);
    Ok(Outcome::flagged_with(report, 2))
}

fn analyze_tailsum(path: &Path, word: &str, k_max: usize, limits: &Limits) -> CliResult<Outcome> {
    let map = load_map(path)?;
    let w: Word = word
        .parse()
        .map_err(|e: symrig_core::Error| CliError::Validation(format!("--word {word:?}: {e}")))?;
    let r = tail_sum(&map, &w, k_max, limits)?;
    let n = w.level();
    let blocks = (map.degree() as f64).powi(n as i32) - 1.0;
    let mut report = Report::new(
        "analyze tailsum",
        &["k", "sum", "sum_error_bound", "bound", "bound_from_constant", "count"],
    );
    echo_map(&mut report, "map", path, &map);
    report.config("word", w.to_string()).config("k_max", k_max);
    echo_limits(&mut report, limits);
    report
        .note("sum = total length of level n*k cylinders whose n-blocks all differ from word")
        .note("bound = (1 - A)^k with the observed A; bound_from_constant = (1 - C^-n)^k")
        .summary(
            "method",
            match r.method {
                TailMethod::ClosedForm => "closed_form",
                TailMethod::Enumeration => "enumeration",
            },
        )
        .summary("a_empirical", r.a_empirical)
        .summary("constant", r.constant)
        .summary("constant_level", r.constant_level)
        .summary("a_from_constant", r.a_from_constant)
        .summary("first_stage_below_1e-3", r.first_stage_below(1e-3));
    for row in &r.rows {
        let err = match r.method {
            TailMethod::ClosedForm => 4.0 * row.k as f64 * f64::EPSILON * row.sum,
            TailMethod::Enumeration => {
                blocks.powi(row.k as i32 - 1) * 4.0 * endpoint_radius(&map, n * row.k)
            }
        };
        report.push(vec![
            row.k.into(),
            row.sum.into(),
            err.into(),
            row.bound.into(),
            row.bound_from_constant.into(),
            u64::try_from(row.count).unwrap_or(u64::MAX).into(),
        ]);
    }
    Ok(Outcome::flagged_with(report, 2))
}

fn run_repro(r: &Repro, limits: &Limits) -> CliResult<Outcome> {
    match r {
        Repro::FalphaUqs { alpha, t, n } => repro_falpha_uqs(*alpha, *t, *n, limits),
        Repro::RigidityDemo { alpha, n } => repro_rigidity(*alpha, *n, limits),
        Repro::All { seed } => {
            let rows = repro::run_all(limits, *seed);
            let mut report = repro::table(&rows);
            report.config("seed", *seed);
            echo_limits(&mut report, limits);
            Ok(Outcome::flagged_with(report, 2))
        }
    }
}

fn falpha(alpha: f64) -> CliResult<CircleMap> {
    CircleMap::new(MapSpec::falpha(alpha)).map_err(CliError::from)
}

fn repro_falpha_uqs(alpha: f64, t: f64, n: usize, limits: &Limits) -> CliResult<Outcome> {
    let map = falpha(alpha)?;
    positive("t", t)?;
    let mut report = Report::new("repro falpha-uqs", &["n", "ratio", "expected", "rel_error", "ratio_error_bound"]);
    report
        .config("alpha", alpha)
        .config("x", 0.0)
        .config("t", t)
        .config("n", n)
        .config("map_spec", map_json(map.spec()));
    echo_limits(&mut report, limits);
    report.note("expected = (alpha / (1 - alpha))^n, valid for 1/2 < alpha < 1 and 0 < t < 1 - alpha");
    let q = alpha / (1.0 - alpha);
    let mut worst = 0.0f64;
    for (k, r, e) in uqs_rows(&map, 0.0, t, n, limits)? {
        let expected = q.powi(k as i32);
        let rel = (r / expected - 1.0).abs();
        worst = worst.max(rel);
        report.push(vec![k.into(), r.into(), expected.into(), rel.into(), e.into()]);
    }
    report.summary("max_rel_error", worst);
    Ok(Outcome::flagged_with(report, 2))
}

fn repro_rigidity(alpha: f64, n: usize, limits: &Limits) -> CliResult<Outcome> {
    let f = falpha(alpha)?;
    let g = CircleMap::new(MapSpec::Linear { degree: 2 })?;
    if n == 0 {
        return Err(CliError::Validation("n must be at least 1".into()));
    }
    let tol = defaults::CONJUGACY_TOL;
    let h = Tracked {
        spec: None,
        conjugacy: Some(Conjugacy::new(&f, &g, limits)?),
        tol,
        widest: StdCell::new(0.0),
    };
    let mut report = Report::new(
        "repro rigidity-demo",
        &["n", "max_ratio", "expected", "abs_error", "t", "qs_ratio", "qs_error_bound", "deviation"],
    );
    report
        .config("alpha", alpha)
        .config("from_spec", map_json(f.spec()))
        .config("to_spec", map_json(g.spec()))
        .config("tol", tol);
    echo_limits(&mut report, limits);
    report
        .note("max_ratio = largest |I_w(g)| / |I_w(f)| over level-n words; expected = (1/2 / min(alpha, 1 - alpha))^n")
        .note("qs_ratio of h at x = 0 with t = (1 - alpha)^n; deviation = max(r - 1, 1/r - 1)");
    let short = alpha.min(1.0 - alpha);
    for k in 1..=n {
        let d = dilatation_report(&f, &g, k, 0, limits)?;
        let expected = (0.5 / short).powi(k as i32);
        let t = (1.0 - alpha).powi(k as i32);
        h.reset();
        let r = qs_ratio(&h, 0.0, t)?;
        let left = h.value(0.0)? - h.value(-t)?;
        report.push(vec![
            k.into(),
            d.max_ratio.into(),
            expected.into(),
            (d.max_ratio - expected).abs().into(),
            t.into(),
            r.into(),
            (2.0 * h.value_error() * (1.0 + r) / left).into(),
            (r - 1.0).max(1.0 / r - 1.0).into(),
        ]);
        if h.unconverged() {
            report.raise(format!("enclosures wider than tol at n={k}"));
        }
    }
    Ok(Outcome::flagged_with(report, 2))
}
