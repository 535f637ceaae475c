//! The topological conjugacy `h` with `h ∘ f = g ∘ h` and `h(0) = 0`.
//!
//! `h` sends each `f`-cylinder onto the `g`-cylinder with the same word, so a
//! point is located by its `f`-itinerary and its image is enclosed by the
//! matching `g`-cylinder. Convergence follows from mesh decay of `g`.

use alloc::vec::Vec;

use crate::circle_map::CircleMap;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partition::{apply_inverse_word, level_endpoints, mesh};
use crate::word::Word;

/// Certified interval `[lo, hi]` containing `h(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugacyEnclosure {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
    /// Word level used.
    pub depth: usize,
    /// `width <= tol` was reached within the depth cap.
    pub converged: bool,
    /// `x` is an `f`-partition endpoint and `lo == hi` is its exact image.
    pub exact: bool,
}

impl ConjugacyEnclosure {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    fn point(x: f64, y: f64, depth: usize) -> Self {
        ConjugacyEnclosure {
            x,
            lo: y,
            hi: y,
            depth,
            converged: true,
            exact: true,
        }
    }
}

/// Conjugacy from `from` (the `f`-system) to `to` (the `g`-system).
#[derive(Debug, Clone, Copy)]
pub struct Conjugacy<'a> {
    from: &'a CircleMap,
    to: &'a CircleMap,
    depth_cap: usize,
}

fn probe_mesh(map: &CircleMap, which: &'static str, limits: &Limits) -> Result<()> {
    let mut prev = 1.0;
    for level in 1..=limits.probe_level {
        let m = mesh(map, level, limits)?;
        if !(m < prev) {
            return Err(Error::NoMeshDecay { which, level });
        }
        prev = m;
    }
    Ok(())
}

impl<'a> Conjugacy<'a> {
    /// Checks the degrees and probes mesh decay of both maps.
    pub fn new(from: &'a CircleMap, to: &'a CircleMap, limits: &Limits) -> Result<Self> {
        if from.degree() != to.degree() {
            return Err(Error::DegreeMismatch {
                from: from.degree(),
                to: to.degree(),
            });
        }
        probe_mesh(from, "from", limits)?;
        probe_mesh(to, "to", limits)?;
        Ok(Conjugacy {
            from,
            to,
            depth_cap: limits.conjugacy_depth_cap,
        })
    }

    pub fn from_map(&self) -> &'a CircleMap {
        self.from
    }

    pub fn to_map(&self) -> &'a CircleMap {
        self.to
    }

    /// Encloses `h(x)` for `x` in `[0, 1]`, refining until the `g`-cylinder
    /// is at most `tol` wide or the depth cap is hit.
    pub fn eval(&self, x: f64, tol: f64) -> Result<ConjugacyEnclosure> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain {
                value: x,
                domain: "[0, 1]",
            });
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive"));
        }
        if x == 0.0 || x == 1.0 {
            return Ok(ConjugacyEnclosure::point(x, x, 0));
        }
        let d = self.from.degree();
        let f_cuts = self.from.cuts();
        let g_cuts = self.to.cuts();
        let mut word = Word::empty();
        let (mut g_lo, mut g_hi) = (0.0, 1.0);
        loop {
            let depth = word.level();
            if g_hi - g_lo <= tol || depth >= self.depth_cap {
                return Ok(ConjugacyEnclosure {
                    x,
                    lo: g_lo,
                    hi: g_hi,
                    depth,
                    converged: g_hi - g_lo <= tol,
                    exact: false,
                });
            }
            let mut child = 0;
            for k in (1..d).rev() {
                let b = apply_inverse_word(self.from, word.symbols(), f_cuts[k as usize])?;
                if b == x {
                    let y = apply_inverse_word(self.to, word.symbols(), g_cuts[k as usize])?;
                    return Ok(ConjugacyEnclosure::point(x, y, depth + 1));
                }
                if b < x {
                    child = k;
                    break;
                }
            }
            let next_lo = if child == 0 {
                g_lo
            } else {
                apply_inverse_word(self.to, word.symbols(), g_cuts[child as usize])?
            };
            let next_hi = if child == d - 1 {
                g_hi
            } else {
                apply_inverse_word(self.to, word.symbols(), g_cuts[child as usize + 1])?
            };
            g_lo = next_lo;
            g_hi = next_hi;
            word.push(child);
        }
    }

    /// Periodic extension of `h` to the real line, evaluated at the enclosure
    /// midpoint.
    pub fn lift(&self, x: f64, tol: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::OutOfDomain {
                value: x,
                domain: "finite reals",
            });
        }
        let k = libm::floor(x);
        let u = (x - k).min(1.0);
        Ok(k + self.eval(u, tol)?.midpoint())
    }
}

pub fn conjugacy_eval(
    f: &CircleMap,
    g: &CircleMap,
    x: f64,
    tol: f64,
    limits: &Limits,
) -> Result<ConjugacyEnclosure> {
    Conjugacy::new(f, g, limits)?.eval(x, tol)
}

/// `h` restricted to the level-`n` endpoints: ordered `(f-endpoint,
/// g-endpoint)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointTable {
    pub level: usize,
    pub degree: u32,
    pub pairs: Vec<(f64, f64)>,
}

impl EndpointTable {
    /// Word of the cylinder whose left endpoint is row `row`; `None` for the
    /// final row (the endpoint 1).
    pub fn word_of_row(&self, row: usize) -> Option<Word> {
        (row + 1 < self.pairs.len()).then(|| Word::from_index(row, self.degree, self.level))
    }

    /// The table of the inverse conjugacy.
    pub fn swapped(&self) -> EndpointTable {
        EndpointTable {
            level: self.level,
            degree: self.degree,
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    /// Image of an `f`-endpoint, if it is in the table.
    pub fn image(&self, f_endpoint: f64) -> Option<f64> {
        self.pairs
            .binary_search_by(|p| p.0.total_cmp(&f_endpoint))
            .ok()
            .map(|i| self.pairs[i].1)
    }
}

pub fn endpoint_table(f: &CircleMap, g: &CircleMap, n: usize, limits: &Limits) -> Result<EndpointTable> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch {
            from: f.degree(),
            to: g.degree(),
        });
    }
    let fe = level_endpoints(f, n, limits)?;
    let ge = level_endpoints(g, n, limits)?;
    Ok(EndpointTable {
        level: n,
        degree: f.degree(),
        pairs: fe.into_iter().zip(ge).collect(),
    })
}

/// Result of [`conjugacy_residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    /// `max_x dist_circle(h(f(x)), g(h(x)))` over the grid.
    pub max_residual: f64,
    pub argmax: f64,
    /// Widest enclosure used.
    pub max_width: f64,
    pub all_converged: bool,
}

fn circle_distance(a: f64, b: f64) -> f64 {
    let t = (a - b).abs();
    let t = t - libm::floor(t);
    t.min(1.0 - t)
}

/// Checks the functional equation on the grid `x_j = j / grid_size`.
pub fn conjugacy_residual(
    f: &CircleMap,
    g: &CircleMap,
    grid_size: usize,
    tol: f64,
    limits: &Limits,
) -> Result<Residual> {
    if grid_size == 0 {
        return Err(Error::InvalidParameter("grid size must be positive"));
    }
    let h = Conjugacy::new(f, g, limits)?;
    let mut out = Residual {
        max_residual: 0.0,
        argmax: 0.0,
        max_width: 0.0,
        all_converged: true,
    };
    for j in 0..grid_size {
        let x = j as f64 / grid_size as f64;
        let hx = h.eval(x, tol)?;
        let hfx = h.eval(f.eval_circle(x), tol)?;
        let r = circle_distance(hfx.midpoint(), g.eval_lift(hx.midpoint()));
        out.max_width = out.max_width.max(hx.width()).max(hfx.width());
        out.all_converged &= hx.converged && hfx.converged;
        if r > out.max_residual {
            out.max_residual = r;
            out.argmax = x;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::circle_map::{make_conjugated, HomeoSpec, MapSpec};

    fn f06() -> CircleMap {
        CircleMap::new(MapSpec::falpha(0.6)).unwrap()
    }

    fn lin2() -> CircleMap {
        CircleMap::new(MapSpec::Linear { degree: 2 }).unwrap()
    }

    #[test]
    fn identity_when_maps_agree() {
        let f = f06();
        let e = conjugacy_eval(&f, &f, 0.37, 1e-8, &Limits::default()).unwrap();
        assert!(e.lo <= 0.37 && 0.37 <= e.hi);
        assert!(e.width() <= 1e-8);
        assert!(e.converged);
    }

    #[test]
    fn endpoint_images() {
        let (f, g) = (f06(), lin2());
        let limits = Limits::default();
        let e = conjugacy_eval(&f, &g, 0.6, 1e-8, &limits).unwrap();
        assert!(e.exact);
        assert_eq!((e.lo, e.hi), (0.5, 0.5));
        // level-2 endpoint 0.84 = F_1^{-1}(0.6); oracle from the endpoint table
        let table = endpoint_table(&f, &g, 2, &limits).unwrap();
        let oracle = table.pairs[3].1;
        assert_eq!(oracle, 0.75);
        let e = conjugacy_eval(&f, &g, 0.84, 1e-8, &limits).unwrap();
        assert!((e.midpoint() - oracle).abs() <= 1e-8);
        assert!(e.lo - 1e-15 <= oracle && oracle <= e.hi + 1e-15);
    }

    #[test]
    fn table_examples() {
        let limits = Limits::default();
        let (f, g) = (f06(), lin2());
        let t = endpoint_table(&f, &g, 2, &limits).unwrap();
        let expect = [(0.0, 0.0), (0.36, 0.25), (0.6, 0.5), (0.84, 0.75), (1.0, 1.0)];
        for (p, e) in t.pairs.iter().zip(expect) {
            assert!((p.0 - e.0).abs() < 1e-15 && p.1 == e.1);
        }
        assert_eq!(t.word_of_row(1).unwrap().to_string(), "01");
        assert_eq!(t.word_of_row(4), None);
        let back = endpoint_table(&g, &f, 2, &limits).unwrap();
        assert_eq!(back, t.swapped());
        let same = endpoint_table(&f, &f, 6, &limits).unwrap();
        assert!(same.pairs.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn degree_mismatch() {
        let f3 = CircleMap::new(MapSpec::Linear { degree: 3 }).unwrap();
        assert!(matches!(
            conjugacy_eval(&f06(), &f3, 0.5, 1e-6, &Limits::default()),
            Err(Error::DegreeMismatch { from: 2, to: 3 })
        ));
        assert!(endpoint_table(&f06(), &f3, 2, &Limits::default()).is_err());
    }

    #[test]
    fn unreachable_tolerance_is_flagged() {
        let limits = Limits {
            conjugacy_depth_cap: 4,
            ..Limits::default()
        };
        let e = conjugacy_eval(&f06(), &lin2(), 0.3, 1e-10, &limits).unwrap();
        assert!(!e.converged);
        assert_eq!(e.depth, 4);
        assert!((e.width() - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn residual_examples() {
        let limits = Limits::default();
        let f = f06();
        let same = conjugacy_residual(&f, &f, 64, 1e-9, &limits).unwrap();
        assert!(same.max_residual <= 2e-9);
        let r = conjugacy_residual(&f, &lin2(), 256, 1e-8, &limits).unwrap();
        assert!(r.max_residual <= 1e-6, "{r:?}");
        assert!(r.all_converged);
    }

    #[test]
    fn recovers_known_conjugacy() {
        let limits = Limits::default();
        let hs = HomeoSpec::SineHomeo { c: 0.5 };
        let g = lin2();
        let f = CircleMap::new(make_conjugated(g.spec(), &hs).unwrap()).unwrap();
        let table = endpoint_table(&f, &g, 6, &limits).unwrap();
        for (e, img) in &table.pairs {
            assert!((hs.lift(*e) - img).abs() < 1e-9);
        }
    }

    #[test]
    fn lift_is_periodic() {
        let (f, g) = (f06(), lin2());
        let h = Conjugacy::new(&f, &g, &Limits::default()).unwrap();
        assert_eq!(h.lift(-0.4, 1e-10).unwrap(), h.lift(0.6, 1e-10).unwrap() - 1.0);
        assert_eq!(h.lift(2.0, 1e-10).unwrap(), 2.0);
    }
}
