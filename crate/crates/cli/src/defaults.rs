//! Numeric defaults of every subcommand.
//!
//! | name                   | value        | used by                               |
//! |------------------------|--------------|---------------------------------------|
//! | `CONJUGACY_TOL`        | 1e-10        | `conjugacy`, `analyze qs/symmetry`    |
//! | `GRID`                 | 1024         | `conjugacy`, `analyze symmetry`       |
//! | `SCALE_EXPONENTS`      | 1..=20       | `analyze symmetry` (t = 2^-j)         |
//! | `MEASURE_LEVEL`        | 8            | `analyze measure` (256 dyadics)       |
//! | `PHI_LEVEL`            | 10           | `analyze phi`                         |
//! | `TAIL_K_MAX`           | 10           | `analyze tailsum`                     |
//! | `MARKOV_TOL`           | 1e-10        | `partition --verify`                  |
//! | `FALPHA_ALPHA`         | 0.6          | `repro falpha-uqs`, `rigidity-demo`   |
//! | `FALPHA_T`             | 0.2          | `repro falpha-uqs`                    |
//! | `FALPHA_N`             | 20           | `repro falpha-uqs`                    |
//! | `RIGIDITY_N`           | 10           | `repro rigidity-demo`                 |
//! | `PROPERTY_MAPS`        | 100          | `repro all`, criterion 8              |
//! | `PROPERTY_SEED`        | 20240607     | `repro all`, criterion 8              |
//!
//! Depth, cell and work caps default to [`symrig_core::Limits::default`]; the
//! work cap can be overridden through the environment variable
//! [`WORK_CAP_ENV`].

pub const CONJUGACY_TOL: f64 = 1e-10;
pub const GRID: usize = 1024;
pub const SCALE_EXPONENTS: std::ops::RangeInclusive<i32> = 1..=20;
pub const MEASURE_LEVEL: u32 = 8;
pub const PHI_LEVEL: usize = 10;
pub const TAIL_K_MAX: usize = 10;
pub const MARKOV_TOL: f64 = 1e-10;
pub const FALPHA_ALPHA: f64 = 0.6;
pub const FALPHA_T: f64 = 0.2;
pub const FALPHA_N: usize = 20;
pub const RIGIDITY_N: usize = 10;
pub const PROPERTY_MAPS: usize = 100;
pub const PROPERTY_SEED: u64 = 20240607;

pub const WORK_CAP_ENV: &str = "SYMRIG_WORK_CAP";
