use crate::error::{Error, Result};

/// Work limits shared by the partition, conjugacy and analysis routines.
///
/// | field                 | default    |
/// |-----------------------|------------|
/// | `depth_cap`           | 60         |
/// | `cell_cap`            | 2^20       |
/// | `conjugacy_depth_cap` | 48         |
/// | `work_cap`            | 10^7       |
/// | `probe_level`         | 6          |
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    /// Longest word accepted by single-cylinder and inverse-iterate operations.
    pub depth_cap: usize,
    /// Largest number of cylinders a full-level enumeration may produce.
    pub cell_cap: usize,
    /// Deepest word level used when refining a conjugacy enclosure.
    pub conjugacy_depth_cap: usize,
    /// Largest number of interval evaluations for tail-sum enumeration.
    pub work_cap: u64,
    /// Level up to which mesh decay is probed before building a conjugacy.
    pub probe_level: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            depth_cap: 60,
            cell_cap: 1 << 20,
            conjugacy_depth_cap: 48,
            work_cap: 10_000_000,
            probe_level: 6,
        }
    }
}

impl Limits {
    pub(crate) fn check_depth(&self, depth: usize) -> Result<()> {
        if depth > self.depth_cap {
            return Err(Error::DepthCapExceeded {
                requested: depth,
                cap: self.depth_cap,
            });
        }
        Ok(())
    }

    /// Number of cells at `level` for `degree`, if within the cell cap.
    pub(crate) fn check_cells(&self, degree: u32, level: usize) -> Result<usize> {
        let cells = (degree as u128).checked_pow(level as u32).unwrap_or(u128::MAX);
        if cells > self.cell_cap as u128 {
            return Err(Error::CellCapExceeded {
                requested: cells,
                cap: self.cell_cap,
            });
        }
        Ok(cells as usize)
    }
}
