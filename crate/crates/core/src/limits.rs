//! Process-wide cap on the size of any dense table or enumeration.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_CELLS: usize = 1_000_000;

static MAX_CELLS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_CELLS);

pub fn max_cells() -> usize {
    MAX_CELLS.load(Ordering::Relaxed)
}

pub fn set_max_cells(cap: usize) {
    MAX_CELLS.store(cap, Ordering::Relaxed);
}

/// Product of `sizes`, failing if it overflows or exceeds the cap.
pub fn cell_count<I: IntoIterator<Item = usize>>(sizes: I) -> Result<usize> {
    let mut total: usize = 1;
    for s in sizes {
        total = total
            .checked_mul(s)
            .ok_or_else(|| Error::Size("table size overflows".into()))?;
    }
    check(total)?;
    Ok(total)
}

pub fn check(cells: usize) -> Result<()> {
    let cap = max_cells();
    if cells > cap {
        return Err(Error::Size(format!(
            "{cells} cells exceed the cap of {cap}"
        )));
    }
    Ok(())
}
