//! Process-wide caps that guard against term explosion.
//!
//! The number of surjections out of `[n]` grows like the Fubini numbers
//! (1, 3, 13, 75, 541, 4683, ...), so every symbolic operation checks its
//! output size against one of two caps before doing any work.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_WEIGHT_CAP: usize = 8;
pub const DEFAULT_GRADE_CAP: usize = 6;

static WEIGHT_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_WEIGHT_CAP);
static GRADE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_GRADE_CAP);

/// Maximal total weight of a bracket word produced by a word product.
pub fn weight_cap() -> usize {
    WEIGHT_CAP.load(Ordering::Relaxed)
}

pub fn set_weight_cap(cap: usize) {
    WEIGHT_CAP.store(cap, Ordering::Relaxed);
}

/// Maximal grade (arity, or expansion order) for series computations.
pub fn grade_cap() -> usize {
    GRADE_CAP.load(Ordering::Relaxed)
}

pub fn set_grade_cap(cap: usize) {
    GRADE_CAP.store(cap, Ordering::Relaxed);
}

pub(crate) fn check_weight(weight: usize) -> Result<()> {
    let cap = weight_cap();
    if weight > cap {
        return Err(Error::WeightCapExceeded { weight, cap });
    }
    Ok(())
}

pub(crate) fn check_grade(grade: usize) -> Result<()> {
    let cap = grade_cap();
    if grade > cap {
        return Err(Error::GradeCapExceeded { grade, cap });
    }
    Ok(())
}
