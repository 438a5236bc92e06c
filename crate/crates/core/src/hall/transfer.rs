use serde::Serialize;

use super::element::{pull, push, HallElement};
use crate::error::Result;
use crate::groupoid::GroupoidSquare;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BeckChevalleyReport {
    /// The square passed the pullback test.
    pub applicable: bool,
    pub checked: usize,
    /// Components `b` of the top-right corner where base change fails on `delta_b`.
    pub failures: Vec<u32>,
    pub holds: bool,
}

/// Components `b` with `bottom^* right_! delta_b != left_! top^* delta_b`,
/// and the number of deltas checked. No pullback hypothesis.
pub fn base_change_failures(square: &GroupoidSquare) -> Result<(usize, Vec<u32>)> {
    let b_space = &square.top.target;
    let mut failures = Vec::new();
    for b in 0..b_space.len() as u32 {
        let delta = HallElement::delta(b_space.clone(), b)?;
        let lhs = pull(&push(&delta, &square.right)?, &square.bottom)?;
        let rhs = push(&pull(&delta, &square.top)?, &square.left)?;
        if lhs != rhs {
            failures.push(b);
        }
    }
    Ok((b_space.len(), failures))
}

/// Base change on every delta function of a square certified as a pullback.
/// A square that is not a pullback is reported as inapplicable.
pub fn beck_chevalley_check(square: &GroupoidSquare) -> Result<BeckChevalleyReport> {
    if !square.is_pullback()? {
        return Ok(BeckChevalleyReport { applicable: false, checked: 0, failures: vec![], holds: false });
    }
    let (checked, failures) = base_change_failures(square)?;
    Ok(BeckChevalleyReport { applicable: true, checked, holds: failures.is_empty(), failures })
}
