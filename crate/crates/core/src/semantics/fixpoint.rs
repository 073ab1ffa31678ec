use std::collections::BTreeSet;
use std::sync::Arc;

use super::env::ProcEnv;
use crate::error::{Error, Result};
use crate::lang::StateSpace;

/// Kleene iteration of `f` from the bottom environment over `names`.
///
/// Fails with [`Error::IterationBound`] after `|names|·|State|² + 1` steps,
/// which a monotone `f` never reaches.
pub fn lfp<F>(names: &BTreeSet<String>, space: &Arc<StateSpace>, mut f: F) -> Result<ProcEnv>
where
    F: FnMut(&ProcEnv) -> Result<ProcEnv>,
{
    let n = space.len() as u128;
    let bound = (names.len() as u128) * n * n + 1;
    let mut r = ProcEnv::bottom(space, names.iter().cloned());
    let mut steps = 0u128;
    loop {
        let next = f(&r)?;
        next.expect_scope(names)?;
        if next == r {
            return Ok(r);
        }
        steps += 1;
        if steps > bound {
            return Err(Error::IterationBound(bound));
        }
        r = next;
    }
}
