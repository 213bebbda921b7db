//! Deliberate sign errors used to check that the property suite is not
//! vacuous. A mutant is active only on the current thread and only inside
//! `with_mutant`.

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutant {
    /// Cone differential uses `+d_X` in the upper-left block.
    ConeNegBlock,
    /// Cone differential uses `−f` in the lower-left block.
    ConeMapBlock,
    /// Cone differential uses `−d_Y` in the lower-right block.
    ConeTargetBlock,
    /// Totalization negates the off-diagonal blocks `f_n`, `n` odd.
    XiSign,
    /// Θ uses the literal `(−1)^j` sign on `d_1` instead of the alternating one.
    ThetaD1Sign,
}

impl Mutant {
    pub const ALL: [Mutant; 5] =
        [Mutant::ConeNegBlock, Mutant::ConeMapBlock, Mutant::ConeTargetBlock, Mutant::XiSign, Mutant::ThetaD1Sign];

    pub fn name(self) -> &'static str {
        match self {
            Mutant::ConeNegBlock => "cone-neg-block",
            Mutant::ConeMapBlock => "cone-map-block",
            Mutant::ConeTargetBlock => "cone-target-block",
            Mutant::XiSign => "xi-sign",
            Mutant::ThetaD1Sign => "theta-d1-sign",
        }
    }
}

impl fmt::Display for Mutant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Mutant::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::Parse(format!("unknown mutant '{s}'")))
    }
}

thread_local! {
    static ACTIVE: Cell<Option<Mutant>> = const { Cell::new(None) };
}

/// Runs `f` with `m` active on this thread.
pub fn with_mutant<T>(m: Option<Mutant>, f: impl FnOnce() -> T) -> T {
    struct Restore(Option<Mutant>);
    impl Drop for Restore {
        fn drop(&mut self) {
            ACTIVE.with(|a| a.set(self.0));
        }
    }
    let _restore = Restore(ACTIVE.with(|a| a.replace(m)));
    f()
}

pub(crate) fn active(m: Mutant) -> bool {
    ACTIVE.with(|a| a.get() == Some(m))
}
