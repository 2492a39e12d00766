use crate::error::{Error, Result};

/// Step counter for exponential searches. Exhaustion is reported as
/// [`Error::BudgetExceeded`], never as a negative answer.
#[derive(Clone, Debug)]
pub struct Budget {
    remaining: u64,
    used: u64,
}

impl Budget {
    pub fn new(steps: u64) -> Self {
        Budget { remaining: steps, used: 0 }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.spend(1)
    }

    pub fn spend(&mut self, n: u64) -> Result<()> {
        if self.remaining < n {
            self.used += self.remaining;
            self.remaining = 0;
            return Err(Error::BudgetExceeded);
        }
        self.remaining -= n;
        self.used += n;
        Ok(())
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.remaining == 0
    }
}

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Outcome of a budgeted decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

impl Decision {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::Yes
        } else {
            Decision::No
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Decision::Yes => Some(true),
            Decision::No => Some(false),
            Decision::Unknown => None,
        }
    }

    pub fn is_decided(self) -> bool {
        self != Decision::Unknown
    }
}
