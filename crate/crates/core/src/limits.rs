use crate::{Error, Result};

/// Resource limits shared by every exhaustive search.
///
/// `force` lifts the per-operation size guards; `max_work` caps the number of
/// search nodes any single invocation may expand.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Limits {
    pub force: bool,
    pub max_work: Option<u64>,
}

impl Limits {
    pub const fn new() -> Self {
        Limits {
            force: false,
            max_work: None,
        }
    }

    pub const fn forced() -> Self {
        Limits {
            force: true,
            max_work: None,
        }
    }

    pub fn with_max_work(mut self, max_work: u64) -> Self {
        self.max_work = Some(max_work);
        self
    }

    /// Fails with [`Error::GuardExceeded`] when `value > limit` and the guard is not forced.
    pub fn guard(&self, what: &'static str, value: u64, limit: u64) -> Result<()> {
        if value > limit && !self.force {
            return Err(Error::GuardExceeded { what, value, limit });
        }
        Ok(())
    }

    pub fn work(&self) -> Work {
        Work {
            used: 0,
            cap: self.max_work,
        }
    }
}

/// Search-node counter for one invocation.
#[derive(Debug, Clone)]
pub struct Work {
    used: u64,
    cap: Option<u64>,
}

impl Work {
    pub fn unlimited() -> Self {
        Work { used: 0, cap: None }
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        match self.cap {
            Some(cap) if self.used > cap => Err(Error::BudgetExhausted(cap)),
            _ => Ok(()),
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
