//! Execution hooks: how per-scenario work is dispatched and how time is read.
//!
//! The core never touches threads or the system clock directly. Callers with
//! `std` plug in a thread pool and a wall clock; the defaults here run
//! everything in order on the calling thread and report zero elapsed time.

use alloc::vec::Vec;

/// Maps a function over scenario indices `0..n`.
///
/// Implementations may run the calls concurrently but must return the results
/// in index order. All reductions over the results happen afterwards on the
/// calling thread, so scheduling never changes the numbers.
pub trait ScenarioExecutor: Sync {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs scenario work sequentially on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl ScenarioExecutor for Sequential {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

/// Monotone clock measured in seconds since some fixed origin.
pub trait Clock: Sync {
    fn now(&self) -> f64;
}

/// A clock that never advances; time limits never fire under it.
#[derive(Debug, Clone, Copy, Default)]
pub struct FrozenClock;

impl Clock for FrozenClock {
    fn now(&self) -> f64 {
        0.0
    }
}

/// Deadline helper built from a clock reading and an optional budget.
#[derive(Clone, Copy)]
pub struct Deadline<'a> {
    clock: &'a dyn Clock,
    start: f64,
    budget: Option<f64>,
}

impl<'a> Deadline<'a> {
    pub fn new(clock: &'a dyn Clock, budget: Option<f64>) -> Self {
        Self {
            clock,
            start: clock.now(),
            budget,
        }
    }

    pub fn elapsed(&self) -> f64 {
        self.clock.now() - self.start
    }

    pub fn expired(&self) -> bool {
        match self.budget {
            Some(b) => self.elapsed() >= b,
            None => false,
        }
    }

    /// Remaining budget, if any.
    pub fn remaining(&self) -> Option<f64> {
        self.budget.map(|b| (b - self.elapsed()).max(0.0))
    }
}

impl core::fmt::Debug for Deadline<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Deadline")
            .field("start", &self.start)
            .field("budget", &self.budget)
            .finish()
    }
}
