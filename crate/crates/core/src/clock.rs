//! Time accounting for limits and reports.
//!
//! Two clocks are supported. `Wall` is ordinary elapsed time. `Work` counts
//! simplex pivots performed on the current thread and converts them to
//! nominal seconds, which makes every time-dependent decision (limits, the
//! scalarization budget derived from the root bound time) reproducible
//! bit for bit.

use std::cell::Cell;
use std::time::Instant;

/// Nominal duration charged per simplex pivot under [`ClockMode::Work`].
pub const WORK_UNIT_SECS: f64 = 1e-6;

thread_local! {
    static PIVOTS: Cell<u64> = const { Cell::new(0) };
}

pub(crate) fn count_pivot() {
    PIVOTS.with(|c| c.set(c.get() + 1));
}

/// Simplex pivots performed so far on this thread.
pub fn pivots() -> u64 {
    PIVOTS.with(Cell::get)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClockMode {
    #[default]
    Wall,
    Work,
}

#[derive(Debug, Clone)]
pub struct Stopwatch {
    mode: ClockMode,
    started: Instant,
    pivots_at_start: u64,
}

impl Stopwatch {
    pub fn start(mode: ClockMode) -> Self {
        Stopwatch {
            mode,
            started: Instant::now(),
            pivots_at_start: pivots(),
        }
    }

    pub fn mode(&self) -> ClockMode {
        self.mode
    }

    /// Seconds since start, as measured by this clock.
    pub fn elapsed(&self) -> f64 {
        match self.mode {
            ClockMode::Wall => self.started.elapsed().as_secs_f64(),
            ClockMode::Work => (pivots() - self.pivots_at_start) as f64 * WORK_UNIT_SECS,
        }
    }
}

/// A point in time after which work should stop.
#[derive(Debug, Clone)]
pub struct Deadline {
    watch: Stopwatch,
    limit: Option<f64>,
}

impl Deadline {
    pub fn new(mode: ClockMode, limit_secs: Option<f64>) -> Self {
        Deadline {
            watch: Stopwatch::start(mode),
            limit: limit_secs,
        }
    }

    pub fn unlimited() -> Self {
        Deadline::new(ClockMode::Wall, None)
    }

    pub fn expired(&self) -> bool {
        match self.limit {
            Some(limit) => self.watch.elapsed() >= limit,
            None => false,
        }
    }

    /// Seconds left, `None` when unlimited.
    pub fn remaining(&self) -> Option<f64> {
        self.limit.map(|l| (l - self.watch.elapsed()).max(0.0))
    }

    /// A deadline `secs` from now on the same clock, never later than `self`.
    pub fn sub_deadline(&self, secs: f64) -> Deadline {
        let limit = match self.remaining() {
            Some(rem) => rem.min(secs),
            None => secs,
        };
        Deadline::new(self.watch.mode(), Some(limit))
    }

    /// Same end point as `self`, freshly anchored.
    pub fn child(&self) -> Deadline {
        Deadline::new(self.watch.mode(), self.remaining())
    }
}
