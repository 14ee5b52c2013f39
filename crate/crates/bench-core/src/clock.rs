//! Timing sources for the runner.
//!
//! All readings are in nanoseconds as `f64`. Differences of readings taken
//! from the same clock are what the runner consumes; the zero point is
//! arbitrary. Using integral nanosecond values (as both implementations
//! here do) keeps those differences exact in `f64` for any realistic batch
//! duration, which is what makes runs under [`FakeClock`] bit-for-bit
//! reproducible.

use std::cell::Cell;
use std::time::Instant;

/// A source of wall-clock and CPU time, plus a per-iteration hook.
///
/// The runner brackets each batch with `wall_now_ns`/`cpu_now_ns` pairs and
/// calls [`Clock::iteration_tick`] once per benchmark iteration (from
/// [`BenchState::keep_running`](crate::BenchState::keep_running)). Real
/// clocks ignore the tick; fake clocks use it to advance time
/// deterministically.
pub trait Clock {
    /// Current monotonic wall-clock reading, in nanoseconds.
    fn wall_now_ns(&self) -> f64;

    /// Current process CPU-time reading, in nanoseconds.
    fn cpu_now_ns(&self) -> f64;

    /// Called once per benchmark iteration. A no-op for real clocks.
    fn iteration_tick(&self) {}
}

/// The real clocks of the host: a monotonic wall clock and the operating
/// system's process CPU-time counter.
#[derive(Debug)]
pub struct SystemClock {
    origin: Instant,
}

impl SystemClock {
    pub fn new() -> Self {
        SystemClock {
            origin: Instant::now(),
        }
    }
}

impl Default for SystemClock {
    fn default() -> Self {
        SystemClock::new()
    }
}

impl Clock for SystemClock {
    fn wall_now_ns(&self) -> f64 {
        self.origin.elapsed().as_nanos() as f64
    }

    #[cfg(unix)]
    fn cpu_now_ns(&self) -> f64 {
        let mut ts = libc::timespec {
            tv_sec: 0,
            tv_nsec: 0,
        };
        // SAFETY: `ts` is a valid, writable timespec and the clock id is a
        // constant the platform defines.
        let rc = unsafe { libc::clock_gettime(libc::CLOCK_PROCESS_CPUTIME_ID, &mut ts) };
        if rc == 0 {
            ts.tv_sec as f64 * 1e9 + ts.tv_nsec as f64
        } else {
            // No per-process CPU clock available; fall back to wall time so
            // cpu_time stays a sane, monotone quantity.
            self.wall_now_ns()
        }
    }

    #[cfg(not(unix))]
    fn cpu_now_ns(&self) -> f64 {
        self.wall_now_ns()
    }
}

/// A deterministic clock that advances only when the benchmark iterates.
///
/// Every iteration advances both the wall and CPU readings by a fixed whole
/// number of nanoseconds, so a benchmark whose body does nothing but iterate
/// appears to cost exactly `ns_per_iteration` per iteration — on any
/// machine, every time.
#[derive(Debug)]
pub struct FakeClock {
    ns_per_iteration: u64,
    now: Cell<u64>,
}

impl FakeClock {
    pub fn new(ns_per_iteration: u64) -> Self {
        FakeClock {
            ns_per_iteration,
            now: Cell::new(0),
        }
    }
}

impl Clock for FakeClock {
    fn wall_now_ns(&self) -> f64 {
        self.now.get() as f64
    }

    fn cpu_now_ns(&self) -> f64 {
        self.now.get() as f64
    }

    fn iteration_tick(&self) {
        self.now.set(self.now.get() + self.ns_per_iteration);
    }
}
