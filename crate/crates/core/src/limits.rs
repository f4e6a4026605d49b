//! Search budgets and the common result record of counting searches.

use serde::{Deserialize, Serialize};

/// Source of elapsed time for budgeted searches.
pub trait Clock {
    fn elapsed_secs(&self) -> f64;
}

/// A clock that never advances. Searches bounded only by node or value caps.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed_secs(&self) -> f64 {
        0.0
    }
}

impl<F: Fn() -> f64> Clock for F {
    fn elapsed_secs(&self) -> f64 {
        self()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// Seconds; must be positive.
    pub time_budget: f64,
    pub node_cap: Option<u64>,
    /// Stop once the counted value exceeds this.
    pub value_cap: Option<u64>,
}

impl SearchLimits {
    pub fn new(time_budget: f64) -> Self {
        SearchLimits { time_budget, node_cap: None, value_cap: None }
    }

    pub fn unlimited() -> Self {
        SearchLimits::new(f64::INFINITY)
    }

    pub fn with_node_cap(mut self, cap: u64) -> Self {
        self.node_cap = Some(cap);
        self
    }

    pub fn with_value_cap(mut self, cap: u64) -> Self {
        self.value_cap = Some(cap);
        self
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.time_budget.is_nan() || self.time_budget <= 0.0 {
            return Err(crate::Error::InvalidConfig("time budget must be positive"));
        }
        Ok(())
    }
}

impl Default for SearchLimits {
    /// 2400 s, the per-instance limit used for the exact counts.
    fn default() -> Self {
        SearchLimits::new(2400.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitHit {
    None,
    Time,
    NodeCap,
    ValueCap,
}

/// A counted quantity. When `exact` is false the value is a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub value: u64,
    pub exact: bool,
    pub limit_hit: LimitHit,
    pub nodes: u64,
    #[serde(rename = "elapsed_s")]
    pub elapsed: f64,
}

/// Checks node and time limits; the clock is polled every 1024 nodes.
pub(crate) struct Budget<'a> {
    limits: SearchLimits,
    clock: &'a dyn Clock,
    start: f64,
    pub nodes: u64,
    pub hit: LimitHit,
}

impl<'a> Budget<'a> {
    pub fn new(limits: SearchLimits, clock: &'a dyn Clock) -> Self {
        let start = clock.elapsed_secs();
        Budget { limits, clock, start, nodes: 0, hit: LimitHit::None }
    }

    /// Counts one node; returns false once a limit has been reached.
    #[inline]
    pub fn tick(&mut self) -> bool {
        if self.hit != LimitHit::None {
            return false;
        }
        self.nodes += 1;
        if let Some(cap) = self.limits.node_cap {
            if self.nodes > cap {
                self.hit = LimitHit::NodeCap;
                return false;
            }
        }
        if self.nodes & 1023 == 0 && self.elapsed() > self.limits.time_budget {
            self.hit = LimitHit::Time;
            return false;
        }
        true
    }

    /// Records a counted value; returns false once it exceeds the value cap.
    #[inline]
    pub fn value_ok(&mut self, value: u64) -> bool {
        match self.limits.value_cap {
            Some(cap) if value > cap => {
                self.hit = LimitHit::ValueCap;
                false
            }
            _ => true,
        }
    }

    #[inline]
    pub fn stopped(&self) -> bool {
        self.hit != LimitHit::None
    }

    pub fn elapsed(&self) -> f64 {
        self.clock.elapsed_secs() - self.start
    }

    pub fn finish(&self, value: u64) -> CountResult {
        CountResult {
            value,
            exact: self.hit == LimitHit::None,
            limit_hit: self.hit,
            nodes: self.nodes,
            elapsed: self.elapsed(),
        }
    }
}
