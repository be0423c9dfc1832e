use serde::Serialize;

use crate::error::{usage, Result};

/// Uniform phase grid from `start` to `end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepGrid {
    start: f64,
    end: f64,
    steps: usize,
}

impl SweepGrid {
    pub fn new(start: f64, end: f64, steps: usize) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() {
            return Err(usage(format!(
                "grid bounds must be finite, got [{start}, {end}]"
            )));
        }
        if steps < 2 {
            return Err(usage(format!("grid needs at least 2 points, got {steps}")));
        }
        if end <= start {
            return Err(usage(format!("grid end {end} must exceed start {start}")));
        }
        Ok(Self { start, end, steps })
    }

    /// Grid of `steps` points centred on `center` with half-width `half_width`.
    pub fn centered(center: f64, half_width: f64, steps: usize) -> Result<Self> {
        Self::new(center - half_width, center + half_width, steps)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn spacing(&self) -> f64 {
        (self.end - self.start) / (self.steps - 1) as f64
    }

    /// Grid point `i`; the last point is exactly `end`.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.end
        } else {
            self.start + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.point(i)).collect()
    }
}
