use crate::error::{Error, Result};

/// Population smoothing used when the two growing clusters compete for the
/// next vertex. `alpha = 0` compares raw edge weights; `alpha = 1` scales
/// each weight by its cluster's share of the combined population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingConfig {
    alpha: f64,
}

impl SmoothingConfig {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(SmoothingConfig { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        SmoothingConfig { alpha: 0.0 }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in [0, 1], got {alpha}")))
    }
}

/// Smoothed weights of the two heap tops:
///
/// ```text
/// w1' = pop1 / (pop1 + alpha * pop2) * w1
/// w2' = pop2 / (alpha * pop1 + pop2) * w2
/// ```
pub fn smoothed_weights(w1: f64, w2: f64, pop1: usize, pop2: usize, alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if pop1 == 0 || pop2 == 0 {
        return Err(Error::domain("cluster populations must be at least 1"));
    }
    Ok(smooth(w1, w2, pop1, pop2, alpha))
}

#[inline]
pub(crate) fn smooth(w1: f64, w2: f64, pop1: usize, pop2: usize, alpha: f64) -> (f64, f64) {
    let (p1, p2) = (pop1 as f64, pop2 as f64);
    (p1 / (p1 + alpha * p2) * w1, p2 / (alpha * p1 + p2) * w2)
}
