use super::fcc::{GradedFcc, LowBand};
use super::segment::FilonRule;
use crate::error::{Error, Result};

/// Which part of the frequency axis carries the signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalClass {
    /// Real time signal: G(−ω) = conj G(ω), g = (1/π) Re ∫_0^W G e^{−iωt} dω.
    Real,
    /// Spectrum supported on ω > 0: g = (1/2π) ∫_0^W G e^{−iωt} dω.
    Analytic,
    /// Both half-axes sampled separately; negative nodes mirror positive ones.
    General,
}

/// Frequency nodes: an optional graded low band on (0, w_c] followed by J
/// equispaced nodes on [lo, W] (lo = w_c when the low band is present).
#[derive(Debug, Clone)]
pub struct FrequencyGrid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub class: SignalClass,
    low: Option<GradedFcc>,
    rule: FilonRule,
}

impl FrequencyGrid {
    pub fn new(lo: f64, hi: f64, count: usize, low: Option<LowBand>, class: SignalClass) -> Result<Self> {
        if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
            return Err(Error::config("frequency", format!("need 0 < lo < W, got [{lo}, {hi}]")));
        }
        let rule = FilonRule::standard();
        if count < rule.min_samples() {
            return Err(Error::config(
                "frequency.J",
                format!("at least {} band nodes are required, got {count}", rule.min_samples()),
            ));
        }
        let low = low.map(|p| GradedFcc::new(lo, p)).transpose()?;
        Ok(FrequencyGrid {
            lo,
            hi,
            count,
            class,
            low,
            rule,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.count - 1) as f64
    }

    pub fn low_band(&self) -> Option<&GradedFcc> {
        self.low.as_ref()
    }

    pub(crate) fn rule(&self) -> &FilonRule {
        &self.rule
    }

    /// Number of low-band nodes strictly below the cutoff.
    pub fn low_count(&self) -> usize {
        self.low.as_ref().map_or(0, |l| l.nodes().len() - 1)
    }

    pub fn positive_count(&self) -> usize {
        self.low_count() + self.count
    }

    /// Positive nodes ascending; for the general class the negated nodes
    /// follow in the same order.
    pub fn nodes(&self) -> Vec<f64> {
        let mut v: Vec<f64> = match &self.low {
            Some(l) => l.nodes()[..l.nodes().len() - 1].to_vec(),
            None => vec![],
        };
        let h = self.spacing();
        v.extend((0..self.count).map(|k| if k + 1 == self.count { self.hi } else { self.lo + k as f64 * h }));
        if self.class == SignalClass::General {
            let neg: Vec<f64> = v.iter().map(|w| -w).collect();
            v.extend(neg);
        }
        v
    }

    pub fn len(&self) -> usize {
        match self.class {
            SignalClass::General => 2 * self.positive_count(),
            _ => self.positive_count(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_layout() {
        let g = FrequencyGrid::new(1.0, 20.0, 101, Some(LowBand::default()), SignalClass::General).unwrap();
        let n = g.nodes();
        assert_eq!(n.len(), g.len());
        let p = g.positive_count();
        assert!(n[..p].windows(2).all(|w| w[1] > w[0]));
        assert_eq!(n[g.low_count()], 1.0);
        assert_eq!(n[p - 1], 20.0);
        assert!(n[..p].iter().zip(&n[p..]).all(|(a, b)| *a == -b));
        assert!(FrequencyGrid::new(5.0, 25.0, 8, None, SignalClass::Real).is_err());
        assert!(FrequencyGrid::new(25.0, 5.0, 100, None, SignalClass::Real).is_err());
    }
}
