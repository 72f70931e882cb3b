//! Time-crystal diagnostics on stroboscopic `j_x` series.

use thiserror::Error;

use crate::series::StroboscopicSeries;

/// Periods excluded from the doubling score while oscillations set in.
pub const TRANSIENT_PERIODS: u64 = 5;

/// Samples smaller than this do not count as a sign alternation.
pub const DOUBLING_MAGNITUDE_FLOOR: f64 = 1e-3;

/// Score at or above which a period-doubled response is declared present.
pub const DOUBLING_THRESHOLD: f64 = 0.95;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("series has no sample at period {missing}")]
    SeriesTooShort { missing: u64 },
    #[error("initial magnetization is zero")]
    ZeroInitialMagnetization,
    #[error("lifetime window must be a positive whole number of periods (T_i = {t_i}, Δ_T = {delta_t}, T = {period})")]
    InvalidWindow { t_i: f64, delta_t: f64, period: f64 },
    #[error("threshold fraction {0} outside (0, 1)")]
    InvalidThreshold(f64),
}

/// Window of the lifetime average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeParams {
    /// Window start `T_i` (time units).
    pub t_i: f64,
    /// Window length `Δ_T` (time units).
    pub delta_t: f64,
    /// Drive period `T`.
    pub period: f64,
}

impl LifetimeParams {
    /// `T_i = 20T`, `Δ_T = 80T`.
    pub fn standard(period: f64) -> Self {
        Self::from_periods(20, 80, period)
    }

    pub fn from_periods(start: u64, len: u64, period: f64) -> Self {
        Self { t_i: start as f64 * period, delta_t: len as f64 * period, period }
    }

    /// `(first period, number of periods)` of the window.
    pub fn window_periods(&self) -> Result<(u64, u64), MetricsError> {
        let err = MetricsError::InvalidWindow { t_i: self.t_i, delta_t: self.delta_t, period: self.period };
        if !(self.period > 0.0) {
            return Err(err);
        }
        let start = self.t_i / self.period;
        let len = self.delta_t / self.period;
        let whole = |x: f64| x >= 0.0 && (x - x.round()).abs() < 1e-9 * x.max(1.0);
        if !whole(start) || !whole(len) || len.round() < 1.0 {
            return Err(err);
        }
        Ok((start.round() as u64, len.round() as u64))
    }

    /// End of the window in periods (exclusive).
    pub fn end_period(&self) -> Result<u64, MetricsError> {
        let (s, l) = self.window_periods()?;
        Ok(s + l)
    }
}

/// `L_t = (1/Δ_T) Σ_t |j_x(t)|/|j_x(0)| · T` over the samples
/// `t = T_i, T_i + T, …, T_i + Δ_T − T`.
///
/// `Δ_T` in the normalization counts driving periods, and the window is
/// left-closed and right-open, so a perfect time crystal gives exactly
/// `L_t = T`.
pub fn lifetime(series: &StroboscopicSeries, params: &LifetimeParams, jx0: f64) -> Result<f64, MetricsError> {
    if jx0 == 0.0 || !jx0.is_finite() {
        return Err(MetricsError::ZeroInitialMagnetization);
    }
    let (start, len) = params.window_periods()?;
    let mut sum = 0.0;
    for n in start..start + len {
        let v = series.at(n).ok_or(MetricsError::SeriesTooShort { missing: n })?;
        sum += v.abs() / jx0.abs();
    }
    Ok(sum * params.period / len as f64)
}

/// `L_t·|j_x(0)|·Δ_T/T`, the quantity plotted against entanglement.
pub fn scaled_lifetime(lifetime: f64, jx0: f64, params: &LifetimeParams) -> f64 {
    lifetime * jx0.abs() * params.delta_t / params.period
}

/// Largest `t = nT` such that `|j_x(t')| ≥ f·|j_x(0)|` for every sample
/// `t' ≤ t`.
pub fn lifetime_threshold(series: &StroboscopicSeries, threshold_fraction: f64) -> Result<f64, MetricsError> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(MetricsError::InvalidThreshold(threshold_fraction));
    }
    let jx0 = series.at(0).ok_or(MetricsError::SeriesTooShort { missing: 0 })?;
    if jx0 == 0.0 {
        return Err(MetricsError::ZeroInitialMagnetization);
    }
    let floor = threshold_fraction * jx0.abs();
    let mut last_ok = 0;
    for (n, v) in series.iter() {
        if v.abs() < floor {
            break;
        }
        last_ok = n;
    }
    Ok(last_ok as f64 * series.period)
}

/// Fraction of consecutive sample pairs within periods `[from, to]` that
/// have opposite signs with both magnitudes above the floor.
pub fn doubling_score_between(series: &StroboscopicSeries, from: u64, to: u64) -> f64 {
    let samples: Vec<(u64, f64)> = series.iter().filter(|&(n, _)| n >= from && n <= to).collect();
    let mut pairs = 0usize;
    let mut alternating = 0usize;
    for w in samples.windows(2) {
        let ((n0, a), (n1, b)) = (w[0], w[1]);
        if n1 != n0 + 1 {
            continue;
        }
        pairs += 1;
        if a * b < 0.0 && a.abs() > DOUBLING_MAGNITUDE_FLOOR && b.abs() > DOUBLING_MAGNITUDE_FLOOR {
            alternating += 1;
        }
    }
    if pairs == 0 { 0.0 } else { alternating as f64 / pairs as f64 }
}

/// Doubling score over everything after the transient.
pub fn period_doubling_score(series: &StroboscopicSeries) -> f64 {
    doubling_score_between(series, TRANSIENT_PERIODS, u64::MAX)
}

pub fn is_period_doubled(score: f64) -> bool {
    score >= DOUBLING_THRESHOLD
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alternating(len: usize, amp: impl Fn(usize) -> f64) -> StroboscopicSeries {
        let values = (0..len).map(|n| if n % 2 == 0 { amp(n) } else { -amp(n) }).collect();
        StroboscopicSeries::from_values("jx", 2.0 * std::f64::consts::PI, values)
    }

    #[test]
    fn perfect_crystal_has_lifetime_one_period() {
        let s = alternating(151, |_| 0.5);
        let p = LifetimeParams::standard(s.period);
        let lt = lifetime(&s, &p, 0.5).unwrap();
        assert!((lt - s.period).abs() < 1e-12);
        assert!((scaled_lifetime(lt, 0.5, &p) - 40.0 * s.period).abs() < 1e-10);
    }

    #[test]
    fn thermalized_series_has_zero_lifetime() {
        let mut values = vec![0.0; 120];
        values[0] = 0.5;
        let s = StroboscopicSeries::from_values("jx", 1.0, values);
        assert_eq!(lifetime(&s, &LifetimeParams::standard(1.0), 0.5).unwrap(), 0.0);
    }

    #[test]
    fn exponential_envelope_matches_geometric_sum() {
        let period = 2.0 * std::f64::consts::PI;
        let tau = 30.0 * period;
        let s = alternating(120, |n| 0.5 * (-(n as f64) * period / tau).exp());
        let p = LifetimeParams::standard(period);
        // Closed form: (T/80) · q^{20} (1 − q^{80}) / (1 − q), q = e^{−T/τ}.
        let q = (-period / tau).exp();
        let expected = period / 80.0 * q.powi(20) * (1.0 - q.powi(80)) / (1.0 - q);
        let lt = lifetime(&s, &p, 0.5).unwrap();
        assert!((lt - expected).abs() < 1e-12, "{lt} vs {expected}");
    }

    #[test]
    fn lifetime_depends_only_on_ratio_and_ignores_sign() {
        let s = alternating(120, |n| 0.4 / (1.0 + 0.01 * n as f64));
        let p = LifetimeParams::standard(1.0);
        let base = lifetime(&s, &p, 0.4).unwrap();
        let flipped = StroboscopicSeries::from_values("jx", 1.0, s.values().iter().map(|v| -v).collect());
        assert!((lifetime(&flipped, &p, -0.4).unwrap() - base).abs() < 1e-15);
        let scaled = StroboscopicSeries::from_values("jx", 1.0, s.values().iter().map(|v| 3.0 * v).collect());
        assert!((lifetime(&scaled, &p, 1.2).unwrap() - base).abs() < 1e-14);
        assert!(base >= 0.0 && base <= 1.0 + 1e-12);
    }

    #[test]
    fn lifetime_errors() {
        let s = alternating(50, |_| 0.5);
        let p = LifetimeParams::standard(s.period);
        assert_eq!(lifetime(&s, &p, 0.5), Err(MetricsError::SeriesTooShort { missing: 50 }));
        assert_eq!(lifetime(&s, &p, 0.0), Err(MetricsError::ZeroInitialMagnetization));
        let bad = LifetimeParams { t_i: 1.5, delta_t: 80.0, period: 1.0 };
        assert!(matches!(lifetime(&s, &bad, 0.5), Err(MetricsError::InvalidWindow { .. })));
    }

    #[test]
    fn threshold_lifetime() {
        let s = alternating(151, |_| 0.5);
        assert!((lifetime_threshold(&s, 0.5).unwrap() - 150.0 * s.period).abs() < 1e-9);
        let dropping = alternating(100, |n| if n < 40 { 0.5 } else { 0.1 });
        assert!((lifetime_threshold(&dropping, 0.5).unwrap() - 39.0 * s.period).abs() < 1e-9);
        assert!(lifetime_threshold(&s, 1.0).is_err());
        assert!(lifetime_threshold(&s, 0.0).is_err());
    }

    #[test]
    fn doubling_score_cases() {
        assert_eq!(period_doubling_score(&alternating(40, |_| 0.3)), 1.0);
        let constant = StroboscopicSeries::from_values("jx", 1.0, vec![0.3; 40]);
        assert_eq!(period_doubling_score(&constant), 0.0);
        let tiny = alternating(40, |_| 1e-4);
        assert_eq!(period_doubling_score(&tiny), 0.0);
        let s = alternating(101, |_| 0.3);
        assert_eq!(doubling_score_between(&s, 10, 100), 1.0);
        assert!(is_period_doubled(0.95) && !is_period_doubled(0.94));
    }
}
