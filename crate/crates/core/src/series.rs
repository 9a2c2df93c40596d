//! Uniformly sampled real time series: window averaging and oscillation
//! measurement.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::{Error, Result};

/// Minimum number of samples accepted by [`measure_oscillation`].
pub const MIN_OSCILLATION_SAMPLES: usize = 32;
/// Lowest detectable frequency, in cycles over the series span.
pub const MIN_OSCILLATION_PERIODS: f64 = 4.0;
/// A spectral peak must exceed the median bin magnitude by this factor.
pub const PEAK_TO_MEDIAN: f64 = 3.0;

#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    /// Samples at `t0 + k·dt`.
    pub fn uniform(t0: f64, dt: f64, values: Vec<f64>) -> Self {
        assert!(values.len() < 2 || dt > 0.0, "spacing must be positive");
        let times = (0..values.len()).map(|k| t0 + k as f64 * dt).collect();
        Self { times, values }
    }

    /// Validates that `times` is strictly increasing with uniform spacing.
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::SeriesTooShort(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() >= 2 {
            let dt = times[1] - times[0];
            let span = times[times.len() - 1] - times[0];
            let uniform = times.windows(2).all(|w| {
                let d = w[1] - w[0];
                d > 0.0 && (d - dt).abs() <= 1e-9 * span.abs().max(dt)
            });
            if !uniform {
                return Err(Error::SeriesTooShort(
                    "times must be strictly increasing and uniformly spaced".into(),
                ));
            }
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
        }
    }

    pub fn span(&self) -> f64 {
        match (self.times.first(), self.times.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    /// Sub-series whose times fall in `[t_lo, t_hi]`.
    pub fn restricted(&self, t_lo: f64, t_hi: f64) -> Self {
        let (times, values) = self
            .times
            .iter()
            .zip(&self.values)
            .filter(|(&t, _)| t >= t_lo && t <= t_hi)
            .map(|(&t, &v)| (t, v))
            .unzip();
        Self { times, values }
    }

    /// Least-squares line `(intercept, slope)`.
    pub fn linear_fit(&self) -> (f64, f64) {
        let n = self.len() as f64;
        if self.len() < 2 {
            return (self.values.first().copied().unwrap_or(0.0), 0.0);
        }
        let tm = self.times.iter().sum::<f64>() / n;
        let vm = self.values.iter().sum::<f64>() / n;
        let (mut stt, mut stv) = (0.0, 0.0);
        for (&t, &v) in self.times.iter().zip(&self.values) {
            stt += (t - tm) * (t - tm);
            stv += (t - tm) * (v - vm);
        }
        let slope = stv / stt;
        (vm - slope * tm, slope)
    }
}

/// Centered top-hat average of width `window`.
///
/// The series is treated as piecewise linear between samples and integrated
/// exactly over [t − W/2, t + W/2], so the effective width is `window`
/// even when it is not a whole number of spacings. Only sample instants whose
/// full window lies inside the series are kept.
pub fn sliding_average(series: &TimeSeries, window: f64) -> Result<TimeSeries> {
    let dt = series.spacing();
    if series.len() < 2 || !(window >= 2.0 * dt) {
        return Err(Error::WindowTooShort {
            window,
            min: 2.0 * dt,
        });
    }
    let x = series.values();
    let n = x.len();
    // cumulative[k] = ∫ from t_0 to t_k of the linear interpolant.
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = 0.0;
    cumulative.push(0.0);
    for k in 1..n {
        acc += 0.5 * dt * (x[k - 1] + x[k]);
        cumulative.push(acc);
    }
    let integral_to = |u: f64| -> f64 {
        // u is a fractional sample index in [0, n − 1].
        let k = (u.floor() as usize).min(n - 2);
        let frac = u - k as f64;
        cumulative[k] + dt * (frac * x[k] + 0.5 * frac * frac * (x[k + 1] - x[k]))
    };
    let half = 0.5 * window / dt;
    let first = (half - 1e-9).ceil().max(0.0) as usize;
    if first >= n || n - 1 < 2 * first {
        return Err(Error::SeriesTooShort(format!(
            "window {window} does not fit in a series spanning {}",
            series.span()
        )));
    }
    let last = n - 1 - first;
    let values = (first..=last)
        .map(|i| {
            let lo = (i as f64 - half).max(0.0);
            let hi = (i as f64 + half).min((n - 1) as f64);
            (integral_to(hi) - integral_to(lo)) / window
        })
        .collect();
    Ok(TimeSeries::uniform(series.times()[first], dt, values))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Oscillation {
    /// Angular frequency; 0 when nothing was detected.
    pub omega: f64,
    pub amplitude: f64,
    pub detected: bool,
}

impl Oscillation {
    fn none() -> Self {
        Self {
            omega: 0.0,
            amplitude: 0.0,
            detected: false,
        }
    }
}

/// Dominant oscillation after removing the linear trend.
///
/// The detrended series is Hann-windowed and zero-padded before the FFT; the
/// peak bin is refined by a parabola through the log-magnitudes of it and its
/// neighbours. Amplitude comes from a least-squares fit of
/// `c0 + c1·t + A·cos ωt + B·sin ωt` at the refined frequency.
///
/// Nothing is reported when the peak is under `PEAK_TO_MEDIAN` times the
/// median bin, or when the fitted amplitude is at most `noise_floor`.
pub fn measure_oscillation(series: &TimeSeries, noise_floor: f64) -> Result<Oscillation> {
    if series.len() < MIN_OSCILLATION_SAMPLES {
        return Err(Error::SeriesTooShort(format!(
            "{} samples, at least {MIN_OSCILLATION_SAMPLES} required",
            series.len()
        )));
    }
    let n = series.len();
    let dt = series.spacing();
    let (c0, c1) = series.linear_fit();
    let padded = (4 * n).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); padded];
    for (k, (&t, &v)) in series.times().iter().zip(series.values()).enumerate() {
        let hann = 0.5 - 0.5 * (TAU * k as f64 / (n - 1) as f64).cos();
        buf[k] = Complex64::new((v - c0 - c1 * t) * hann, 0.0);
    }
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);
    let mags: Vec<f64> = buf[..=padded / 2].iter().map(|z| z.norm()).collect();

    // Only frequencies with at least MIN_OSCILLATION_PERIODS cycles over the
    // span; below that the detrend and window leakage dominate.
    let first_bin = ((MIN_OSCILLATION_PERIODS * padded as f64 / (n - 1) as f64).ceil() as usize).max(1);
    if first_bin + 2 >= mags.len() {
        return Ok(Oscillation::none());
    }
    let (peak, &peak_mag) = mags
        .iter()
        .enumerate()
        .skip(first_bin)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("band is non-empty");
    let mut sorted: Vec<f64> = mags[first_bin..].to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    if !(peak_mag > 0.0 && peak_mag >= PEAK_TO_MEDIAN * median) || peak == first_bin || peak + 1 >= mags.len() {
        return Ok(Oscillation::none());
    }

    let ln = |m: f64| m.max(f64::MIN_POSITIVE).ln();
    let (l, c, r) = (ln(mags[peak - 1]), ln(mags[peak]), ln(mags[peak + 1]));
    let denom = l - 2.0 * c + r;
    let delta = if denom < 0.0 { 0.5 * (l - r) / denom } else { 0.0 };
    let omega = TAU * (peak as f64 + delta) / (padded as f64 * dt);

    let amplitude = amplitude_at(series, omega);
    if amplitude <= noise_floor {
        return Ok(Oscillation::none());
    }
    Ok(Oscillation {
        omega,
        amplitude,
        detected: true,
    })
}

/// Amplitude √(A² + B²) of the least-squares fit
/// `c0 + c1·t + A·cos ωt + B·sin ωt`.
pub fn amplitude_at(series: &TimeSeries, omega: f64) -> f64 {
    // Center time to keep the normal equations well conditioned.
    let tm = series.times().iter().sum::<f64>() / series.len() as f64;
    let mut ata = [[0.0; 4]; 4];
    let mut atb = [0.0; 4];
    for (&t, &v) in series.times().iter().zip(series.values()) {
        let s = t - tm;
        let row = [1.0, s, (omega * t).cos(), (omega * t).sin()];
        for i in 0..4 {
            atb[i] += row[i] * v;
            for j in 0..4 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    match solve4(ata, atb) {
        Some(c) => c[2].hypot(c[3]),
        None => 0.0,
    }
}

/// Gaussian elimination with partial pivoting.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sampled(n: usize, t_max: f64, f: impl Fn(f64) -> f64) -> TimeSeries {
        let dt = t_max / (n - 1) as f64;
        TimeSeries::uniform(0.0, dt, (0..n).map(|k| f(k as f64 * dt)).collect())
    }

    #[test]
    fn non_uniform_times_rejected() {
        assert!(TimeSeries::new(vec![0.0, 1.0, 3.0], vec![0.0; 3]).is_err());
        assert!(TimeSeries::new(vec![0.0, 1.0, 2.0], vec![0.0; 2]).is_err());
        assert!(TimeSeries::new(vec![0.0, 0.5, 1.0], vec![0.0; 3]).is_ok());
    }

    #[test]
    fn average_of_constant_is_constant() {
        let s = sampled(200, 10.0, |_| 3.25);
        let avg = sliding_average(&s, 1.0).unwrap();
        assert!(avg.values().iter().all(|v| (v - 3.25).abs() < 1e-12));
        assert!(avg.len() < s.len());
    }

    #[test]
    fn full_period_window_cancels_sinusoid() {
        let s = sampled(4096, 50.0, |t| 0.1 * (2.0 * t).sin());
        let avg = sliding_average(&s, PI).unwrap();
        let max = avg.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(max <= 0.002, "{max}");
    }

    #[test]
    fn compton_window_matches_sinc() {
        let s = sampled(4096, 50.0, |t| 0.1 * (2.0 * t).sin());
        let avg = sliding_average(&s, 1.0).unwrap();
        let amp = amplitude_at(&avg, 2.0);
        let want = 0.1 * 1f64.sin();
        assert!((amp - want).abs() / want <= 0.02, "{amp} vs {want}");
    }

    #[test]
    fn window_shorter_than_two_spacings_rejected() {
        let s = sampled(101, 10.0, |t| t);
        assert!(matches!(sliding_average(&s, 0.15), Err(Error::WindowTooShort { .. })));
        assert!(sliding_average(&s, 0.2).is_ok());
    }

    #[test]
    fn synthetic_sinusoid_is_measured() {
        let s = sampled(512, 100.0, |t| 0.1 * (2.0 * t).sin());
        let o = measure_oscillation(&s, 1e-9).unwrap();
        assert!(o.detected);
        assert!((o.omega - 2.0).abs() / 2.0 <= 0.01, "{}", o.omega);
        assert!((o.amplitude - 0.1).abs() / 0.1 <= 0.02, "{}", o.amplitude);
    }

    #[test]
    fn pure_drift_has_no_oscillation() {
        let s = sampled(512, 100.0, |t| 0.3 * t);
        let o = measure_oscillation(&s, 1e-9).unwrap();
        assert!(!o.detected);
        assert_eq!(o.amplitude, 0.0);
    }

    #[test]
    fn short_series_rejected() {
        let s = sampled(16, 10.0, |t| t.sin());
        assert!(measure_oscillation(&s, 0.0).is_err());
    }

    #[test]
    fn linear_fit_recovers_line() {
        let s = sampled(50, 5.0, |t| 1.5 - 0.25 * t);
        let (c0, c1) = s.linear_fit();
        assert!((c0 - 1.5).abs() < 1e-12 && (c1 + 0.25).abs() < 1e-12);
    }
}
