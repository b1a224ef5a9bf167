//! Revival structure of the survival probability for equally spaced spectra.
//!
//! With `E_m = eps0 + (m/M) D` and symmetric overlaps `w_m = w_-m`, the
//! survival amplitude is, up to the global phase `exp(-i eps0 t)`, the real
//! cosine series `w_0 + sum_m 2 w_m cos(m D t / M)`. It is periodic with
//! period `T = 2 pi M / D`. For the flat profile it is the normalized
//! Dirichlet kernel, sharply peaked at multiples of `T`.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::SurvivalSeries;
use crate::hermitian::SpectralDecomposition;
use crate::inverse::SpectralProfile;
use crate::scalar::Real;

/// Index ranges of consecutive sorted eigenvalues that differ by at most `tol`.
pub fn cluster_ranges<T: Real>(sorted: &[T], tol: T) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > tol {
            if start < i {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

/// Distinct energy levels with summed weights.
///
/// Degenerate eigenvectors are only defined up to a rotation within their
/// eigenspace; the summed weight per level is basis-independent.
pub fn aggregate_levels<T: Real>(eigenvalues: &[T], weights: &[T], tol: T) -> Vec<(T, T)> {
    cluster_ranges(eigenvalues, tol)
        .into_iter()
        .map(|r| {
            let len = T::from_usize(r.len()).unwrap();
            let e = eigenvalues[r.clone()].iter().fold(T::zero(), |a, &x| a + x) / len;
            let w = weights[r].iter().fold(T::zero(), |a, &x| a + x);
            (e, w)
        })
        .collect()
}

/// `sqrt(P(t)) = |dc + sum_m cosine_coeffs[m-1] cos(m base_frequency t)|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FourierExpansion<T> {
    pub dc: T,
    pub cosine_coeffs: Vec<T>,
    pub base_frequency: T,
}

impl<T: Real> FourierExpansion<T> {
    pub fn period(&self) -> T {
        T::TAU() / self.base_frequency
    }

    pub fn total_weight(&self) -> T {
        self.cosine_coeffs.iter().fold(self.dc, |a, &c| a + c)
    }
}

/// Maps a symmetric profile to its cosine series.
pub fn fourier_coefficients<T: Real>(p: &SpectralProfile<T>) -> Result<FourierExpansion<T>> {
    for m in 1..=p.m_half() {
        let dev = (p.overlap(m as i64) - p.overlap(-(m as i64))).abs();
        if !(dev < T::normalization_tolerance()) {
            return Err(Error::AsymmetricProfile {
                m,
                deviation: dev.as_f64(),
            });
        }
    }
    Ok(FourierExpansion {
        dc: p.overlap(0),
        cosine_coeffs: (1..=p.m_half() as i64)
            .map(|m| p.overlap(m) + p.overlap(-m))
            .collect(),
        base_frequency: p.d_width() / T::from_usize(p.m_half()).unwrap(),
    })
}

/// Cosine series read off a numerical decomposition whose levels lie on the
/// grid `eps0 + (m/M) D`.
///
/// Levels are aggregated first, so degenerate eigenspaces (dark states)
/// contribute their summed weight. Levels off the grid, or an asymmetric
/// weight distribution, are errors.
pub fn fourier_from_decomposition<T: Real>(
    d: &SpectralDecomposition<T>,
    m_half: usize,
    eps0: T,
    d_width: T,
) -> Result<FourierExpansion<T>> {
    if m_half == 0 || !(d_width > T::zero()) {
        return Err(Error::InvalidProfile(
            "m_half must be >= 1 and d_width > 0".into(),
        ));
    }
    let tol = T::cluster_tolerance();
    let mh = T::from_usize(m_half).unwrap();
    let mut weights = vec![T::zero(); 2 * m_half + 1];
    for (e, w) in aggregate_levels(d.eigenvalues(), d.zero_overlaps(), tol) {
        let x = (e - eps0) / d_width * mh;
        let m = x.round();
        if (x - m).abs() * d_width / mh > tol || m.abs() > mh {
            if w > tol {
                return Err(Error::InvalidProfile(format!(
                    "level {e} with weight {w} is not on the equally spaced grid"
                )));
            }
            continue;
        }
        let idx = (m.to_i64().unwrap() + m_half as i64) as usize;
        weights[idx] += w;
    }
    for m in 1..=m_half {
        let dev = (weights[m_half + m] - weights[m_half - m]).abs();
        if dev > tol {
            return Err(Error::AsymmetricProfile {
                m,
                deviation: dev.as_f64(),
            });
        }
    }
    Ok(FourierExpansion {
        dc: weights[m_half],
        cosine_coeffs: (1..=m_half)
            .map(|m| weights[m_half + m] + weights[m_half - m])
            .collect(),
        base_frequency: d_width / mh,
    })
}

pub fn sqrt_survival_from_fourier<T: Real>(f: &FourierExpansion<T>, t: T) -> T {
    f.cosine_coeffs
        .iter()
        .enumerate()
        .fold(f.dc, |acc, (i, &c)| {
            let m = T::from_usize(i + 1).unwrap();
            acc + c * (m * f.base_frequency * t).cos()
        })
        .abs()
}

/// `T = 2 pi M / D`.
pub fn revival_period<T: Real>(m_half: usize, d_width: T) -> T {
    T::TAU() * T::from_usize(m_half).unwrap() / d_width
}

/// Flat-profile survival in closed form,
/// `[sin((2M+1) theta / 2) / ((2M+1) sin(theta / 2))]^2`, `theta = D t / M`.
pub fn dirichlet_survival<T: Real>(m_half: usize, d_width: T, t: T) -> T {
    let n = T::from_usize(2 * m_half + 1).unwrap();
    let mh = T::from_usize(m_half).unwrap();
    let tau = T::TAU();
    let half = T::lit(0.5);
    // kernel is 2 pi periodic in theta; reduce to (-pi, pi]
    let mut theta = (d_width * t / mh) % tau;
    if theta > T::PI() {
        theta -= tau;
    } else if theta <= -T::PI() {
        theta += tau;
    }
    let denom = (theta * half).sin();
    let amp = if denom.abs() < T::lit(1e-3) {
        // near the removable singularity sum the cosines directly
        let s = (1..=m_half).fold(T::zero(), |acc, m| {
            acc + (T::from_usize(m).unwrap() * theta).cos()
        });
        (T::one() + s + s) / n
    } else {
        (n * theta * half).sin() / (n * denom)
    };
    (amp * amp).min(T::one())
}

/// Threshold crossings and revival window of a survival trace.
///
/// * `decay_time`: first time `P` drops below `threshold`.
/// * `revival_time`: first time after the decay at which `P` rises above
///   `1 - threshold`.
/// * `post_decay_max`: largest sample strictly between the two (or after
///   the decay when there is no revival; the global maximum when there is
///   no decay).
/// * `window_fraction`: fraction of `[0, revival_time]` spent above
///   `threshold`.
///
/// Crossing times are linearly interpolated between samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EmissionMetrics<T> {
    pub threshold: T,
    pub decay_time: Option<T>,
    pub revival_time: Option<T>,
    pub post_decay_max: T,
    pub window_fraction: Option<T>,
}

impl<T: Real> EmissionMetrics<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metrics serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub const DEFAULT_THRESHOLD: f64 = 0.01;

fn crossing<T: Real>(t0: T, p0: T, t1: T, p1: T, level: T) -> T {
    if p1 == p0 {
        return t1;
    }
    t0 + (t1 - t0) * (level - p0) / (p1 - p0)
}

pub fn emission_metrics<T: Real>(
    s: &SurvivalSeries<T>,
    threshold: T,
) -> Result<EmissionMetrics<T>> {
    if !(threshold > T::zero() && threshold < T::one()) {
        return Err(Error::ThresholdOutOfRange(threshold.as_f64()));
    }
    let grid = s.grid();
    if grid.t_start().abs() > grid.step() * T::lit(1e-9) {
        return Err(Error::InvalidSeries(format!(
            "series must start at t = 0, starts at {}",
            grid.t_start()
        )));
    }
    let p = s.values();
    let t = |i: usize| grid.time(i);
    let upper = T::one() - threshold;

    let Some(i_decay) = p.iter().position(|&x| x < threshold) else {
        let max = p.iter().fold(T::zero(), |a, &x| a.max(x));
        return Ok(EmissionMetrics {
            threshold,
            decay_time: None,
            revival_time: None,
            post_decay_max: max,
            window_fraction: None,
        });
    };
    let decay_time = if i_decay == 0 {
        t(0)
    } else {
        crossing(
            t(i_decay - 1),
            p[i_decay - 1],
            t(i_decay),
            p[i_decay],
            threshold,
        )
    };

    let i_revival = (i_decay + 1..p.len()).find(|&j| p[j] > upper);
    let end = i_revival.unwrap_or(p.len());
    let post_decay_max = p[i_decay..end].iter().fold(T::zero(), |a, &x| a.max(x));

    let Some(j) = i_revival else {
        return Ok(EmissionMetrics {
            threshold,
            decay_time: Some(decay_time),
            revival_time: None,
            post_decay_max,
            window_fraction: None,
        });
    };
    let revival_time = crossing(t(j - 1), p[j - 1], t(j), p[j], upper);

    // time above threshold on [0, revival_time], piecewise linear
    let mut above = T::zero();
    for k in 0..j {
        let (ta, pa) = (t(k), p[k]);
        let (mut tb, mut pb) = (t(k + 1), p[k + 1]);
        if k + 1 == j {
            pb = upper;
            tb = revival_time;
        }
        above += match (pa > threshold, pb > threshold) {
            (true, true) => tb - ta,
            (false, false) => T::zero(),
            (true, false) => crossing(ta, pa, tb, pb, threshold) - ta,
            (false, true) => tb - crossing(ta, pa, tb, pb, threshold),
        };
    }
    Ok(EmissionMetrics {
        threshold,
        decay_time: Some(decay_time),
        revival_time: Some(revival_time),
        post_decay_max,
        window_fraction: Some(above / revival_time),
    })
}

/// Location of the revival maximum: the first local maximum of `P` at or
/// after `metrics.revival_time`, refined by a parabola through the three
/// samples around it.
pub fn revival_peak_time<T: Real>(
    s: &SurvivalSeries<T>,
    metrics: &EmissionMetrics<T>,
) -> Option<T> {
    let revival = metrics.revival_time?;
    let grid = s.grid();
    let p = s.values();
    let start = (0..p.len()).find(|&i| grid.time(i) >= revival)?;
    let mut i = start;
    while i + 1 < p.len() && p[i + 1] >= p[i] {
        i += 1;
    }
    if i == 0 || i + 1 >= p.len() {
        return Some(grid.time(i));
    }
    let (a, b, c) = (p[i - 1], p[i], p[i + 1]);
    let curvature = a - b - b + c;
    let offset = if curvature < T::zero() {
        T::lit(0.5) * (a - c) / curvature
    } else {
        T::zero()
    };
    Some(grid.time(i) + offset * grid.step())
}
