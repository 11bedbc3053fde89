//! Time evolution `U(t) = e^{itM} = sum_r e^{it theta_r} E_r`.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MatrixKind;
use crate::spectral::SpectralDecomposition;

pub fn transition_matrix(dec: &SpectralDecomposition, t: f64) -> DMatrix<Complex64> {
    let n = dec.order();
    let mut u = DMatrix::<Complex64>::zeros(n, n);
    for (theta, e) in dec.thetas().iter().zip(dec.idempotents()) {
        let phase = Complex64::from_polar(1.0, t * theta);
        u.zip_apply(e, |z, x| *z += phase * x);
    }
    u
}

/// The single entry `U(t)_{v,u}`.
pub fn amplitude(dec: &SpectralDecomposition, u: usize, v: usize, t: f64) -> Complex64 {
    dec.thetas()
        .iter()
        .zip(dec.idempotents())
        .map(|(theta, e)| Complex64::from_polar(e[(v, u)], t * theta))
        .sum()
}

pub fn probability(dec: &SpectralDecomposition, u: usize, v: usize, t: f64) -> f64 {
    amplitude(dec, u, v, t).norm_sqr()
}

/// `2^{k+1} rho(M)^k`, a bound on the `k`-th time derivative of any entry
/// of `U(t)`.
pub fn sensitivity_bound(dec: &SpectralDecomposition, k: u32) -> f64 {
    2f64.powi(k as i32 + 1) * dec.spectral_radius().powi(k as i32)
}

/// `|U(t)_{v,u}|^2` on the uniform grid `t_k = k t_max / (steps - 1)`.
#[derive(Debug, Clone, Serialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub u: usize,
    pub v: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<MatrixKind>,
}

impl TimeSeries {
    /// Grid index and value of the largest sample.
    pub fn argmax(&self) -> (usize, f64) {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, p)| {
                if p > best.1 {
                    (i, p)
                } else {
                    best
                }
            })
    }

    pub fn max(&self) -> f64 {
        self.argmax().1
    }

    pub fn step(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * self.times.len() + 16);
        out.push_str("t,probability\n");
        for (t, p) in self.times.iter().zip(&self.values) {
            let _ = writeln!(out, "{},{}", sig12(*t), sig12(*p));
        }
        out
    }
}

/// Rounds to 12 significant digits and prints the shortest representation.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded.abs() >= 1e-5 && rounded.abs() < 1e15 {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn probability_series(
    dec: &SpectralDecomposition,
    u: usize,
    v: usize,
    t_max: f64,
    steps: usize,
) -> Result<TimeSeries> {
    let n = dec.order();
    if u >= n || v >= n {
        return Err(Error::BadParam(format!(
            "vertex out of range for order {n}"
        )));
    }
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::BadParam(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    if steps < 2 {
        return Err(Error::BadParam(format!("steps must be >= 2, got {steps}")));
    }
    let h = t_max / (steps - 1) as f64;
    let times: Vec<f64> = (0..steps).map(|k| k as f64 * h).collect();
    let values = times
        .par_iter()
        .map(|&t| probability(dec, u, v, t))
        .collect();
    Ok(TimeSeries {
        times,
        values,
        u,
        v,
        kind: None,
    })
}

/// Golden-section search for a local maximum of `|U(t)_{v,u}|^2` in `[lo, hi]`.
pub fn refine_max(dec: &SpectralDecomposition, u: usize, v: usize, lo: f64, hi: f64) -> (f64, f64) {
    let f = |t: f64| probability(dec, u, v, t);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// Refines the grid maximum of `series` to an empirical peak time.
pub fn empirical_peak(dec: &SpectralDecomposition, series: &TimeSeries) -> (f64, f64) {
    let (i, _) = series.argmax();
    let h = series.step();
    let last = *series.times.last().unwrap_or(&0.0);
    let lo = (series.times[i] - h).max(0.0);
    let hi = (series.times[i] + h).min(last);
    if hi <= lo {
        return (series.times[i], series.values[i]);
    }
    refine_max(dec, series.u, series.v, lo, hi)
}
