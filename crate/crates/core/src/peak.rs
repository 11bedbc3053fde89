//! Deciding peak state transfer from the spectrum.
//!
//! For a symmetric `M` and vertices `u`, `v`, the amplitude `|U(t)_{v,u}|`
//! never exceeds `B(M)_{v,u} = sum_r |(E_r)_{v,u}|`. The bound is attained
//! exactly when every eigenvalue of the mutual support can be written as
//! `theta_r = (a + b_r sqrt(D)) / 2` with a common squarefree `D`, and the
//! integers `c_r = (b_s - b_r) / 2` divided by their gcd `g` are even on the
//! positive support and odd on the negative support. Transfer then happens
//! at every odd multiple of `tau0 = pi / (g sqrt(D))`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_integer::Integer;
use serde::Serialize;

use crate::dynamics;
use crate::error::{Error, Result};
use crate::graph::{MatrixKind, WeightedGraph};
use crate::spectral::{self, SpectralDecomposition, SupportClassification};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakOptions {
    /// `None` picks `1e-8 (1 + rho(M))`.
    pub cluster_tol: Option<f64>,
    pub entry_tol: f64,
    pub recog_tol: f64,
    pub d_max: u64,
    pub pst_tol: f64,
}

impl Default for PeakOptions {
    fn default() -> Self {
        PeakOptions {
            cluster_tol: None,
            entry_tol: spectral::DEFAULT_ENTRY_TOL,
            recog_tol: 1e-6,
            d_max: 1_000_000,
            pst_tol: 1e-7,
        }
    }
}

/// `theta_r = (a + b_r sqrt(D)) / 2`, with every `b_r` of the parity of `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticForm {
    pub a: i64,
    #[serde(rename = "D")]
    pub d: u64,
    pub b: Vec<i64>,
}

impl QuadraticForm {
    pub fn value(&self, r: usize) -> f64 {
        (self.a as f64 + self.b[r] as f64 * (self.d as f64).sqrt()) / 2.0
    }
}

/// Largest-square-free divisor decomposition: returns `D` with `r = k^2 D`.
pub fn squarefree_part(mut r: u64) -> u64 {
    let mut out = 1;
    let mut p = 2u64;
    while p * p <= r {
        let mut e = 0;
        while r.is_multiple_of(p) {
            r /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    out * r
}

fn near_integer(x: f64, tol: f64) -> Option<i64> {
    let k = x.round();
    ((x - k).abs() <= tol && k.abs() < 9.0e15).then_some(k as i64)
}

/// Fits `(a, D, b_r)` to the given eigenvalues.
///
/// All-integer inputs give `D = 1, a = 0, b_r = 2 theta_r`. Otherwise `D`
/// ranges over the squarefree parts of the rounded squared differences
/// `(theta_r - theta_q)^2`, and for each candidate `b` of the first
/// eigenvalue is searched within `|b| sqrt(D) <= 2 max|theta|`, the range
/// allowed when the algebraic conjugate also lies in the support.
pub fn recognize_quadratic(thetas: &[f64], recog_tol: f64, d_max: u64) -> Result<QuadraticForm> {
    if thetas.is_empty() {
        return Err(Error::BadParam("empty eigenvalue list".into()));
    }
    if recog_tol.is_nan() || recog_tol <= 0.0 || d_max == 0 {
        return Err(Error::BadParam(
            "recog_tol must be positive and d_max >= 1".into(),
        ));
    }

    let ints: Option<Vec<i64>> = thetas.iter().map(|&t| near_integer(t, recog_tol)).collect();
    if let Some(ints) = ints {
        return Ok(QuadraticForm {
            a: 0,
            d: 1,
            b: ints.iter().map(|k| 2 * k).collect(),
        });
    }

    let mut candidates = Vec::new();
    for (i, &x) in thetas.iter().enumerate() {
        for &y in &thetas[i + 1..] {
            let diff = x - y;
            let sq = diff * diff;
            // error in sq is about 2 |diff| times the error in diff
            let tol = 4.0 * recog_tol * (1.0 + diff.abs());
            if let Some(r) = near_integer(sq, tol) {
                if r > 0 && r < 1 << 50 {
                    let d = squarefree_part(r as u64);
                    if d > 1 && d <= d_max && !candidates.contains(&d) {
                        candidates.push(d);
                    }
                }
            }
        }
    }
    candidates.sort_unstable();

    let radius = thetas.iter().fold(0.0f64, |m, t| m.max(t.abs())) + recog_tol;
    let mut fits = Vec::new();
    for d in candidates {
        let s = (d as f64).sqrt();
        let limit = (2.0 * radius / s).floor() as i64;
        for b0 in -limit..=limit {
            let Some(a) = near_integer(2.0 * thetas[0] - b0 as f64 * s, 2.0 * recog_tol) else {
                continue;
            };
            if (a - b0).is_odd() {
                continue;
            }
            let b: Option<Vec<i64>> = thetas
                .iter()
                .map(|&t| {
                    let br = ((2.0 * t - a as f64) / s).round() as i64;
                    let back = (a as f64 + br as f64 * s) / 2.0;
                    ((back - t).abs() <= recog_tol && (a - br).is_even()).then_some(br)
                })
                .collect();
            if let Some(b) = b {
                fits.push(QuadraticForm { a, d, b });
            }
        }
    }
    match fits.len() {
        0 => Err(Error::RecognitionFailure(format!(
            "eigenvalues {thetas:?} are not quadratic integers over a common field"
        ))),
        1 => Ok(fits.pop().expect("one fit")),
        _ => Err(Error::AmbiguousFit(
            fits.iter()
                .map(|f| format!("a={}, D={}", f.a, f.d))
                .collect::<Vec<_>>()
                .join("; "),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Peak,
    NoPeak,
    ZeroTransfer,
    NotEligible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TransferClass {
    #[serde(rename = "PerfectST")]
    Perfect,
    #[serde(rename = "PeakOnly")]
    PeakOnly,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakResult {
    pub verdict: Verdict,
    pub u: usize,
    pub v: usize,
    pub support: SupportClassification,
    /// Eigenvalues of the positive and negative supports, descending.
    pub support_pos: Vec<f64>,
    pub support_neg: Vec<f64>,
    /// Quadratic form over the whole support, in descending eigenvalue order.
    pub form: Option<QuadraticForm>,
    /// Index (into the decomposition) of the reference eigenvalue.
    pub s: Option<usize>,
    pub theta_s: Option<f64>,
    pub g: Option<u64>,
    /// 2 when the negative support is empty and only even multiples of
    /// `pi / (g sqrt(D))` satisfy the phase conditions.
    pub tau_multiplier: u64,
    pub tau0: Option<f64>,
    pub phase: Option<f64>,
    pub bound: f64,
    pub probability: Option<f64>,
    pub fidelity_bound: Option<f64>,
    pub reason: Option<String>,
    pub notes: Vec<String>,
}

impl PeakResult {
    fn base(
        u: usize,
        v: usize,
        support: SupportClassification,
        dec: &SpectralDecomposition,
    ) -> Self {
        let pick = |idx: &[usize]| idx.iter().map(|&r| dec.thetas()[r]).collect();
        let mut notes = Vec::new();
        if support.borderline {
            notes.push("an idempotent entry lies within a decade of entry_tol".to_string());
        }
        PeakResult {
            verdict: Verdict::NoPeak,
            u,
            v,
            support_pos: pick(&support.pos),
            support_neg: pick(&support.neg),
            bound: support.bound,
            support,
            form: None,
            s: None,
            theta_s: None,
            g: None,
            tau_multiplier: 1,
            tau0: None,
            phase: None,
            probability: None,
            fidelity_bound: None,
            reason: None,
            notes,
        }
    }

    fn no_peak(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Verdict::NoPeak;
        self.reason = Some(reason.into());
        self
    }

    pub fn is_peak(&self) -> bool {
        self.verdict == Verdict::Peak
    }

    /// Exact form of `tau0`, e.g. `pi/2` or `pi/(3*sqrt(5))`.
    pub fn tau0_exact(&self) -> Option<String> {
        let (form, g) = (self.form.as_ref()?, self.g?);
        if self.verdict != Verdict::Peak {
            return None;
        }
        // reduce tau_multiplier / g
        let k = self.tau_multiplier.gcd(&g);
        let (mult, g) = (self.tau_multiplier / k, g / k);
        let num = if mult == 1 {
            "pi".to_string()
        } else {
            format!("{mult}*pi")
        };
        let den = match (g, form.d) {
            (1, 1) => return Some(num),
            (g, 1) => g.to_string(),
            (1, d) => format!("sqrt({d})"),
            (g, d) => format!("({g}*sqrt({d}))"),
        };
        Some(format!("{num}/{den}"))
    }

    pub fn report(&self) -> PeakReport {
        PeakReport {
            verdict: self.verdict,
            tau0: self.tau0,
            tau0_exact: self.tau0_exact(),
            phase: self.phase,
            bound: self.bound,
            probability: self.probability,
            fidelity_bound: self.fidelity_bound,
            d: self.form.as_ref().map(|f| f.d),
            g: self.g,
            a: self.form.as_ref().map(|f| f.a),
            b_r: self.form.as_ref().map(|f| {
                self.support
                    .support()
                    .iter()
                    .zip(&f.b)
                    .map(|(&r, &b)| (r, b))
                    .collect()
            }),
            support_pos: self.support_pos.clone(),
            support_neg: self.support_neg.clone(),
            reason: self.reason.clone(),
            notes: self.notes.clone(),
        }
    }
}

/// Serialized form of a [`PeakResult`] with a fixed key order.
#[derive(Debug, Clone, Serialize)]
pub struct PeakReport {
    pub verdict: Verdict,
    pub tau0: Option<f64>,
    pub tau0_exact: Option<String>,
    pub phase: Option<f64>,
    pub bound: f64,
    pub probability: Option<f64>,
    pub fidelity_bound: Option<f64>,
    #[serde(rename = "D")]
    pub d: Option<u64>,
    pub g: Option<u64>,
    pub a: Option<i64>,
    /// `(eigenvalue index, b_r)` for each support eigenvalue.
    pub b_r: Option<Vec<(usize, i64)>>,
    pub support_pos: Vec<f64>,
    pub support_neg: Vec<f64>,
    pub reason: Option<String>,
    pub notes: Vec<String>,
}

/// `2 sqrt(b) / (1 + b)`, the worst-case fidelity after phase correction.
pub fn fidelity_bound(b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::OutOfRange(b));
    }
    Ok(2.0 * b.sqrt() / (1.0 + b))
}

/// `b^2`, the least success probability over input qubit states.
pub fn success_probability_floor(b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::OutOfRange(b));
    }
    Ok(b * b)
}

pub fn classify_pst(result: &PeakResult, pst_tol: f64) -> TransferClass {
    match result.verdict {
        Verdict::Peak if (result.bound - 1.0).abs() <= pst_tol => TransferClass::Perfect,
        Verdict::Peak if result.bound < 1.0 - pst_tol => TransferClass::PeakOnly,
        _ => TransferClass::None,
    }
}

fn wrap_phase(x: f64) -> f64 {
    let p = x.rem_euclid(2.0 * PI);
    if (2.0 * PI - p) < 1e-9 || p < 1e-12 {
        0.0
    } else {
        p
    }
}

/// Whether the eigenvalues of the mutual supports can be assumed to be
/// algebraic integers closed under conjugation: true for integer matrices,
/// and for matrices whose characteristic polynomial rounds to integer
/// coefficients.
pub fn is_eligible(m: &DMatrix<f64>, dec: &SpectralDecomposition, tol: f64) -> bool {
    if m.iter().all(|x| x.fract() == 0.0) {
        return true;
    }
    let eig = dec.eigenvalues();
    // elementary symmetric functions of the eigenvalues, and of their
    // absolute values as an error scale
    let mut e = vec![0.0; eig.len() + 1];
    let mut scale = vec![0.0; eig.len() + 1];
    e[0] = 1.0;
    scale[0] = 1.0;
    for (i, &l) in eig.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += l * e[k - 1];
            scale[k] += l.abs() * scale[k - 1];
        }
    }
    e.iter()
        .zip(&scale)
        .all(|(c, s)| (c - c.round()).abs() <= tol * (1.0 + s))
}

/// Outcome of checking a specific time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeCheck {
    pub is_peak: bool,
    pub achieved: f64,
    pub bound: f64,
    pub parity_ok: bool,
}

/// A matrix with its decomposition, reused across vertex pairs.
#[derive(Debug, Clone)]
pub struct PeakAnalyzer {
    matrix: DMatrix<f64>,
    dec: SpectralDecomposition,
    eligible: bool,
    opts: PeakOptions,
}

impl PeakAnalyzer {
    pub fn new(m: DMatrix<f64>, opts: PeakOptions) -> Result<Self> {
        let dec = spectral::decompose(&m, opts.cluster_tol)?;
        let eligible = is_eligible(&m, &dec, opts.recog_tol);
        Ok(PeakAnalyzer {
            matrix: m,
            dec,
            eligible,
            opts,
        })
    }

    pub fn for_graph(g: &WeightedGraph, kind: MatrixKind, opts: PeakOptions) -> Result<Self> {
        Self::new(g.matrix(kind), opts)
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.dec
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn options(&self) -> &PeakOptions {
        &self.opts
    }

    pub fn is_eligible(&self) -> bool {
        self.eligible
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        let n = self.dec.order();
        if u >= n || v >= n {
            return Err(Error::BadParam(format!(
                "pair ({u}, {v}) out of range for order {n}"
            )));
        }
        Ok(())
    }

    pub fn support(&self, u: usize, v: usize) -> SupportClassification {
        spectral::classify_support(&self.dec, u, v, self.opts.entry_tol)
    }

    pub fn check(&self, u: usize, v: usize) -> Result<PeakResult> {
        self.check_pair(u, v)?;
        let support = self.support(u, v);
        let mut res = PeakResult::base(u, v, support, &self.dec);

        if res.support.is_empty() {
            res.verdict = Verdict::ZeroTransfer;
            res.bound = 0.0;
            res.reason = Some("mutual eigenvalue support is empty".into());
            return Ok(res);
        }
        if !self.eligible {
            res.verdict = Verdict::NotEligible;
            res.reason = Some(
                "characteristic polynomial is not integral; eligibility cannot be assumed".into(),
            );
            return Ok(res);
        }

        let idx = res.support.support();
        if idx.len() == 1 {
            return Ok(res.no_peak("support has one eigenvalue"));
        }
        let thetas: Vec<f64> = idx.iter().map(|&r| self.dec.thetas()[r]).collect();
        let form = match recognize_quadratic(&thetas, self.opts.recog_tol, self.opts.d_max) {
            Ok(f) => f,
            Err(Error::RecognitionFailure(_)) => {
                return Ok(res
                    .no_peak("support eigenvalues are not quadratic integers over a common field"))
            }
            Err(Error::AmbiguousFit(msg)) => {
                return Ok(res.no_peak(format!("ambiguous quadratic form: {msg}")))
            }
            Err(e) => return Err(e),
        };

        // reference eigenvalue: the largest of the positive support
        let s_pos = idx
            .iter()
            .position(|r| res.support.is_positive(*r))
            .expect("nonempty support has a positive part");
        let bs = form.b[s_pos];
        let c: Vec<i64> = form.b.iter().map(|&br| (bs - br) / 2).collect();
        let g = c.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g == 0 {
            return Ok(res.no_peak("support has one eigenvalue"));
        }

        let positive_only = res.support.neg.is_empty();
        if positive_only {
            res.tau_multiplier = 2;
            res.notes.push(
                "positive-support-only: transfer at every multiple of 2*pi/(g*sqrt(D))".into(),
            );
        } else {
            for (k, &r) in idx.iter().enumerate() {
                let even = (c[k] / g).is_even();
                if even != res.support.is_positive(r) {
                    let theta = self.dec.thetas()[r];
                    let side = if even { "negative" } else { "positive" };
                    res.form = Some(form);
                    res.g = Some(g as u64);
                    return Ok(res.no_peak(format!(
                        "parity condition fails at eigenvalue {theta}: c_r/g = {} but it lies in the {side} support",
                        c[k] / g
                    )));
                }
            }
        }

        let theta_s = form.value(s_pos);
        let tau0 = res.tau_multiplier as f64 * PI / (g as f64 * (form.d as f64).sqrt());
        let b = res.bound.min(1.0);
        res.verdict = Verdict::Peak;
        res.s = Some(idx[s_pos]);
        res.theta_s = Some(theta_s);
        res.g = Some(g as u64);
        res.tau0 = Some(tau0);
        res.phase = Some(wrap_phase(tau0 * theta_s));
        res.probability = Some(res.bound * res.bound);
        res.fidelity_bound = Some(fidelity_bound(b)?);
        res.form = Some(form);
        Ok(res)
    }

    /// Checks the phase conditions at a given time and compares the
    /// achieved amplitude with the bound.
    pub fn verify_at_time(&self, u: usize, v: usize, tau: f64, tol: f64) -> Result<TimeCheck> {
        self.check_pair(u, v)?;
        if tau.is_nan() || tau <= 0.0 {
            return Err(Error::BadParam(format!("time must be positive, got {tau}")));
        }
        let support = self.support(u, v);
        let achieved = dynamics::amplitude(&self.dec, u, v, tau).norm();
        let bound = support.bound;
        let parity_ok = match support.pos.first() {
            None => false,
            Some(&s) => {
                let theta_s = self.dec.thetas()[s];
                support.support().iter().all(|&r| {
                    let x = tau * (theta_s - self.dec.thetas()[r]) / PI;
                    let k = x.round();
                    (x - k).abs() <= tol * (1.0 + x.abs())
                        && ((k as i64).is_even() == support.is_positive(r))
                })
            }
        };
        Ok(TimeCheck {
            is_peak: parity_ok && (achieved - bound).abs() <= tol,
            achieved,
            bound,
            parity_ok,
        })
    }
}

pub fn check_peak(m: &DMatrix<f64>, u: usize, v: usize, opts: PeakOptions) -> Result<PeakResult> {
    PeakAnalyzer::new(m.clone(), opts)?.check(u, v)
}

pub fn verify_at_time(
    m: &DMatrix<f64>,
    u: usize,
    v: usize,
    tau: f64,
    tol: f64,
) -> Result<TimeCheck> {
    PeakAnalyzer::new(m.clone(), PeakOptions::default())?.verify_at_time(u, v, tau, tol)
}

/// Laplacian specialization: the eigenvalue 0 of a connected graph always
/// lies in the positive support, the support must be integral, and
/// `tau0 = pi / gcd(support)` with phase 0.
pub fn check_peak_laplacian(
    g: &WeightedGraph,
    u: usize,
    v: usize,
    opts: PeakOptions,
) -> Result<PeakResult> {
    PeakAnalyzer::for_graph(g, MatrixKind::Laplacian, opts)?.check_laplacian(u, v)
}

impl PeakAnalyzer {
    /// [`check_peak_laplacian`] on an analyzer built from a Laplacian.
    pub fn check_laplacian(&self, u: usize, v: usize) -> Result<PeakResult> {
        self.check_pair(u, v)?;
        let dec = &self.dec;
        let zero = dec
            .index_of(0.0, dec.cluster_tol().max(self.opts.recog_tol))
            .ok_or_else(|| Error::EigensolverFailure("Laplacian has no zero eigenvalue".into()))?;
        if dec.multiplicities()[zero] > 1 {
            return Err(Error::Disconnected(dec.multiplicities()[zero]));
        }

        let support = self.support(u, v);
        let mut res = PeakResult::base(u, v, support, dec);
        if !self.eligible {
            res.verdict = Verdict::NotEligible;
            res.reason =
                Some("edge weights do not give an integral characteristic polynomial".into());
            return Ok(res);
        }
        if !res.support.is_positive(zero) {
            return Ok(res.no_peak("eigenvalue 0 is not in the positive support"));
        }
        let idx = res.support.support();
        let ints: Option<Vec<i64>> = idx
            .iter()
            .map(|&r| near_integer(dec.thetas()[r], self.opts.recog_tol))
            .collect();
        let Some(ints) = ints else {
            return Ok(res.no_peak("support contains a non-integer eigenvalue"));
        };
        let gcd = ints.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if gcd == 0 {
            return Ok(res.no_peak("support has one eigenvalue"));
        }
        res.form = Some(QuadraticForm {
            a: 0,
            d: 1,
            b: ints.iter().map(|k| 2 * k).collect(),
        });
        res.g = Some(gcd as u64);
        if res.support.neg.is_empty() {
            res.tau_multiplier = 2;
            res.notes
                .push("positive-support-only: transfer at every multiple of 2*pi/g".into());
        } else {
            for (k, &r) in idx.iter().enumerate() {
                let even = (ints[k] / gcd).is_even();
                if even != res.support.is_positive(r) {
                    return Ok(res.no_peak(format!(
                        "parity condition fails at eigenvalue {}: theta/g = {}",
                        ints[k],
                        ints[k] / gcd
                    )));
                }
            }
        }
        let b = res.bound.min(1.0);
        res.verdict = Verdict::Peak;
        res.s = Some(zero);
        res.theta_s = Some(0.0);
        res.tau0 = Some(res.tau_multiplier as f64 * PI / gcd as f64);
        res.phase = Some(0.0);
        res.probability = Some(res.bound * res.bound);
        res.fidelity_bound = Some(fidelity_bound(b)?);
        Ok(res)
    }
}
