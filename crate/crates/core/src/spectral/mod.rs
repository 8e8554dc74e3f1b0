//! Truncated oscillator-basis representations and numerical certification.
//!
//! Each mode is represented on the lowest `N` number states with
//! `x = √(ħ/2κ)(a + a†)` and `p = i√(κħ/2)(a† − a)`, where `κ = m₀ω₀` is the
//! mode's scale. Multi-mode operators are Kronecker products with mode 0
//! slowest.

mod certify;
mod compare;
pub mod linalg;

use faer::Mat;

pub use faer::c64;

use crate::error::{Error, Result};
use crate::exact;
use crate::models::{ModelKind, ModelSpec};
use crate::weyl::OperatorPoly;

pub use certify::{
    certify, counterpart_basis, converged_scale, eigen_residual, eigenfunction_map, exchange_invariance_check, hermitian_counterpart, metric_basis,
    metric_checks, picture_check, picture_consistency, pu_combination, reference_spectrum, spectrum_check,
    write_eigenvalues_csv, Combination, ExchangeReport, MetricBasis, MetricReport, PictureReport, SpectralReport,
    SpectrumReport,
};
pub use compare::{cluster_distance, lowest};
pub use linalg::{eigenvalues, expm};

/// Representation parameters for the truncated basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisConfig {
    /// Number states kept per mode.
    pub n: usize,
    pub ref_mass: f64,
    pub ref_freq: f64,
    /// Per-mode `κ_j`, overriding `ref_mass · ref_freq` when present.
    pub mode_scales: Option<Vec<f64>>,
    /// How many of the lowest eigenvalues are compared.
    pub compare_count: usize,
    /// Largest total dimension `N^M` that may be built.
    pub max_dim: usize,
    /// Largest acceptable condition number of `exp(S)` for metric checks.
    pub cond_budget: f64,
    /// Picture checks run on `t ∈ [0, t_max]` with `time_points` samples.
    pub t_max: f64,
    pub time_points: usize,
}

impl BasisConfig {
    pub fn new(n: usize) -> Self {
        BasisConfig {
            n,
            ref_mass: 1.0,
            ref_freq: 1.0,
            mode_scales: None,
            compare_count: (n / 4).max(1),
            max_dim: 4096,
            cond_budget: 1e6,
            t_max: 10.0,
            time_points: 101,
        }
    }

    /// Default scales for a model: for the single-mode similarity kinds the
    /// width at which the low eigenvectors of `H` converge (else `m₀ = m`), and
    /// ground-state widths of the uncoupled oscillators for the two-mode kinds.
    pub fn for_model(spec: &ModelSpec, n: usize) -> Self {
        let mut cfg = Self::new(n);
        match &spec.kind {
            ModelKind::Swanson { m, .. } | ModelKind::GeneralX { m, .. } => {
                cfg.ref_mass = exact::to_f64(m);
                cfg.mode_scales = certify::similarity_scale(spec, &cfg).map(|k| vec![k]);
            }
            ModelKind::PuI { gamma, omega1, omega2 } => {
                let (g, w1, w2) = (exact::to_f64(gamma), exact::to_f64(omega1), exact::to_f64(omega2));
                cfg.mode_scales = Some(vec![g * (w1 * w1 + w1 * w2 + w2 * w2) / (w1 + w2), g * w1 * w2 * (w1 + w2)]);
            }
            ModelKind::PuII { m, a1, a2, .. } => {
                let m = exact::to_f64(m);
                cfg.mode_scales = Some(vec![m * exact::to_f64(a1).abs(), m * exact::to_f64(a2).abs()]);
            }
            ModelKind::GeneralP { .. } => cfg.mode_scales = certify::similarity_scale(spec, &cfg).map(|k| vec![k]),
            ModelKind::Custom { .. } => {}
        }
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n < 8 {
            return bad(format!("basis size N must be at least 8, got {}", self.n));
        }
        if self.compare_count == 0 || self.compare_count > self.n / 4 {
            return bad(format!("compare count must lie in 1..=N/4 = {}, got {}", self.n / 4, self.compare_count));
        }
        if !(self.ref_mass > 0.0 && self.ref_freq > 0.0) {
            return bad("reference mass and frequency must be positive".into());
        }
        if let Some(s) = &self.mode_scales {
            if s.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
                return bad("mode scales must be positive and finite".into());
            }
        }
        if !(self.cond_budget > 1.0) {
            return bad("condition budget must exceed 1".into());
        }
        if !(self.t_max >= 0.0) || self.time_points == 0 {
            return bad("time grid needs t_max >= 0 and at least one point".into());
        }
        Ok(())
    }

    pub fn scale(&self, mode: usize) -> f64 {
        match &self.mode_scales {
            Some(s) => s[mode.min(s.len() - 1)],
            None => self.ref_mass * self.ref_freq,
        }
    }

    /// Same basis with every mode scale multiplied by `factor`.
    pub fn rescaled(&self, factor: f64, modes: usize) -> Self {
        let mut out = self.clone();
        out.mode_scales = Some((0..modes).map(|j| self.scale(j) * factor).collect());
        out
    }

    pub fn times(&self) -> Vec<f64> {
        if self.time_points == 1 {
            return vec![0.0];
        }
        let step = self.t_max / (self.time_points - 1) as f64;
        (0..self.time_points).map(|k| k as f64 * step).collect()
    }
}

/// Position and momentum matrices of one mode.
pub fn ladder_pair(n: usize, kappa: f64, hbar: f64) -> (Mat<c64>, Mat<c64>) {
    let sx = (hbar / (2.0 * kappa)).sqrt();
    let sp = (kappa * hbar / 2.0).sqrt();
    let x = Mat::from_fn(n, n, |i, j| {
        if i + 1 == j {
            c64::new(sx * (j as f64).sqrt(), 0.0)
        } else if j + 1 == i {
            c64::new(sx * (i as f64).sqrt(), 0.0)
        } else {
            linalg::zero()
        }
    });
    let p = Mat::from_fn(n, n, |i, j| {
        if i + 1 == j {
            c64::new(0.0, -sp * (j as f64).sqrt())
        } else if j + 1 == i {
            c64::new(0.0, sp * (i as f64).sqrt())
        } else {
            linalg::zero()
        }
    });
    (x, p)
}

fn powers(base: &Mat<c64>, up_to: u32) -> Vec<Mat<c64>> {
    let n = base.nrows();
    let mut out = vec![Mat::<c64>::identity(n, n)];
    for k in 1..=up_to as usize {
        out.push(&out[k - 1] * base);
    }
    out
}

/// Dense matrix of `A` in the truncated basis.
pub fn matrix_of(a: &OperatorPoly, cfg: &BasisConfig) -> Result<Mat<c64>> {
    let modes = a.modes();
    let dim = cfg
        .n
        .checked_pow(modes as u32)
        .filter(|d| *d <= cfg.max_dim)
        .ok_or(Error::DimensionBudget { dim: cfg.n.saturating_pow(modes as u32), budget: cfg.max_dim })?;
    let hbar = exact::to_f64(a.hbar());
    let mut xs = Vec::with_capacity(modes);
    let mut ps = Vec::with_capacity(modes);
    for j in 0..modes {
        let (x, p) = ladder_pair(cfg.n, cfg.scale(j), hbar);
        let vx = crate::weyl::Variable::x(j);
        let vp = crate::weyl::Variable::p(j);
        xs.push(powers(&x, a.degree_in(vx)));
        ps.push(powers(&p, a.degree_in(vp)));
    }
    let mut out = Mat::<c64>::zeros(dim, dim);
    for (mono, c) in a.terms() {
        let mut word: Option<Mat<c64>> = None;
        for (j, &(ea, eb)) in mono.exponents().iter().enumerate() {
            let factor = &xs[j][ea as usize] * &ps[j][eb as usize];
            word = Some(match word {
                None => factor,
                Some(w) => w.kron(&factor),
            });
        }
        let word = word.expect("at least one mode");
        out += linalg::scaled(&word, exact::to_c64(c));
    }
    Ok(out)
}
