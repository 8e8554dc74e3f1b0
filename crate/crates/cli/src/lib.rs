//! Batch pipeline behind the `realclose` binary: parse a run configuration,
//! execute the requested checks in dependency order and assemble a report.

pub mod config;
pub mod report;

use std::fmt;

use realclose::dynamics::{linear_closure_fit_with_inertia, real_closure_second_order};
use realclose::spectral::{exchange_invariance_check, metric_checks, picture_check, spectrum_check, Combination};
use realclose::transform::{deduce_hermitian, omega_exponent, verify_similarity};
use realclose::{BasisConfig, EomReport, ModelSpec, OperatorPoly};

pub use config::{Check, Checks, Format, RunConfig};
use report::*;

/// Failures that stop a run before any check executes (exit code 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunError {
    Config(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            RunError::Config(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for RunError {}

pub struct RunResult {
    pub report: Report,
    pub passed: bool,
    /// Full spectrum of the model matrix when the spectrum check ran.
    pub eigenvalues: Option<Vec<realclose::spectral::c64>>,
}

pub fn run(config: &RunConfig) -> Result<RunResult, RunError> {
    let spec = config.model_spec()?;
    let h = spec.build().map_err(|e| RunError::Config(e.to_string()))?;
    let checks = config.checks.resolve(&spec)?;
    let basis = config.basis.build(&spec)?;
    Ok(Pipeline::new(spec, h, basis, checks).execute())
}

struct Pipeline {
    spec: ModelSpec,
    h: OperatorPoly,
    basis: BasisConfig,
    checks: Vec<Check>,
    tol: Tolerances,
    passed: bool,
}

impl Pipeline {
    fn new(spec: ModelSpec, h: OperatorPoly, basis: BasisConfig, checks: Vec<Check>) -> Self {
        Pipeline { spec, h, basis, checks, tol: Tolerances::default(), passed: true }
    }

    fn wants(&self, c: Check) -> bool {
        self.checks.contains(&c)
    }

    fn record(&mut self, ok: bool) -> bool {
        self.passed &= ok;
        ok
    }

    fn execute(mut self) -> RunResult {
        let classification = self.wants(Check::Classify).then(|| {
            let c = self.h.classify();
            ClassificationSection { passed: true, is_hermitian: c.is_hermitian, is_pt_symmetric: c.is_pt_symmetric }
        });

        let needs_eom = [Check::Closure, Check::Counterpart, Check::Similarity].iter().any(|c| self.wants(*c));
        let eoms = if needs_eom { Some(self.closures()) } else { None };
        let eom = self.wants(Check::Closure).then(|| {
            let section = match eoms.as_ref().expect("closures computed") {
                Ok(list) => EomSection {
                    passed: list.iter().all(|r| r.real_closed),
                    targets: list.iter().map(EomEntry::from).collect(),
                    error: None,
                },
                Err(e) => EomSection { passed: false, targets: Vec::new(), error: Some(e.clone()) },
            };
            self.record(section.passed);
            section
        });

        let herm = if self.wants(Check::Counterpart) || self.wants(Check::Similarity) {
            Some(self.counterpart(eoms.as_ref().expect("closures computed")))
        } else {
            None
        };
        let counterpart = self.wants(Check::Counterpart).then(|| {
            let section = match herm.as_ref().expect("counterpart computed") {
                Ok(p) => {
                    let is_hermitian = p.classify().is_hermitian;
                    CounterpartSection {
                        passed: is_hermitian,
                        hamiltonian: Some(p.to_string()),
                        is_hermitian: Some(is_hermitian),
                        error: None,
                    }
                }
                Err(e) => CounterpartSection { passed: false, hamiltonian: None, is_hermitian: None, error: Some(e.clone()) },
            };
            self.record(section.passed);
            section
        });

        let similarity = self.wants(Check::Similarity).then(|| {
            let section = self.similarity(herm.as_ref().expect("counterpart computed"));
            self.record(section.passed);
            section
        });

        let numeric = [Check::Spectrum, Check::Eta, Check::Picture, Check::Exchange];
        let mut eigenvalues = None;
        let spectral = numeric.iter().any(|c| self.wants(*c)).then(|| {
            let mut warnings = Vec::new();
            let spectrum = self.wants(Check::Spectrum).then(|| {
                let out = match spectrum_check(&self.spec, &self.basis) {
                    Ok(r) => {
                        eigenvalues = Some(r.eigenvalues.clone());
                        Outcome::Done(self.spectrum_section(&r))
                    }
                    Err(e) => Outcome::failed(e),
                };
                self.record(outcome_passed(&out, |s| s.passed));
                out
            });
            let eta = self.wants(Check::Eta).then(|| {
                let out = match metric_checks(&self.spec, &self.basis) {
                    Ok(r) => {
                        if !r.within_budget {
                            warnings.push(format!(
                                "cond(exp(S)) = {:e} exceeds the budget {:e}; metric checks are unreliable",
                                r.cond, self.basis.cond_budget
                            ));
                        }
                        Outcome::Done(EtaSection {
                            passed: r.within_budget
                                && r.eta_min_eigenvalue > 0.0
                                && r.pseudo_residual <= self.tol.pseudo.0,
                            scales: nums(&r.scales),
                            scale_factor: Num(r.scale_factor),
                            cond: Num(r.cond),
                            within_budget: r.within_budget,
                            eta_min_eigenvalue: Num(r.eta_min_eigenvalue),
                            pseudo_residual: Num(r.pseudo_residual),
                            block: r.block,
                        })
                    }
                    Err(e) => Outcome::failed(e),
                };
                self.record(outcome_passed(&out, |s| s.passed));
                out
            });
            let picture = self.wants(Check::Picture).then(|| {
                let out = match picture_check(&self.spec, &self.basis) {
                    Ok(r) => Outcome::Done(PictureSection {
                        passed: r.picture_residual <= self.tol.picture.0 && r.norm_drift <= self.tol.drift.0,
                        picture_residual: Num(r.picture_residual),
                        norm_drift: Num(r.norm_drift),
                        t_max: Num(r.t_max),
                        points: r.points,
                        scale_factor: Num(r.scale_factor),
                    }),
                    Err(e) => Outcome::failed(e),
                };
                self.record(outcome_passed(&out, |s| s.passed));
                out
            });
            let exchange = self.wants(Check::Exchange).then(|| {
                let out = match exchange_invariance_check(&self.spec, &self.basis) {
                    Ok(r) => Outcome::Done(ExchangeSection {
                        passed: r.distance <= self.tol.exchange.0 && r.sum_invariant,
                        distance: Num(r.distance),
                        sum_invariant: r.sum_invariant,
                        difference_invariant: r.difference_invariant,
                        difference_before: Num(r.difference_before),
                        difference_after: Num(r.difference_after),
                    }),
                    Err(e) => Outcome::failed(e),
                };
                self.record(outcome_passed(&out, |s| s.passed));
                out
            });
            SpectralSection {
                n: self.basis.n,
                scales: (0..self.spec.modes()).map(|j| Num(self.basis.scale(j))).collect(),
                spectrum,
                eta,
                picture,
                exchange,
                warnings,
            }
        });

        let report = Report {
            model: ModelSection {
                spec: self.spec.clone(),
                hamiltonian: self.h.to_string(),
                modes: self.spec.modes(),
                checks: self.checks.iter().map(|c| c.name().to_string()).collect(),
            },
            classification,
            eom,
            counterpart,
            similarity,
            spectral,
            tolerances: self.tol.clone(),
            versions: Versions::default(),
        };
        RunResult { report, passed: self.passed, eigenvalues }
    }

    fn closures(&self) -> Result<Vec<EomReport>, String> {
        self.spec
            .closure_targets()
            .iter()
            .map(|t| {
                if t.order == 2 {
                    real_closure_second_order(&self.h, t.variable, &t.inertia)
                } else {
                    linear_closure_fit_with_inertia(&self.h, t.variable, t.order, &t.inertia)
                }
            })
            .collect::<realclose::Result<Vec<_>>>()
            .map_err(|e| e.to_string())
    }

    fn counterpart(&self, eoms: &Result<Vec<EomReport>, String>) -> Result<OperatorPoly, String> {
        let list = eoms.as_ref().map_err(Clone::clone)?;
        let eom = match list.as_slice() {
            [one] if one.order == 2 => one,
            _ => return Err(format!("no Hermitian counterpart construction for {}", self.spec.kind_name())),
        };
        if !eom.real_closed {
            return Err(format!("the equation of motion for {} is not real-closed", eom.variable));
        }
        deduce_hermitian(eom, &eom.inertia).map_err(|e| e.to_string())
    }

    fn similarity(&self, herm: &Result<OperatorPoly, String>) -> SimilaritySection {
        let failed = |e: String| SimilaritySection {
            passed: false,
            omega_exponent: None,
            bch_depth: None,
            residual: None,
            verified: false,
            verified_up_to_constant: false,
            constant_offset: None,
            error: Some(e),
        };
        let herm = match herm {
            Ok(p) => p,
            Err(e) => return failed(e.clone()),
        };
        let cert = match omega_exponent(&self.spec).and_then(|s| verify_similarity(&self.h, herm, &s)) {
            Ok(c) => c,
            Err(e) => return failed(e.to_string()),
        };
        let up_to_constant = cert.verified_up_to_constant();
        SimilaritySection {
            passed: up_to_constant,
            omega_exponent: Some(cert.omega_exponent.to_string()),
            bch_depth: Some(cert.bch_depth),
            residual: Some(cert.residual.to_string()),
            verified: cert.verified,
            verified_up_to_constant: up_to_constant,
            constant_offset: cert.constant_offset().map(|c| c.to_string()),
            error: None,
        }
    }

    fn spectrum_section(&self, r: &realclose::spectral::SpectrumReport) -> SpectrumSection {
        let k = r.compare_count;
        let within = |v: Option<f64>, tol: f64| v.map_or(true, |x| x <= tol);
        SpectrumSection {
            passed: r.reality_residual <= self.tol.reality.0
                && within(r.isospectral_residual, self.tol.isospectral.0)
                && within(r.reference_residual, self.tol.reference.0),
            dimension: r.dimension,
            compare_count: k,
            lowest: r.eigenvalues.iter().take(k).map(|z| [Num(z.re), Num(z.im)]).collect(),
            reference: r.reference.as_deref().map(nums),
            counterpart_lowest: r.counterpart_eigenvalues.as_ref().map(|v| v.iter().take(k).map(|z| Num(z.re)).collect()),
            counterpart_offset: Num(r.counterpart_offset),
            reality_residual: Num(r.reality_residual),
            isospectral_residual: r.isospectral_residual.map(Num),
            reference_residual: r.reference_residual.map(Num),
            combination: r.combination.map(|c| {
                match c {
                    Combination::Sum => "sum",
                    Combination::Difference => "difference",
                    Combination::Neither => "neither",
                }
                .to_string()
            }),
        }
    }
}

fn outcome_passed<T>(o: &Outcome<T>, f: impl Fn(&T) -> bool) -> bool {
    match o {
        Outcome::Done(t) => f(t),
        Outcome::Failed { .. } => false,
    }
}
