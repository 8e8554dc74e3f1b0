//! Hermitian counterparts and the similarity map between the two pictures.
//!
//! With `Ω = exp(S)` the counterpart is `h = Ω H Ω⁻¹` and eigenfunctions map as
//! `φ = Ω Φ`. Conjugation is evaluated as the adjoint series
//! `Σ_k ad_Sᵏ(A)/k!`, which terminates whenever `S` is a function of a single
//! canonical variable per mode.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dynamics::EomReport;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::models::{ModelKind, ModelSpec};
use crate::weyl::{OperatorPoly, Variable};

/// Outcome of checking `exp(S) H exp(-S) = h` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityCertificate {
    pub omega_exponent: OperatorPoly,
    pub bch_depth: usize,
    pub residual: OperatorPoly,
    pub verified: bool,
}

impl SimilarityCertificate {
    /// True when the residual is zero or a real multiple of the identity.
    pub fn verified_up_to_constant(&self) -> bool {
        self.constant_offset().is_some()
    }

    /// The real constant `exp(S) H exp(-S) - h`, if the residual is one.
    pub fn constant_offset(&self) -> Option<Rational> {
        if self.residual.is_zero() {
            return Some(Rational::zero());
        }
        let mut terms = self.residual.terms();
        let (mono, c) = terms.next()?;
        (terms.next().is_none() && mono.is_one() && exact::is_real(c)).then(|| c.re.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `O = Ω⁻¹ o Ω`.
    ToPseudo,
    /// `o = Ω O Ω⁻¹`.
    ToHermitian,
}

/// `h = P²/(2μ) - μ ∫ F dq` from a closed second-order equation `q̈ = F(q)`,
/// where `P` is the conjugate of `q` and `μ` the inertia. The integration
/// constant is zero.
pub fn deduce_hermitian(eom: &EomReport, inertia: &Rational) -> Result<OperatorPoly> {
    if !eom.real_closed {
        return Err(Error::NotDeducible(format!(
            "the equation of motion for {} is not real closed",
            eom.variable
        )));
    }
    if eom.order != 2 {
        return Err(Error::NotDeducible(format!(
            "only second-order equations determine a counterpart, got order {}",
            eom.order
        )));
    }
    let force = eom
        .force_poly
        .as_ref()
        .ok_or_else(|| Error::NotDeducible("closed report without a force polynomial".into()))?;
    if inertia.is_zero() {
        return Err(Error::NotDeducible("inertia must be nonzero".into()));
    }
    let alg = force.algebra();
    let kinetic = alg.var_pow(eom.variable.conjugate(), 2).scale_real(&(Rational::one() / (inertia * Rational::from_integer(2.into()))));
    let potential = force.integrate(eom.variable)?.scale_real(&-inertia.clone());
    Ok(kinetic + potential)
}

/// The exponent `S` of `Ω = exp(S)` for the kinds that have one.
pub fn omega_exponent(spec: &ModelSpec) -> Result<OperatorPoly> {
    let alg = spec.algebra()?;
    let hbar = &spec.hbar;
    let (var, coeffs, n, prefactor) = match &spec.kind {
        ModelKind::Swanson { m, c, .. } => (Variable::x(0), vec![c.clone()], 1u32, -(m / hbar)),
        ModelKind::GeneralX { m, series, n, .. } => (Variable::x(0), series.0.clone(), *n, -(m / hbar)),
        ModelKind::GeneralP { a, series, n, .. } => (Variable::p(0), series.0.clone(), *n, (a * hbar).recip()),
        _ => {
            return Err(Error::UnsupportedModel(format!(
                "no similarity exponent is available for {}",
                spec.kind_name()
            )))
        }
    };
    let mut out = vec![Rational::zero(); n as usize + 1 + coeffs.len()];
    for (k, c) in coeffs.iter().enumerate() {
        let power = k + n as usize + 1;
        out[power] = &prefactor * c / Rational::from_integer(power.into());
    }
    Ok(alg.univariate(var, &out))
}

/// `exp(S) A exp(-S)` together with the deepest nonvanishing nested commutator.
pub fn conjugate_by_exp(s: &OperatorPoly, a: &OperatorPoly) -> Result<(OperatorPoly, usize)> {
    let bound = 2 * a.degree() as usize + 2;
    let mut sum = a.clone();
    let mut term = a.clone();
    let mut depth = 0;
    for k in 1.. {
        term = s.commutator(&term)?.scale_real(&exact::rational(1, k as i64));
        if term.is_zero() {
            break;
        }
        if k > bound {
            return Err(Error::NonTerminating { bound });
        }
        depth = k;
        sum = &sum + &term;
    }
    Ok((sum, depth))
}

/// Checks `exp(S) H exp(-S) = h` exactly.
pub fn verify_similarity(h_pseudo: &OperatorPoly, h_herm: &OperatorPoly, s: &OperatorPoly) -> Result<SimilarityCertificate> {
    let (mapped, depth) = conjugate_by_exp(s, h_pseudo)?;
    let residual = mapped.checked_sub(h_herm)?;
    Ok(SimilarityCertificate {
        omega_exponent: s.clone(),
        bch_depth: depth,
        verified: residual.is_zero(),
        residual,
    })
}

/// Carries an observable between the Hermitian and pseudo-Hermitian pictures.
pub fn observable_map(o: &OperatorPoly, s: &OperatorPoly, direction: Direction) -> Result<OperatorPoly> {
    let (out, _) = match direction {
        Direction::ToPseudo => conjugate_by_exp(&-s, o)?,
        Direction::ToHermitian => conjugate_by_exp(s, o)?,
    };
    Ok(out)
}
