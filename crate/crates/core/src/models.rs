//! Parameter records for the supported Hamiltonians and their construction
//! as exact operator polynomials.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, serde_rational, Rational};
use crate::weyl::{Algebra, OperatorPoly, Variable};

fn one() -> Rational {
    Rational::one()
}

fn one_mode() -> usize {
    1
}

fn two() -> u32 {
    2
}

fn default_variable() -> Variable {
    Variable::x(0)
}

/// Sign choice for the squared frequencies of the anisotropic model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Upper,
    Lower,
}

/// A real polynomial in one variable, stored as ascending coefficients.
///
/// Deserializes from a coefficient list (`["0", "0", "1/2"]`), a comma string
/// (`"0, 0, 1/2"`) or a polynomial string (`"1/2 x^2"`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Univariate(pub Vec<Rational>);

impl Univariate {
    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.chars().any(|c| c.is_ascii_alphabetic()) {
            parse_polynomial(text).map(Univariate)
        } else {
            exact::parse_rational_list(text).map(Univariate)
        }
    }
}

impl Serialize for Univariate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        exact::serde_rational_list::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Univariate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;

        impl<'de> serde::de::Visitor<'de> for Visitor {
            type Value = Univariate;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a polynomial such as \"1/2 x^2\" or a list of exact rational coefficients")
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<Univariate, E> {
                Univariate::parse(v).map_err(E::custom)
            }

            fn visit_seq<A: serde::de::SeqAccess<'de>>(self, seq: A) -> std::result::Result<Univariate, A::Error> {
                let list = exact::serde_rational_list::deserialize(serde::de::value::SeqAccessDeserializer::new(seq))?;
                Ok(Univariate(list))
            }
        }

        d.deserialize_any(Visitor)
    }
}

/// Parses `"1/2 x^2 - 3x + x^4/4 + 2"` into ascending coefficients. Any single
/// letter may stand for the variable, but only one letter may be used.
pub fn parse_polynomial(text: &str) -> Result<Vec<Rational>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);

    let mut letter: Option<char> = None;
    let mut coeffs: Vec<Rational> = Vec::new();
    for term in terms {
        let (negative, body) = match term.as_bytes().first() {
            Some(b'-') => (true, &term[1..]),
            Some(b'+') => (false, &term[1..]),
            _ => (false, term),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("dangling sign in `{text}`")));
        }
        let (mut coeff, power) = match body.find(|c: char| c.is_ascii_alphabetic()) {
            None => (exact::parse_rational(body)?, 0usize),
            Some(pos) => {
                let var = body[pos..].chars().next().unwrap_or('x');
                match letter {
                    Some(l) if l != var => {
                        return Err(Error::Parse(format!("`{text}` mixes variables {l} and {var}")))
                    }
                    _ => letter = Some(var),
                }
                let head = &body[..pos];
                let coeff = if head.is_empty() { Rational::one() } else { exact::parse_rational(head)? };
                let mut rest = &body[pos + 1..];
                let mut power = 1usize;
                if let Some(r) = rest.strip_prefix('^') {
                    let digits = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
                    power = r[..digits]
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{term}`")))?;
                    rest = &r[digits..];
                }
                let coeff = match rest.strip_prefix('/') {
                    Some(den) => coeff / exact::parse_rational(den)?,
                    None if rest.is_empty() => coeff,
                    None => return Err(Error::Parse(format!("cannot read term `{term}`"))),
                };
                (coeff, power)
            }
        };
        if negative {
            coeff = -coeff;
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Rational::zero());
        }
        coeffs[power] += coeff;
    }
    Ok(coeffs)
}

/// Kind-specific parameters. Field names match the JSON configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ModelKind {
    /// `p²/2m + ½mω²x² + i(c/2)(xp + px)`.
    #[serde(rename = "swanson")]
    Swanson {
        #[serde(with = "serde_rational")]
        m: Rational,
        #[serde(with = "serde_rational")]
        omega: Rational,
        #[serde(with = "serde_rational")]
        c: Rational,
    },
    /// `p₁²/2γ − i p₂x₁ + ½γ(ω₁²+ω₂²)x₁² + ½γω₁²ω₂²x₂²`.
    #[serde(rename = "pu_I")]
    PuI {
        #[serde(with = "serde_rational")]
        gamma: Rational,
        #[serde(with = "serde_rational")]
        omega1: Rational,
        #[serde(with = "serde_rational")]
        omega2: Rational,
    },
    /// Anisotropic planar oscillator with the coupling `i a₃/(2m a₁a₂) p₁p₂`.
    #[serde(rename = "pu_II")]
    PuII {
        #[serde(with = "serde_rational")]
        m: Rational,
        #[serde(with = "serde_rational")]
        a1: Rational,
        #[serde(with = "serde_rational")]
        a2: Rational,
        #[serde(with = "serde_rational")]
        a3: Rational,
        #[serde(default)]
        branch: Branch,
    },
    /// `p²/2m + V(x) + (i/2){f(x)p + p f(x)}` with `f = Σ c_k x^{k+n}`.
    #[serde(rename = "general_x")]
    GeneralX {
        #[serde(with = "serde_rational")]
        m: Rational,
        #[serde(rename = "V")]
        potential: Univariate,
        series: Univariate,
        n: u32,
        #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
        k_max: Option<u32>,
    },
    /// `(A/2)x² + V(p) + (i/2){g(p)x + x g(p)}` with `g = Σ a_k p^{k+n}`.
    #[serde(rename = "general_p")]
    GeneralP {
        #[serde(rename = "A", with = "serde_rational")]
        a: Rational,
        #[serde(rename = "V")]
        potential: Univariate,
        series: Univariate,
        n: u32,
        #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
        k_max: Option<u32>,
    },
    /// A Hamiltonian given directly in the textual polynomial form, with the
    /// variable and inertia to use for the closure analysis.
    #[serde(rename = "custom")]
    Custom {
        hamiltonian: String,
        #[serde(default = "one_mode")]
        modes: usize,
        #[serde(default = "default_variable")]
        variable: Variable,
        #[serde(with = "serde_rational", default = "one")]
        inertia: Rational,
        #[serde(default = "two")]
        order: u32,
    },
}

/// Declarative description of a Hamiltonian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(with = "serde_rational", default = "one")]
    pub hbar: Rational,
    #[serde(flatten)]
    pub kind: ModelKind,
}

/// Which equation of motion a model is expected to close, and with what inertia.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureTarget {
    pub variable: Variable,
    pub order: u32,
    pub inertia: Rational,
}

impl ModelSpec {
    pub fn new(kind: ModelKind) -> Self {
        ModelSpec { hbar: Rational::one(), kind }
    }

    pub fn swanson(m: Rational, omega: Rational, c: Rational) -> Self {
        Self::new(ModelKind::Swanson { m, omega, c })
    }

    pub fn pu_i(gamma: Rational, omega1: Rational, omega2: Rational) -> Self {
        Self::new(ModelKind::PuI { gamma, omega1, omega2 })
    }

    pub fn pu_ii(m: Rational, a1: Rational, a2: Rational, a3: Rational) -> Self {
        Self::new(ModelKind::PuII { m, a1, a2, a3, branch: Branch::Upper })
    }

    pub fn general_x(m: Rational, potential: Vec<Rational>, series: Vec<Rational>, n: u32) -> Self {
        Self::new(ModelKind::GeneralX {
            m,
            potential: Univariate(potential),
            series: Univariate(series),
            n,
            k_max: None,
        })
    }

    pub fn general_p(a: Rational, potential: Vec<Rational>, series: Vec<Rational>, n: u32) -> Self {
        Self::new(ModelKind::GeneralP {
            a,
            potential: Univariate(potential),
            series: Univariate(series),
            n,
            k_max: None,
        })
    }

    pub fn custom(hamiltonian: &str, variable: Variable, inertia: Rational) -> Self {
        Self::new(ModelKind::Custom {
            hamiltonian: hamiltonian.to_string(),
            modes: 1,
            variable,
            inertia,
            order: 2,
        })
    }

    pub fn with_hbar(mut self, hbar: Rational) -> Self {
        self.hbar = hbar;
        self
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ModelKind::Swanson { .. } => "swanson",
            ModelKind::PuI { .. } => "pu_I",
            ModelKind::PuII { .. } => "pu_II",
            ModelKind::GeneralX { .. } => "general_x",
            ModelKind::GeneralP { .. } => "general_p",
            ModelKind::Custom { .. } => "custom",
        }
    }

    pub fn modes(&self) -> usize {
        match &self.kind {
            ModelKind::PuI { .. } | ModelKind::PuII { .. } => 2,
            ModelKind::Custom { modes, .. } => *modes,
            _ => 1,
        }
    }

    pub fn is_pu(&self) -> bool {
        matches!(self.kind, ModelKind::PuI { .. } | ModelKind::PuII { .. })
    }

    /// True for kinds with a known similarity exponent.
    pub fn has_similarity(&self) -> bool {
        matches!(
            self.kind,
            ModelKind::Swanson { .. } | ModelKind::GeneralX { .. } | ModelKind::GeneralP { .. }
        )
    }

    pub fn algebra(&self) -> Result<Algebra> {
        Algebra::new(self.modes(), self.hbar.clone())
    }

    /// Checks every parameter constraint, naming the one that fails.
    pub fn validate(&self) -> Result<()> {
        if !self.hbar.is_positive() {
            return Err(invalid("hbar > 0"));
        }
        match &self.kind {
            ModelKind::Swanson { m, omega, .. } => {
                require(m.is_positive(), "m > 0")?;
                require(omega.is_positive(), "omega > 0")?;
            }
            ModelKind::PuI { gamma, omega1, omega2 } => {
                require(gamma.is_positive(), "gamma > 0")?;
                require(omega1.is_positive(), "omega1 > 0")?;
                require(omega2.is_positive(), "omega2 > 0")?;
            }
            ModelKind::PuII { m, a1, a2, a3, .. } => {
                require(m.is_positive(), "m > 0")?;
                require(!a1.is_zero(), "a1 != 0")?;
                require(!a2.is_zero(), "a2 != 0")?;
                require(!a3.is_zero(), "a3 != 0")?;
                require(a1 != a2, "a1 != a2")?;
                let gap = (a1 * a1 - a2 * a2).abs();
                if a3.abs() >= gap {
                    return Err(invalid(&format!(
                        "|a3| < |a1^2 - a2^2| (got |a3| = {}, |a1^2 - a2^2| = {})",
                        a3.abs(),
                        gap
                    )));
                }
            }
            ModelKind::GeneralX { m, series, k_max, .. } => {
                require(m.is_positive(), "m > 0")?;
                check_truncation(series, *k_max)?;
            }
            ModelKind::GeneralP { a, series, k_max, .. } => {
                require(a.is_positive(), "A > 0")?;
                check_truncation(series, *k_max)?;
            }
            ModelKind::Custom { modes, variable, inertia, order, .. } => {
                require(*modes >= 1, "modes >= 1")?;
                require(variable.mode < *modes, "variable mode < modes")?;
                require(inertia.is_positive(), "inertia > 0")?;
                require(*order == 2 || (*order >= 4 && order % 2 == 0), "order is 2 or an even number >= 4")?;
            }
        }
        Ok(())
    }

    /// Builds the Hamiltonian in canonical form.
    pub fn build(&self) -> Result<OperatorPoly> {
        self.validate()?;
        let alg = self.algebra()?;
        let half = exact::rational(1, 2);
        let i_half = exact::imag(half.clone());
        let h = match &self.kind {
            ModelKind::Swanson { m, omega, c } => {
                let (x, p) = (alg.x(0), alg.p(0));
                let sym = &(&x * &p) + &(&p * &x);
                p.pow(2).scale_real(&(&half / m))
                    + x.pow(2).scale_real(&(&half * m * omega * omega))
                    + sym.scale(&exact::imag(c * &half))
            }
            ModelKind::PuI { gamma, omega1, omega2 } => {
                let (w1, w2) = (omega1 * omega1, omega2 * omega2);
                alg.p(0).pow(2).scale_real(&(&half / gamma))
                    - (alg.p(1) * alg.x(0)).scale(&exact::c_i())
                    + alg.x(0).pow(2).scale_real(&(&half * gamma * (&w1 + &w2)))
                    + alg.x(1).pow(2).scale_real(&(&half * gamma * &w1 * &w2))
            }
            ModelKind::PuII { m, a1, a2, a3, .. } => {
                let coupling = a3 / (Rational::from_integer(2.into()) * m * a1 * a2);
                alg.p(0).pow(2).scale_real(&(&half / m))
                    + alg.x(0).pow(2).scale_real(&(&half * m * a1 * a1))
                    + alg.p(1).pow(2).scale_real(&(&half / m))
                    + alg.x(1).pow(2).scale_real(&(&half * m * a2 * a2))
                    + (alg.p(0) * alg.p(1)).scale(&exact::imag(coupling))
            }
            ModelKind::GeneralX { m, potential, series, n, .. } => {
                let x = Variable::x(0);
                let f = alg.univariate(x, &shifted(series.coeffs(), *n));
                let p = alg.p(0);
                let sym = &(&f * &p) + &(&p * &f);
                p.pow(2).scale_real(&(&half / m)) + alg.univariate(x, potential.coeffs()) + sym.scale(&i_half)
            }
            ModelKind::GeneralP { a, potential, series, n, .. } => {
                let pv = Variable::p(0);
                let g = alg.univariate(pv, &shifted(series.coeffs(), *n));
                let x = alg.x(0);
                let sym = &(&g * &x) + &(&x * &g);
                x.pow(2).scale_real(&(&half * a)) + alg.univariate(pv, potential.coeffs()) + sym.scale(&i_half)
            }
            ModelKind::Custom { hamiltonian, .. } => OperatorPoly::parse(&alg, hamiltonian)?,
        };
        Ok(h)
    }

    /// The variables whose equations of motion the model is expected to close.
    pub fn closure_targets(&self) -> Vec<ClosureTarget> {
        match &self.kind {
            ModelKind::Swanson { m, .. } | ModelKind::GeneralX { m, .. } => {
                vec![ClosureTarget { variable: Variable::x(0), order: 2, inertia: m.clone() }]
            }
            ModelKind::GeneralP { a, .. } => {
                vec![ClosureTarget { variable: Variable::p(0), order: 2, inertia: a.recip() }]
            }
            ModelKind::PuI { gamma, .. } => (0..2)
                .map(|j| ClosureTarget { variable: Variable::x(j), order: 4, inertia: gamma.clone() })
                .collect(),
            ModelKind::PuII { m, .. } => (0..2)
                .map(|j| ClosureTarget { variable: Variable::x(j), order: 4, inertia: m.clone() })
                .collect(),
            ModelKind::Custom { variable, inertia, order, .. } => {
                vec![ClosureTarget { variable: *variable, order: *order, inertia: inertia.clone() }]
            }
        }
    }

    /// `(ω₁² + ω₂², ω₁²ω₂²)` exactly, for the two-mode models.
    pub fn pu_invariants(&self) -> Option<(Rational, Rational)> {
        match &self.kind {
            ModelKind::PuI { omega1, omega2, .. } => {
                let (w1, w2) = (omega1 * omega1, omega2 * omega2);
                Some((&w1 + &w2, &w1 * &w2))
            }
            ModelKind::PuII { a1, a2, a3, .. } => {
                let (s1, s2) = (a1 * a1, a2 * a2);
                let four = Rational::from_integer(4.into());
                Some((&s1 + &s2, (&four * &s1 * &s2 + a3 * a3) / &four))
            }
            _ => None,
        }
    }

    /// `(ω₁, ω₂)` in floating point for the two-mode models.
    pub fn pu_frequencies(&self) -> Option<(f64, f64)> {
        match &self.kind {
            ModelKind::PuI { omega1, omega2, .. } => Some((exact::to_f64(omega1), exact::to_f64(omega2))),
            ModelKind::PuII { a1, a2, a3, branch, .. } => {
                let (a1, a2, a3) = (exact::to_f64(a1), exact::to_f64(a2), exact::to_f64(a3));
                let sum = a1 * a1 + a2 * a2;
                let d = a1 * a1 - a2 * a2;
                let root = (d * d - a3 * a3).sqrt();
                let (hi, lo) = (((sum + root) / 2.0).sqrt(), ((sum - root) / 2.0).sqrt());
                Some(match branch {
                    Branch::Upper => (hi, lo),
                    Branch::Lower => (lo, hi),
                })
            }
            _ => None,
        }
    }

    /// The same model with its two frequencies (pu_I) or two anisotropy
    /// parameters (pu_II) exchanged.
    pub fn exchanged(&self) -> Option<ModelSpec> {
        let kind = match &self.kind {
            ModelKind::PuI { gamma, omega1, omega2 } => ModelKind::PuI {
                gamma: gamma.clone(),
                omega1: omega2.clone(),
                omega2: omega1.clone(),
            },
            ModelKind::PuII { m, a1, a2, a3, branch } => ModelKind::PuII {
                m: m.clone(),
                a1: a2.clone(),
                a2: a1.clone(),
                a3: a3.clone(),
                branch: *branch,
            },
            _ => return None,
        };
        Some(ModelSpec { hbar: self.hbar.clone(), kind })
    }

    /// Radius of convergence estimate of the imaginary series, if the kind has one.
    pub fn series_radius(&self) -> Option<f64> {
        match &self.kind {
            ModelKind::GeneralX { series, .. } | ModelKind::GeneralP { series, .. } => {
                Some(series_radius(series.coeffs()))
            }
            _ => None,
        }
    }
}

fn shifted(series: &[Rational], n: u32) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n as usize];
    out.extend_from_slice(series);
    out
}

fn invalid(constraint: &str) -> Error {
    Error::InvalidParameter(format!("constraint violated: {constraint}"))
}

fn require(ok: bool, constraint: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(invalid(constraint))
    }
}

fn check_truncation(series: &Univariate, k_max: Option<u32>) -> Result<()> {
    if let Some(k) = k_max {
        if series.0.len() != k as usize + 1 {
            return Err(invalid(&format!(
                "K + 1 = series length (K = {k}, {} coefficient(s) given)",
                series.0.len()
            )));
        }
    }
    Ok(())
}

/// Ratio estimate `|c_i / c_j|^{1/(j-i)}` from the last two nonzero
/// coefficients; `+∞` for fewer than two.
pub fn series_radius(coeffs: &[Rational]) -> f64 {
    let nonzero: Vec<usize> = coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, _)| k).collect();
    if nonzero.len() < 2 {
        return f64::INFINITY;
    }
    let (i, j) = (nonzero[nonzero.len() - 2], nonzero[nonzero.len() - 1]);
    let ratio = exact::to_f64(&(&coeffs[i] / &coeffs[j]).abs());
    ratio.powf(1.0 / (j - i) as f64)
}
