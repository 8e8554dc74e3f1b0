//! Normal-ordered polynomials over canonical pairs `(x_j, p_j)` with
//! `[x_j, p_k] = iħ δ_jk`.
//!
//! A word is stored as one `(a_j, b_j)` exponent pair per mode, meaning
//! `x_0^{a_0} p_0^{b_0} x_1^{a_1} p_1^{b_1} ...`. Within a mode every `x`
//! precedes every `p`; distinct modes commute. With that convention the
//! representation of an element of the Weyl algebra is unique, so equality of
//! operators is equality of term maps.
//!
//! The product of two single-mode words follows from
//!
//! ```text
//! p^b x^c = Σ_k C(b,k) C(c,k) k! (-iħ)^k x^{c-k} p^{b-k}
//! ```
//!
//! and multi-mode words factor mode by mode.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Complex, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, ComplexExact, Rational};

/// The two members of a canonical pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Canonical {
    X,
    P,
}

impl Canonical {
    pub fn conjugate(self) -> Self {
        match self {
            Canonical::X => Canonical::P,
            Canonical::P => Canonical::X,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Canonical::X => 'x',
            Canonical::P => 'p',
        }
    }
}

/// A canonical variable `x_j` or `p_j`, written `x0`, `p1`, ... in text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Variable {
    pub mode: usize,
    pub kind: Canonical,
}

impl Variable {
    pub fn x(mode: usize) -> Self {
        Variable { mode, kind: Canonical::X }
    }

    pub fn p(mode: usize) -> Self {
        Variable { mode, kind: Canonical::P }
    }

    pub fn conjugate(self) -> Self {
        Variable { mode: self.mode, kind: self.kind.conjugate() }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.symbol(), self.mode)
    }
}

impl From<Variable> for String {
    fn from(v: Variable) -> String {
        v.to_string()
    }
}

impl TryFrom<String> for Variable {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl std::str::FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = match s.chars().next() {
            Some('x') => (Canonical::X, &s[1..]),
            Some('p') => (Canonical::P, &s[1..]),
            _ => return Err(Error::Parse(format!("`{s}` is not a canonical variable like x0 or p1"))),
        };
        let mode = if rest.is_empty() {
            0
        } else {
            rest.parse().map_err(|_| Error::Parse(format!("bad mode index in `{s}`")))?
        };
        Ok(Variable { mode, kind })
    }
}

/// Per-mode exponents `(a_j, b_j)` of the normal-ordered word `Π_j x_j^{a_j} p_j^{b_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one(modes: usize) -> Self {
        Monomial(vec![(0, 0); modes])
    }

    pub fn new(exps: Vec<(u32, u32)>) -> Self {
        Monomial(exps)
    }

    pub fn variable(modes: usize, var: Variable, power: u32) -> Self {
        let mut m = Self::one(modes);
        match var.kind {
            Canonical::X => m.0[var.mode].0 = power,
            Canonical::P => m.0[var.mode].1 = power,
        }
        m
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(a, b)| a + b).sum()
    }

    pub fn power_of(&self, var: Variable) -> u32 {
        let (a, b) = self.0[var.mode];
        match var.kind {
            Canonical::X => a,
            Canonical::P => b,
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&(a, b)| a == 0 && b == 0)
    }

    /// True when the word involves no variable other than `var`.
    pub fn only_involves(&self, var: Variable) -> bool {
        self.0.iter().enumerate().all(|(j, &(a, b))| {
            if j == var.mode {
                match var.kind {
                    Canonical::X => b == 0,
                    Canonical::P => a == 0,
                }
            } else {
                a == 0 && b == 0
            }
        })
    }

    fn x_part(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(a, _)| (a, 0)).collect())
    }

    fn p_part(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(_, b)| (0, b)).collect())
    }
}

/// The ambient algebra: number of canonical pairs and the value of ħ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    modes: usize,
    hbar: Rational,
}

impl Algebra {
    pub fn new(modes: usize, hbar: Rational) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidParameter("an algebra needs at least one mode".into()));
        }
        if hbar <= Rational::zero() {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Algebra { modes, hbar })
    }

    /// One mode with ħ = 1.
    pub fn single() -> Self {
        Algebra { modes: 1, hbar: Rational::one() }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn hbar(&self) -> &Rational {
        &self.hbar
    }

    pub fn zero(&self) -> OperatorPoly {
        OperatorPoly { algebra: self.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(&self, c: ComplexExact) -> OperatorPoly {
        self.term(Monomial::one(self.modes), c)
    }

    pub fn one(&self) -> OperatorPoly {
        self.scalar(exact::c_one())
    }

    pub fn term(&self, mono: Monomial, c: ComplexExact) -> OperatorPoly {
        assert_eq!(mono.modes(), self.modes, "monomial mode count differs from algebra");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        OperatorPoly { algebra: self.clone(), terms }
    }

    pub fn var(&self, var: Variable) -> OperatorPoly {
        self.var_pow(var, 1)
    }

    pub fn var_pow(&self, var: Variable, power: u32) -> OperatorPoly {
        assert!(var.mode < self.modes, "mode {} out of range", var.mode);
        self.term(Monomial::variable(self.modes, var, power), exact::c_one())
    }

    pub fn x(&self, mode: usize) -> OperatorPoly {
        self.var(Variable::x(mode))
    }

    pub fn p(&self, mode: usize) -> OperatorPoly {
        self.var(Variable::p(mode))
    }

    /// `Σ_k coeffs[k] · var^k` with real coefficients.
    pub fn univariate(&self, var: Variable, coeffs: &[Rational]) -> OperatorPoly {
        let mut out = self.zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.add_term(Monomial::variable(self.modes, var, k as u32), exact::real(c.clone()));
            }
        }
        out
    }
}

/// Parity convention of one mode under the combined PT map.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityConvention {
    /// P: x → −x, p → −p; T: x → x, p → −p.
    #[default]
    PseudoScalar,
    /// P: x → x, p → p; T: x → −x, p → p.
    Scalar,
}

impl ParityConvention {
    fn parity_signs(self) -> (i8, i8) {
        match self {
            ParityConvention::PseudoScalar => (-1, -1),
            ParityConvention::Scalar => (1, 1),
        }
    }

    fn time_reversal_signs(self) -> (i8, i8) {
        match self {
            ParityConvention::PseudoScalar => (1, -1),
            ParityConvention::Scalar => (-1, 1),
        }
    }

    /// Signs picked up by `(x, p)` under `PT`.
    pub fn pt_signs(self) -> (i8, i8) {
        let (px, pp) = self.parity_signs();
        let (tx, tp) = self.time_reversal_signs();
        (px * tx, pp * tp)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_hermitian: bool,
    pub is_pt_symmetric: bool,
}

/// An exact element of the Weyl algebra in normal-ordered canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorPoly {
    algebra: Algebra,
    terms: BTreeMap<Monomial, ComplexExact>,
}

impl OperatorPoly {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn modes(&self) -> usize {
        self.algebra.modes
    }

    pub fn hbar(&self) -> &Rational {
        &self.algebra.hbar
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ComplexExact)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> ComplexExact {
        self.terms.get(mono).cloned().unwrap_or_else(exact::c_zero)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: Variable) -> u32 {
        self.terms.keys().map(|m| m.power_of(var)).max().unwrap_or(0)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(exact::is_real)
    }

    /// True when every word is a power of `var` alone (constants included).
    pub fn only_involves(&self, var: Variable) -> bool {
        self.terms.keys().all(|m| m.only_involves(var))
    }

    /// Variables with a nonzero exponent somewhere in the polynomial.
    pub fn variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        for j in 0..self.modes() {
            for kind in [Canonical::X, Canonical::P] {
                let v = Variable { mode: j, kind };
                if self.degree_in(v) > 0 {
                    out.push(v);
                }
            }
        }
        out
    }

    fn add_term(&mut self, mono: Monomial, c: ComplexExact) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::IncompatibleAlgebras(format!(
                "{} mode(s) with hbar = {} vs {} mode(s) with hbar = {}",
                self.modes(),
                self.hbar(),
                other.modes(),
                other.hbar()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ComplexExact) -> Self {
        let mut out = self.algebra.zero();
        if c.is_zero() {
            return out;
        }
        for (m, z) in &self.terms {
            out.terms.insert(m.clone(), z.clone() * c.clone());
        }
        out
    }

    pub fn scale_real(&self, r: &Rational) -> Self {
        self.scale(&exact::real(r.clone()))
    }

    /// Normal-ordered product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.algebra.zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let coeff = ca.clone() * cb.clone();
                for (c, m) in word_product(ma, mb, &self.algebra.hbar) {
                    out.add_term(m, c * coeff.clone());
                }
            }
        }
        Ok(out)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let ab = self.multiply(other)?;
        let ba = other.multiply(self)?;
        ab.checked_sub(&ba)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = self.algebra.one();
        for _ in 0..k {
            out = out.multiply(self).expect("same algebra");
        }
        out
    }

    /// Hermitian adjoint: conjugate coefficients, reverse words, re-normal-order.
    pub fn adjoint(&self) -> Self {
        let mut out = self.algebra.zero();
        for (m, c) in &self.terms {
            let p_part = self.algebra.term(m.p_part(), c.conj());
            let x_part = self.algebra.term(m.x_part(), exact::c_one());
            let reversed = p_part.multiply(&x_part).expect("same algebra");
            for (mm, cc) in reversed.terms {
                out.add_term(mm, cc);
            }
        }
        out
    }

    /// The antilinear PT map with the conventional pseudo-scalar parity on every mode.
    pub fn pt_transform(&self) -> Self {
        self.pt_transform_with(&vec![ParityConvention::PseudoScalar; self.modes()])
    }

    /// The antilinear PT map with a parity convention per mode.
    pub fn pt_transform_with(&self, conventions: &[ParityConvention]) -> Self {
        assert_eq!(conventions.len(), self.modes(), "one parity convention per mode");
        let mut out = self.algebra.zero();
        for (m, c) in &self.terms {
            let mut negative = false;
            for (&(a, b), conv) in m.exponents().iter().zip(conventions) {
                let (sx, sp) = conv.pt_signs();
                if sx < 0 && a % 2 == 1 {
                    negative = !negative;
                }
                if sp < 0 && b % 2 == 1 {
                    negative = !negative;
                }
            }
            let z = c.conj();
            out.terms.insert(m.clone(), if negative { -z } else { z });
        }
        out
    }

    pub fn classify(&self) -> Classification {
        self.classify_with(&vec![ParityConvention::PseudoScalar; self.modes()])
    }

    pub fn classify_with(&self, conventions: &[ParityConvention]) -> Classification {
        Classification {
            is_hermitian: self.adjoint() == *self,
            is_pt_symmetric: self.pt_transform_with(conventions) == *self,
        }
    }

    /// Formal term-by-term derivative with respect to `var` inside the normal-ordered words.
    pub fn differentiate(&self, var: Variable) -> Self {
        let mut out = self.algebra.zero();
        for (m, c) in &self.terms {
            let k = m.power_of(var);
            if k == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            match var.kind {
                Canonical::X => exps[var.mode].0 -= 1,
                Canonical::P => exps[var.mode].1 -= 1,
            }
            out.add_term(Monomial(exps), c.clone() * exact::real(exact::integer(k as i64)));
        }
        out
    }

    /// Antiderivative in `var` with zero integration constant.
    ///
    /// Fails when a word also contains the conjugate variable of the same mode.
    pub fn integrate(&self, var: Variable) -> Result<Self> {
        let conj = var.conjugate();
        let mut out = self.algebra.zero();
        for (m, c) in &self.terms {
            if m.power_of(conj) > 0 {
                return Err(Error::NotAFunction(format!(
                    "term {} contains {} while integrating in {}",
                    format_term(m, c),
                    conj,
                    var
                )));
            }
            let k = m.power_of(var);
            let mut exps = m.0.clone();
            match var.kind {
                Canonical::X => exps[var.mode].0 += 1,
                Canonical::P => exps[var.mode].1 += 1,
            }
            let factor = exact::real(exact::rational(1, k as i64 + 1));
            out.add_term(Monomial(exps), c.clone() * factor);
        }
        Ok(out)
    }

    /// Terms whose coefficient has a nonzero imaginary part, keeping only that part.
    pub fn imaginary_part(&self) -> Self {
        let mut out = self.algebra.zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), exact::imag(c.im.clone()));
        }
        out
    }

    /// Restriction to the words satisfying `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial, &ComplexExact) -> bool) -> Self {
        let mut out = self.algebra.zero();
        for (m, c) in &self.terms {
            if keep(m, c) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Coefficients `c_k` of a polynomial in `var` alone, or `None` if other
    /// variables appear.
    pub fn univariate_coefficients(&self, var: Variable) -> Option<Vec<ComplexExact>> {
        if !self.only_involves(var) {
            return None;
        }
        let mut out = vec![exact::c_zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            out[m.power_of(var) as usize] = c.clone();
        }
        if self.is_zero() {
            out.clear();
        }
        Some(out)
    }

    /// Parses the textual form produced by `Display`.
    pub fn parse(algebra: &Algebra, text: &str) -> Result<Self> {
        let text = text.trim();
        let mut out = algebra.zero();
        if text == "0" || text.is_empty() {
            return Ok(out);
        }
        for chunk in text.split(" + ") {
            let chunk = chunk.trim();
            let close = chunk
                .find(')')
                .ok_or_else(|| Error::Parse(format!("term `{chunk}` lacks a (re,im) coefficient")))?;
            let coeff = exact::parse_complex(&chunk[..=close])?;
            let mut exps = vec![(0u32, 0u32); algebra.modes];
            for factor in chunk[close + 1..].split_whitespace() {
                let (var, power) = match factor.split_once('^') {
                    Some((v, e)) => (
                        v,
                        e.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
                    ),
                    None => (factor, 1),
                };
                let var: Variable = var.parse()?;
                if var.mode >= algebra.modes {
                    return Err(Error::Parse(format!(
                        "`{factor}` refers to mode {} but the algebra has {} mode(s)",
                        var.mode, algebra.modes
                    )));
                }
                match var.kind {
                    Canonical::X => exps[var.mode].0 += power,
                    Canonical::P => exps[var.mode].1 += power,
                }
            }
            out.add_term(Monomial(exps), coeff);
        }
        Ok(out)
    }
}

fn format_term(m: &Monomial, c: &ComplexExact) -> String {
    let mut s = exact::format_complex(c);
    for (j, &(a, b)) in m.exponents().iter().enumerate() {
        if a > 0 {
            s.push_str(&format!(" x{j}^{a}"));
        }
        if b > 0 {
            s.push_str(&format!(" p{j}^{b}"));
        }
    }
    s
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format_term(m, c)).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `(-i)^k ħ^k C(b,k) C(c,k) k!` expansion of one mode.
fn mode_product(a: u32, b: u32, c: u32, d: u32, hbar: &Rational) -> Vec<(ComplexExact, (u32, u32))> {
    let mut out = Vec::with_capacity(b.min(c) as usize + 1);
    let mut hbar_pow = Rational::one();
    for k in 0..=b.min(c) {
        let count = binomial(b, k) * binomial(c, k) * factorial(k);
        let magnitude = Rational::from_integer(count) * hbar_pow.clone();
        let coeff = match k % 4 {
            0 => exact::real(magnitude),
            1 => exact::imag(-magnitude),
            2 => exact::real(-magnitude),
            _ => exact::imag(magnitude),
        };
        out.push((coeff, (a + c - k, b + d - k)));
        hbar_pow *= hbar.clone();
    }
    out
}

fn word_product(ma: &Monomial, mb: &Monomial, hbar: &Rational) -> Vec<(ComplexExact, Monomial)> {
    let mut acc: Vec<(ComplexExact, Vec<(u32, u32)>)> = vec![(exact::c_one(), Vec::with_capacity(ma.modes()))];
    for (&(a, b), &(c, d)) in ma.exponents().iter().zip(mb.exponents()) {
        let factors = mode_product(a, b, c, d, hbar);
        if factors.len() == 1 {
            let (_, e) = factors[0];
            for (_, exps) in acc.iter_mut() {
                exps.push(e);
            }
            continue;
        }
        let mut next = Vec::with_capacity(acc.len() * factors.len());
        for (z, exps) in &acc {
            for (w, e) in &factors {
                let mut ex = exps.clone();
                ex.push(*e);
                next.push((z.clone() * w.clone(), ex));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(z, e)| (z, Monomial(e))).collect()
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&OperatorPoly> for &OperatorPoly {
            type Output = OperatorPoly;

            /// Panics if the operands live in different algebras.
            fn $method(self, rhs: &OperatorPoly) -> OperatorPoly {
                self.$checked(rhs).expect("operator polynomials from different algebras")
            }
        }

        impl std::ops::$trait<OperatorPoly> for OperatorPoly {
            type Output = OperatorPoly;

            fn $method(self, rhs: OperatorPoly) -> OperatorPoly {
                (&self).$method(&rhs)
            }
        }

        impl std::ops::$trait<&OperatorPoly> for OperatorPoly {
            type Output = OperatorPoly;

            fn $method(self, rhs: &OperatorPoly) -> OperatorPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, multiply);

impl std::ops::Neg for &OperatorPoly {
    type Output = OperatorPoly;

    fn neg(self) -> OperatorPoly {
        self.scale(&exact::real(-Rational::one()))
    }
}

impl std::ops::Neg for OperatorPoly {
    type Output = OperatorPoly;

    fn neg(self) -> OperatorPoly {
        -&self
    }
}

impl std::ops::Mul<&OperatorPoly> for &ComplexExact {
    type Output = OperatorPoly;

    fn mul(self, rhs: &OperatorPoly) -> OperatorPoly {
        rhs.scale(self)
    }
}

impl std::ops::Mul<OperatorPoly> for ComplexExact {
    type Output = OperatorPoly;

    fn mul(self, rhs: OperatorPoly) -> OperatorPoly {
        rhs.scale(&self)
    }
}

impl std::ops::Mul<OperatorPoly> for Rational {
    type Output = OperatorPoly;

    fn mul(self, rhs: OperatorPoly) -> OperatorPoly {
        rhs.scale_real(&self)
    }
}

impl std::ops::Mul<&OperatorPoly> for &Rational {
    type Output = OperatorPoly;

    fn mul(self, rhs: &OperatorPoly) -> OperatorPoly {
        rhs.scale_real(self)
    }
}

/// Builds `Complex::new(re, im)` from small integers; handy in tests.
pub fn cx(re: (i64, i64), im: (i64, i64)) -> ComplexExact {
    Complex::new(exact::rational(re.0, re.1), exact::rational(im.0, im.1))
}
