//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use num::{BigInt, Complex, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use realclose::exact::{self, ComplexExact, Rational};
use realclose::{Algebra, ModelSpec, Monomial, OperatorPoly};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational in `[-3, 3]` with denominator at most 4.
pub fn small_rational(r: &mut impl Rng) -> Rational {
    let den: i64 = r.random_range(1..=4);
    let num: i64 = r.random_range(-3 * den..=3 * den);
    exact::rational(num, den)
}

pub fn nonzero_rational(r: &mut impl Rng) -> Rational {
    loop {
        let q = small_rational(r);
        if !q.is_zero() {
            return q;
        }
    }
}

pub fn positive_rational(r: &mut impl Rng) -> Rational {
    let den: i64 = r.random_range(1..=4);
    let num: i64 = r.random_range(1..=3 * den);
    exact::rational(num, den)
}

pub fn small_complex(r: &mut impl Rng) -> ComplexExact {
    Complex::new(small_rational(r), small_rational(r))
}

/// Random polynomial with up to `terms` words of total degree at most `max_degree`.
pub fn random_poly(alg: &Algebra, r: &mut impl Rng, max_degree: u32, terms: usize) -> OperatorPoly {
    let mut out = alg.zero();
    for _ in 0..r.random_range(1..=terms) {
        out = out + alg.term(random_monomial(alg.modes(), r, max_degree), small_complex(r));
    }
    out
}

pub fn random_monomial(modes: usize, r: &mut impl Rng, max_degree: u32) -> Monomial {
    let mut budget = r.random_range(0..=max_degree);
    let mut exps = vec![(0u32, 0u32); modes];
    while budget > 0 {
        let j = r.random_range(0..modes);
        if r.random_bool(0.5) {
            exps[j].0 += 1;
        } else {
            exps[j].1 += 1;
        }
        budget -= 1;
    }
    Monomial::new(exps)
}

/// Coefficients drawn for a one-variable general model: `(V, series, n)` with
/// no constant in `V`, `deg V ≤ 4`, `K ≤ 3` and `n ∈ {1, 2}`.
pub fn random_general_parts(r: &mut impl Rng) -> (Vec<Rational>, Vec<Rational>, u32) {
    let deg_v = r.random_range(1..=4);
    let mut v: Vec<Rational> = (0..=deg_v).map(|_| small_rational(r)).collect();
    v[0] = Rational::zero();
    let k = r.random_range(0..=3);
    let mut series: Vec<Rational> = (0..=k).map(|_| small_rational(r)).collect();
    if series.iter().all(Zero::is_zero) {
        series[0] = nonzero_rational(r);
    }
    let n = r.random_range(1..=2);
    (v, series, n)
}

pub fn random_general_x(r: &mut impl Rng) -> ModelSpec {
    let m = positive_rational(r);
    let (v, series, n) = random_general_parts(r);
    ModelSpec::general_x(m, v, series, n)
}

pub fn random_general_p(r: &mut impl Rng) -> ModelSpec {
    let a = positive_rational(r);
    let (v, series, n) = random_general_parts(r);
    ModelSpec::general_p(a, v, series, n)
}

/// Commutative univariate polynomial arithmetic on ascending coefficient lists.
pub mod uni {
    use super::*;

    pub fn shift(c: &[Rational], n: u32) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n as usize];
        out.extend_from_slice(c);
        out
    }

    pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] += y;
        }
        out
    }

    pub fn scale(a: &[Rational], s: &Rational) -> Vec<Rational> {
        a.iter().map(|x| x * s).collect()
    }

    pub fn derivative(a: &[Rational]) -> Vec<Rational> {
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
            .collect()
    }
}

/// Dense complex matrices built directly from ladder operators, independent of
/// the library's numerical layer.
pub mod dense {
    use super::*;

    pub type C = Complex<f64>;
    pub type Mat = Vec<Vec<C>>;

    pub fn zeros(n: usize) -> Mat {
        vec![vec![C::new(0.0, 0.0); n]; n]
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = zeros(n);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = C::new(1.0, 0.0);
        }
        m
    }

    pub fn mul(a: &Mat, b: &Mat) -> Mat {
        let n = a.len();
        let mut out = zeros(n);
        for i in 0..n {
            for k in 0..n {
                if a[i][k] == C::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    /// `x = (a + a†)/√2`, `p = i(a† − a)/√2` at ħ = 1.
    pub fn position_momentum(n: usize) -> (Mat, Mat) {
        let mut x = zeros(n);
        let mut p = zeros(n);
        for k in 1..n {
            let s = (k as f64 / 2.0).sqrt();
            x[k - 1][k] = C::new(s, 0.0);
            x[k][k - 1] = C::new(s, 0.0);
            p[k][k - 1] = C::new(0.0, s);
            p[k - 1][k] = C::new(0.0, -s);
        }
        (x, p)
    }

    pub fn pow(a: &Mat, k: u32) -> Mat {
        (0..k).fold(identity(a.len()), |acc, _| mul(&acc, a))
    }

    /// Single-mode polynomial as a truncated matrix.
    pub fn of(poly: &OperatorPoly, n: usize) -> Mat {
        let (x, p) = position_momentum(n);
        let mut out = zeros(n);
        for (mono, c) in poly.terms() {
            let (a, b) = mono.exponents()[0];
            let word = mul(&pow(&x, a), &pow(&p, b));
            let z = exact::to_c64(c);
            for i in 0..n {
                for j in 0..n {
                    out[i][j] += z * word[i][j];
                }
            }
        }
        out
    }

    pub fn max_diff_leading(a: &Mat, b: &Mat, block: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..block {
            for j in 0..block {
                worst = worst.max((a[i][j] - b[i][j]).norm());
            }
        }
        worst
    }

    pub fn adjoint(a: &Mat) -> Mat {
        let n = a.len();
        let mut out = zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[j][i] = a[i][j].conj();
            }
        }
        out
    }
}
