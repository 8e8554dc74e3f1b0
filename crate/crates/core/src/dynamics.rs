//! Heisenberg equations of motion and the real-closure decision.
//!
//! Time derivatives are nested commutators, `dᵏO/dtᵏ = (1/iħ)ᵏ ad_Hᵏ(O)` with
//! `ad_H(O) = [O, H]`. A second-order equation is real closed when `d²q/dt²`
//! is a real polynomial in `q` alone. Higher even orders are decided by fitting
//! a real linear relation between the even derivatives.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, ComplexExact, Rational};
use crate::weyl::{Monomial, OperatorPoly, Variable};

/// Default cap on the number of nested commutators.
pub const MAX_DEPTH: u32 = 6;

/// Outcome of a closure analysis for one variable.
#[derive(Clone, Debug, PartialEq)]
pub struct EomReport {
    pub variable: Variable,
    pub order: u32,
    pub real_closed: bool,
    /// `d²q/dt²` as a real polynomial in `q` when a second-order analysis closes.
    pub force_poly: Option<OperatorPoly>,
    /// `[c_1, ..., c_r]` with `q^{(2r)} + Σ_j c_j q^{(2r-2j)} = 0`; `(α, β)` at order 4.
    pub linear_coeffs: Option<Vec<Rational>>,
    /// Zero when closed; otherwise the part that obstructs closure.
    pub residual: OperatorPoly,
    /// Set when the linear relation is not unique; the minimal-norm one is reported.
    pub ambiguous: bool,
    pub inertia: Rational,
}

impl EomReport {
    pub fn alpha(&self) -> Option<&Rational> {
        self.linear_coeffs.as_ref().and_then(|c| c.first())
    }

    pub fn beta(&self) -> Option<&Rational> {
        self.linear_coeffs.as_ref().and_then(|c| c.get(1))
    }
}

/// `(1/iħ)[O, H]`.
pub fn time_derivative(o: &OperatorPoly, h: &OperatorPoly) -> Result<OperatorPoly> {
    let inv_ih = exact::imag(-o.hbar().recip());
    Ok(o.commutator(h)?.scale(&inv_ih))
}

/// `(1/iħ)ᵏ ad_Hᵏ(O)` for `k ≤` [`MAX_DEPTH`].
pub fn nth_time_derivative(o: &OperatorPoly, h: &OperatorPoly, k: u32) -> Result<OperatorPoly> {
    nth_time_derivative_capped(o, h, k, MAX_DEPTH)
}

pub fn nth_time_derivative_capped(o: &OperatorPoly, h: &OperatorPoly, k: u32, max: u32) -> Result<OperatorPoly> {
    if k > max {
        return Err(Error::DepthExceeded { requested: k, max });
    }
    let mut out = o.clone();
    for _ in 0..k {
        out = time_derivative(&out, h)?;
    }
    Ok(out)
}

/// Decides whether `d²q/dt²` is a real polynomial in `q` alone.
pub fn real_closure_second_order(h: &OperatorPoly, variable: Variable, inertia: &Rational) -> Result<EomReport> {
    check_variable(h, variable)?;
    let q = h.algebra().var(variable);
    let accel = nth_time_derivative(&q, h, 2)?;
    let foreign = accel.filter_terms(|m, _| !m.only_involves(variable));
    let own_imaginary = accel.filter_terms(|m, _| m.only_involves(variable)).imaginary_part();
    let residual = &foreign + &own_imaginary;
    let real_closed = residual.is_zero();
    Ok(EomReport {
        variable,
        order: 2,
        real_closed,
        force_poly: real_closed.then_some(accel),
        linear_coeffs: None,
        residual,
        ambiguous: false,
        inertia: inertia.clone(),
    })
}

/// Fits real `c_j` with `q^{(order)} + Σ_j c_j q^{(order-2j)} = 0` exactly.
pub fn linear_closure_fit(h: &OperatorPoly, variable: Variable, order: u32) -> Result<EomReport> {
    linear_closure_fit_with_inertia(h, variable, order, &Rational::one())
}

pub fn linear_closure_fit_with_inertia(
    h: &OperatorPoly,
    variable: Variable,
    order: u32,
    inertia: &Rational,
) -> Result<EomReport> {
    check_variable(h, variable)?;
    if order < 2 || order % 2 == 1 {
        return Err(Error::InvalidParameter(format!("closure order must be even and at least 2, got {order}")));
    }
    let q = h.algebra().var(variable);
    let r = (order / 2) as usize;
    // even[j] = q^{(2j)}
    let mut even = vec![q.clone()];
    for j in 1..=r {
        even.push(nth_time_derivative(&even[j - 1], h, 2)?);
    }
    let top = &even[r];
    let basis: Vec<&OperatorPoly> = (1..=r).map(|j| &even[r - j]).collect();

    let mut monomials: Vec<&Monomial> = even.iter().flat_map(|p| p.terms().map(|(m, _)| m)).collect();
    monomials.sort();
    monomials.dedup();

    // One real equation per (monomial, real/imaginary part).
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for m in &monomials {
        for part in [Part::Re, Part::Im] {
            rows.push(basis.iter().map(|p| part.of(&p.coefficient(m))).collect());
            rhs.push(-part.of(&top.coefficient(m)));
        }
    }

    let (coeffs, ambiguous) = least_squares_min_norm(&rows, &rhs, r);
    let mut residual = top.clone();
    for (c, p) in coeffs.iter().zip(&basis) {
        residual = &residual + &p.scale_real(c);
    }
    let real_closed = residual.is_zero();
    Ok(EomReport {
        variable,
        order,
        real_closed,
        force_poly: None,
        linear_coeffs: Some(coeffs),
        residual,
        ambiguous,
        inertia: inertia.clone(),
    })
}

#[derive(Clone, Copy)]
enum Part {
    Re,
    Im,
}

impl Part {
    fn of(self, z: &ComplexExact) -> Rational {
        match self {
            Part::Re => z.re.clone(),
            Part::Im => z.im.clone(),
        }
    }
}

fn check_variable(h: &OperatorPoly, variable: Variable) -> Result<()> {
    if variable.mode >= h.modes() {
        return Err(Error::InvalidParameter(format!(
            "variable {variable} is outside the {}-mode algebra",
            h.modes()
        )));
    }
    Ok(())
}

/// Minimal-norm least-squares solution of `A c = b` over the rationals,
/// together with a flag for rank deficiency.
fn least_squares_min_norm(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> (Vec<Rational>, bool) {
    // Normal equations G c = g always have a solution.
    let mut g = vec![vec![Rational::zero(); cols]; cols];
    let mut rhs = vec![Rational::zero(); cols];
    for (row, bi) in a.iter().zip(b) {
        for i in 0..cols {
            if row[i].is_zero() {
                continue;
            }
            for j in 0..cols {
                g[i][j] += &row[i] * &row[j];
            }
            rhs[i] += &row[i] * bi;
        }
    }
    let (reduced, reduced_rhs) = row_reduce(g, rhs);
    let rank = reduced.len();
    if rank == 0 {
        return (vec![Rational::zero(); cols], cols > 0);
    }
    // c = Rᵀ y with (R Rᵀ) y = d keeps c in the row space.
    let mut gram = vec![vec![Rational::zero(); rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            gram[i][j] = (0..cols).map(|k| &reduced[i][k] * &reduced[j][k]).sum();
        }
    }
    let y = solve_square(gram, reduced_rhs);
    let c = (0..cols).map(|k| (0..rank).map(|i| &reduced[i][k] * &y[i]).sum()).collect();
    (c, rank < cols)
}

/// Reduced row echelon form, returning only the nonzero rows.
fn row_reduce(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(sel) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, sel);
        rhs.swap(pivot_row, sel);
        let inv = m[pivot_row][col].recip();
        for k in 0..cols {
            m[pivot_row][k] *= &inv;
        }
        rhs[pivot_row] *= &inv;
        for r in 0..rows {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in 0..cols {
                    let sub = &f * &m[pivot_row][k];
                    m[r][k] -= sub;
                }
                let sub = &f * &rhs[pivot_row];
                rhs[r] -= sub;
            }
        }
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    m.truncate(pivot_row);
    rhs.truncate(pivot_row);
    (m, rhs)
}

fn solve_square(m: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Vec<Rational> {
    let (_, x) = row_reduce(m, rhs);
    x
}

/// Largest absolute coefficient of a residual, as a quick magnitude summary.
pub fn residual_size(p: &OperatorPoly) -> Rational {
    p.terms()
        .map(|(_, c)| c.re.abs().max(c.im.abs()))
        .max()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{integer, rational};
    use crate::models::ModelSpec;
    use crate::weyl::{Algebra, OperatorPoly};

    fn swanson(m: i64, w: i64, c: i64) -> OperatorPoly {
        ModelSpec::swanson(integer(m), integer(w), integer(c)).build().unwrap()
    }

    #[test]
    fn swanson_first_order_equations() {
        let (m, w, c) = (2, 3, 5);
        let h = swanson(m, w, c);
        let alg = h.algebra().clone();
        let xdot = time_derivative(&alg.x(0), &h).unwrap();
        let want = alg.p(0).scale_real(&rational(1, m)) + alg.x(0).scale(&exact::imag(integer(c)));
        assert_eq!(xdot, want);
        let pdot = time_derivative(&alg.p(0), &h).unwrap();
        let want = alg.x(0).scale_real(&integer(-m * w * w)) - alg.p(0).scale(&exact::imag(integer(c)));
        assert_eq!(pdot, want);
        assert!(time_derivative(&alg.one(), &h).unwrap().is_zero());
    }

    #[test]
    fn swanson_closes_in_x() {
        let h = swanson(1, 3, 4);
        let alg = h.algebra().clone();
        let second = nth_time_derivative(&alg.x(0), &h, 2).unwrap();
        assert_eq!(second, alg.x(0).scale_real(&integer(-25)));
        let rep = real_closure_second_order(&h, Variable::x(0), &integer(1)).unwrap();
        assert!(rep.real_closed);
        assert!(rep.residual.is_zero());
        assert_eq!(rep.force_poly.unwrap(), alg.x(0).scale_real(&integer(-25)));
    }

    #[test]
    fn hermitian_baseline() {
        let alg = Algebra::single();
        let m = integer(3);
        let v = alg.univariate(Variable::x(0), &[integer(0), integer(2), integer(0), integer(-1), rational(1, 4)]);
        let h = alg.p(0).pow(2).scale_real(&(m.recip() / integer(2))) + v.clone();
        let rep = real_closure_second_order(&h, Variable::x(0), &m).unwrap();
        let want = v.differentiate(Variable::x(0)).scale_real(&-m.recip());
        assert_eq!(rep.force_poly.unwrap(), want);
    }

    #[test]
    fn quartic_general_x_example() {
        let spec = ModelSpec::general_x(integer(1), vec![integer(0), integer(0), integer(0), integer(0), rational(1, 4)], vec![integer(1)], 1);
        let h = spec.build().unwrap();
        let rep = real_closure_second_order(&h, Variable::x(0), &integer(1)).unwrap();
        let alg = h.algebra();
        let want = -(alg.x(0).pow(3) + alg.x(0));
        assert_eq!(rep.force_poly.unwrap(), want);
    }

    #[test]
    fn imaginary_cubic_does_not_close() {
        let alg = Algebra::single();
        let h = OperatorPoly::parse(&alg, "(1/2,0) p0^2 + (0,1) x0^3").unwrap();
        let rep = real_closure_second_order(&h, Variable::x(0), &integer(1)).unwrap();
        assert!(!rep.real_closed);
        assert!(rep.force_poly.is_none());
        let want = alg.x(0).pow(2).scale(&exact::imag(integer(-3)));
        assert_eq!(rep.residual, want);
    }

    #[test]
    fn depth_is_capped() {
        let h = swanson(1, 1, 1);
        let x = h.algebra().x(0);
        assert_eq!(
            nth_time_derivative(&x, &h, 7),
            Err(Error::DepthExceeded { requested: 7, max: MAX_DEPTH })
        );
        assert!(nth_time_derivative(&x, &h, 6).is_ok());
    }

    #[test]
    fn pu_i_fourth_order() {
        let h = ModelSpec::pu_i(integer(1), integer(2), integer(1)).build().unwrap();
        for j in 0..2 {
            let rep = linear_closure_fit(&h, Variable::x(j), 4).unwrap();
            assert!(rep.real_closed, "x{j}: {}", rep.residual);
            assert_eq!(rep.linear_coeffs.unwrap(), vec![integer(5), integer(4)]);
            assert!(!rep.ambiguous);
        }
    }

    #[test]
    fn pu_ii_fourth_order() {
        let h = ModelSpec::pu_ii(integer(1), integer(2), integer(1), integer(2)).build().unwrap();
        for j in 0..2 {
            let rep = linear_closure_fit(&h, Variable::x(j), 4).unwrap();
            assert!(rep.real_closed);
            assert_eq!(rep.linear_coeffs.unwrap(), vec![integer(5), integer(5)]);
        }
    }

    #[test]
    fn degenerate_frequencies_are_flagged() {
        let h = ModelSpec::pu_i(integer(1), integer(1), integer(1)).build().unwrap();
        let rep = linear_closure_fit(&h, Variable::x(0), 4).unwrap();
        assert!(rep.real_closed);
        assert_eq!(rep.linear_coeffs.unwrap(), vec![integer(2), integer(1)]);
    }

    #[test]
    fn decoupled_oscillator_is_ambiguous_at_order_four() {
        // x'' = -x makes x'''' + αx'' + βx = 0 hold along the line α - β = 1.
        let alg = Algebra::single();
        let h = rational(1, 2) * (alg.p(0).pow(2) + alg.x(0).pow(2));
        let rep = linear_closure_fit(&h, Variable::x(0), 4).unwrap();
        assert!(rep.real_closed);
        assert!(rep.ambiguous);
        let c = rep.linear_coeffs.unwrap();
        assert_eq!(&c[0] - &c[1], integer(1));
        assert_eq!(c, vec![rational(1, 2), rational(-1, 2)]);
    }

    #[test]
    fn complex_coefficients_block_the_fit() {
        let alg = Algebra::single();
        let h = OperatorPoly::parse(&alg, "(1/2,0) p0^2 + (0,1) x0^3").unwrap();
        let rep = linear_closure_fit(&h, Variable::x(0), 4).unwrap();
        assert!(!rep.real_closed);
        assert!(!rep.residual.is_zero());
    }
}
