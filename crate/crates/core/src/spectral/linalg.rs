//! Dense complex matrix helpers on top of faer.

use faer::{c64, Mat, Side};

use crate::error::{Error, Result};

pub fn zero() -> c64 {
    c64::new(0.0, 0.0)
}

pub fn scaled(a: &Mat<c64>, z: c64) -> Mat<c64> {
    a * faer::Scale(z)
}

/// Maximum absolute column sum.
pub fn norm_one(a: &Mat<c64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest singular value.
pub fn norm_two(a: &Mat<c64>) -> Result<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0.0);
    }
    let sv = a
        .singular_values()
        .map_err(|e| Error::NumericalFailure(format!("singular value decomposition failed: {e:?}")))?;
    Ok(sv.into_iter().fold(0.0, f64::max))
}

pub fn leading_block(a: &Mat<c64>, size: usize) -> Mat<c64> {
    let size = size.min(a.nrows()).min(a.ncols());
    Mat::from_fn(size, size, |i, j| a[(i, j)])
}

pub fn adjoint(a: &Mat<c64>) -> Mat<c64> {
    a.adjoint().to_owned()
}

pub fn hermitian_part(a: &Mat<c64>) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// `A⁻¹ B` through a partially pivoted LU factorization.
pub fn solve(a: &Mat<c64>, b: &Mat<c64>) -> Mat<c64> {
    use faer::linalg::solvers::Solve;
    a.partial_piv_lu().solve(b)
}

/// All eigenvalues of a general complex matrix, sorted by real then imaginary part.
pub fn eigenvalues(a: &Mat<c64>) -> Result<Vec<c64>> {
    let mut ev = a
        .eigenvalues()
        .map_err(|e| Error::NumericalFailure(format!("eigensolver did not converge: {e:?}")))?;
    if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericalFailure("eigensolver produced non-finite values".into()));
    }
    sort_complex(&mut ev);
    Ok(ev)
}

/// Eigenvalues and right eigenvectors (columns) of a general complex matrix,
/// sorted like [`eigenvalues`].
pub fn eigen(a: &Mat<c64>) -> Result<(Vec<c64>, Mat<c64>)> {
    let evd = a.eigen().map_err(|e| Error::NumericalFailure(format!("eigensolver did not converge: {e:?}")))?;
    let s = evd.S().column_vector();
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    if order.iter().any(|&i| !s[i].re.is_finite() || !s[i].im.is_finite()) {
        return Err(Error::NumericalFailure("eigensolver produced non-finite values".into()));
    }
    order.sort_by(|&i, &j| s[i].re.total_cmp(&s[j].re).then(s[i].im.total_cmp(&s[j].im)));
    let u = evd.U();
    let vecs = Mat::from_fn(a.nrows(), a.ncols(), |r, c| u[(r, order[c])]);
    Ok((order.iter().map(|&i| s[i]).collect(), vecs))
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues(a: &Mat<c64>) -> Result<Vec<f64>> {
    hermitian_part(a)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::NumericalFailure(format!("Hermitian eigensolver did not converge: {e:?}")))
}

/// Eigenpairs of the Hermitian part of `a`, eigenvalues ascending.
pub fn hermitian_eigen(a: &Mat<c64>) -> Result<(Vec<f64>, Mat<c64>)> {
    let evd = hermitian_part(a)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NumericalFailure(format!("Hermitian eigensolver did not converge: {e:?}")))?;
    let values = (0..a.nrows()).map(|i| evd.S()[i].re).collect();
    Ok((values, evd.U().to_owned()))
}

pub fn sort_complex(v: &mut [c64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with the degree-13 Padé approximant.
pub fn expm(a: &Mat<c64>) -> Result<Mat<c64>> {
    let n = a.nrows();
    let norm = norm_one(a);
    if !norm.is_finite() {
        return Err(Error::NumericalFailure("matrix exponential of a non-finite matrix".into()));
    }
    if norm == 0.0 {
        return Ok(Mat::identity(n, n));
    }
    let squarings = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = scaled(a, c64::new(0.5f64.powi(squarings), 0.0));
    let b = |k: usize| c64::new(PADE13[k], 0.0);
    let ident = Mat::<c64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let inner_u = scaled(&a6, b(13)) + scaled(&a4, b(11)) + scaled(&a2, b(9));
    let u_poly = &a6 * &inner_u + scaled(&a6, b(7)) + scaled(&a4, b(5)) + scaled(&a2, b(3)) + scaled(&ident, b(1));
    let u = &a * &u_poly;
    let inner_v = scaled(&a6, b(12)) + scaled(&a4, b(10)) + scaled(&a2, b(8));
    let v = &a6 * &inner_v + scaled(&a6, b(6)) + scaled(&a4, b(4)) + scaled(&a2, b(2)) + scaled(&ident, b(0));

    let mut r = solve(&(&v - &u), &(&v + &u));
    for _ in 0..squarings {
        r = &r * &r;
    }
    if (0..n).any(|i| (0..n).any(|j| !r[(i, j)].re.is_finite() || !r[(i, j)].im.is_finite())) {
        return Err(Error::NumericalFailure("matrix exponential overflowed".into()));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> c64 {
        c64::new(re, im)
    }

    #[test]
    fn expm_of_diagonal_and_nilpotent() {
        let d = Mat::from_fn(3, 3, |i, j| if i == j { c(i as f64 - 1.0, 0.5) } else { zero() });
        let e = expm(&d).unwrap();
        for i in 0..3 {
            let want = c(i as f64 - 1.0, 0.5).exp();
            assert!((e[(i, i)] - want).norm() < 1e-14 * want.norm());
        }
        let nil = Mat::from_fn(3, 3, |i, j| if j == i + 1 { c(2.0, 0.0) } else { zero() });
        let e = expm(&nil).unwrap();
        assert!((e[(0, 2)] - c(2.0, 0.0)).norm() < 1e-14);
        assert!((e[(0, 1)] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn expm_rotation_with_large_norm() {
        let t = 40.0;
        let gen = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(-t, 0.0),
            (1, 0) => c(t, 0.0),
            _ => zero(),
        });
        let e = expm(&gen).unwrap();
        assert!((e[(0, 0)] - c(t.cos(), 0.0)).norm() < 1e-12);
        assert!((e[(1, 0)] - c(t.sin(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn expm_inverse_pair() {
        let a = Mat::from_fn(6, 6, |i, j| c(((i * 7 + j * 3) % 5) as f64 * 0.3 - 0.6, ((i + 2 * j) % 3) as f64 * 0.2));
        let prod = expm(&a).unwrap() * expm(&scaled(&a, c(-1.0, 0.0))).unwrap();
        let diff = &prod - Mat::<c64>::identity(6, 6);
        assert!(norm_two(&diff).unwrap() < 1e-12);
    }

    #[test]
    fn eigenvalues_are_sorted() {
        let a = Mat::from_fn(3, 3, |i, j| if i == j { c(2.0 - i as f64, -(i as f64)) } else { zero() });
        let ev = eigenvalues(&a).unwrap();
        assert!(ev.windows(2).all(|w| w[0].re <= w[1].re));
        assert!((ev[0] - c(0.0, -2.0)).norm() < 1e-14);
    }
}
