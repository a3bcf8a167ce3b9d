//! Totally positive matrices: minor tests, elementary generators, the
//! longest-word parametrization of U^{>0}, Whitney factorization, and a
//! numeric eigenvalue check.

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmat::{combinations, det, inverse, is_positive_definite, RatMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedWord {
    pub letters: Vec<usize>,
    pub n: usize,
}

impl ReducedWord {
    pub fn new(letters: Vec<usize>, n: usize) -> Result<Self> {
        if letters.iter().any(|&i| i == 0 || i >= n) {
            return Err(Error::Domain(format!("letters must lie in 1..={}", n.saturating_sub(1))));
        }
        if letters.len() > n * (n - 1) / 2 {
            return Err(Error::Domain("word longer than the longest element".into()));
        }
        // w s_i is longer than w iff w(i) < w(i+1)
        let mut w: Vec<usize> = (0..n).collect();
        for (k, &i) in letters.iter().enumerate() {
            if w[i - 1] > w[i] {
                return Err(Error::Domain(format!("word is not reduced at position {}", k + 1)));
            }
            w.swap(i - 1, i);
        }
        Ok(ReducedWord { letters, n })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriFactorization {
    pub lower: RatMatrix,
    pub diag: RatMatrix,
    pub upper: RatMatrix,
}

impl TriFactorization {
    pub fn product(&self) -> RatMatrix {
        self.lower.matmul(&self.diag).and_then(|x| x.matmul(&self.upper)).expect("square factors")
    }
}

/// Visits every minor; stops early when `f` returns false.
fn all_minors(m: &RatMatrix, mut f: impl FnMut(&[usize], &[usize], &Rational) -> bool) -> bool {
    let n = m.rows();
    for k in 1..=n {
        let sets = combinations(n, k);
        for i in &sets {
            let r: Vec<usize> = i.iter().map(|x| x - 1).collect();
            for j in &sets {
                let c: Vec<usize> = j.iter().map(|x| x - 1).collect();
                let d = det(&m.submatrix(&r, &c)).expect("square submatrix");
                if !f(i, j, &d) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_totally_positive(m: &RatMatrix) -> bool {
    m.is_square() && all_minors(m, |_, _, d| d.is_positive())
}

pub fn is_totally_nonnegative(m: &RatMatrix) -> bool {
    m.is_square() && all_minors(m, |_, _, d| !d.is_negative())
}

pub fn is_unitriangular_upper(u: &RatMatrix) -> bool {
    u.is_square()
        && (0..u.rows()).all(|i| {
            u[(i, i)].is_one() && (0..i).all(|j| u[(i, j)].is_zero())
        })
}

/// A minor of an upper unitriangular matrix is forced to vanish when some
/// row index exceeds the matching column index.
pub fn forced_zero(rows: &[usize], cols: &[usize]) -> bool {
    rows.iter().zip(cols).any(|(i, j)| i > j)
}

pub fn is_u_positive(u: &RatMatrix) -> Result<bool> {
    if !is_unitriangular_upper(u) {
        return Err(Error::Domain("expected an upper unitriangular matrix".into()));
    }
    Ok(all_minors(u, |i, j, d| forced_zero(i, j) || d.is_positive()))
}

/// u_i(t) = I + t E_{i,i+1}, with i 1-based.
pub fn generator_u(i: usize, t: &Rational, n: usize) -> Result<RatMatrix> {
    if i == 0 || i >= n {
        return Err(Error::Domain(format!("generator index {i} outside 1..={}", n.saturating_sub(1))));
    }
    let mut m = RatMatrix::identity(n);
    m[(i - 1, i)] = t.clone();
    Ok(m)
}

/// Lower counterpart I + t E_{i+1,i}.
pub fn generator_l(i: usize, t: &Rational, n: usize) -> Result<RatMatrix> {
    Ok(generator_u(i, t, n)?.transpose())
}

/// Blocks (n−1, …, 1), (n−1, …, 2), …, (n−1).
pub fn longest_word(n: usize) -> Result<ReducedWord> {
    if n < 2 {
        return Err(Error::Domain("longest word needs n >= 2".into()));
    }
    let mut letters = Vec::with_capacity(n * (n - 1) / 2);
    for low in 1..n {
        letters.extend((low..n).rev());
    }
    ReducedWord::new(letters, n)
}

pub fn param_f(word: &ReducedWord, params: &[Rational]) -> Result<RatMatrix> {
    if params.len() != word.len() {
        return Err(Error::Shape(format!(
            "word has {} letters but {} parameters given",
            word.len(),
            params.len()
        )));
    }
    let mut m = RatMatrix::identity(word.n);
    for (&i, t) in word.letters.iter().zip(params) {
        m = m.matmul(&generator_u(i, t, word.n)?)?;
    }
    Ok(m)
}

/// Column-by-column elimination, each row cleared against the row above it.
/// Returns (L, R) with L unit lower triangular and L·R = m, R upper triangular.
fn neville_lower(m: &RatMatrix) -> Result<(RatMatrix, RatMatrix)> {
    let n = m.rows();
    let mut cur = m.clone();
    let mut lower = RatMatrix::identity(n);
    for j in 0..n {
        for i in (j + 1..n).rev() {
            let num = cur[(i, j)].clone();
            if num.is_zero() {
                continue;
            }
            let piv = cur[(i - 1, j)].clone();
            if piv.is_zero() {
                return Err(Error::Precondition(format!(
                    "zero pivot at row {} column {} during elimination",
                    i,
                    j + 1
                )));
            }
            let f = num / piv;
            for c in 0..n {
                let v = &cur[(i - 1, c)] * &f;
                cur[(i, c)] -= v;
            }
            // cur_new = E·cur_old with E = I − f E_{i,i−1}; L accumulates E^{-1} on the right
            lower = lower.matmul(&generator_l(i, &f, n)?)?;
        }
    }
    Ok((lower, cur))
}

pub fn whitney_factorize(m: &RatMatrix) -> Result<TriFactorization> {
    if !m.is_square() {
        return Err(Error::Shape("whitney factorization needs a square matrix".into()));
    }
    let n = m.rows();
    let (lower, r) = neville_lower(m)?;
    let (l2, d) = neville_lower(&r.transpose())?;
    for i in 0..n {
        if !d[(i, i)].is_positive() {
            return Err(Error::Precondition(format!("non-positive pivot {} in diagonal factor", d[(i, i)])));
        }
        for j in 0..n {
            if i != j && !d[(i, j)].is_zero() {
                return Err(Error::Precondition("elimination did not reach a diagonal".into()));
            }
        }
    }
    Ok(TriFactorization { lower, diag: d.transpose(), upper: l2.transpose() })
}

/// Numeric check that the spectrum is real, positive and simple.
pub fn gk_spectrum_check(m: &RatMatrix, tol: f64) -> bool {
    if !m.is_square() || m.rows() == 0 {
        return false;
    }
    let a: DMatrix<f64> = m.to_f64();
    let ev = a.complex_eigenvalues();
    let mut re = Vec::with_capacity(ev.len());
    for z in ev.iter() {
        if z.im.abs() >= tol || z.re <= tol {
            return false;
        }
        re.push(z.re);
    }
    re.sort_by(|a, b| a.partial_cmp(b).unwrap());
    re.windows(2).all(|w| w[1] - w[0] > tol)
}

pub fn sl2_positive(m: &RatMatrix) -> Result<bool> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::Shape("expected a 2x2 matrix".into()));
    }
    if !det(m)?.is_one() {
        return Err(Error::Domain("determinant is not 1".into()));
    }
    Ok(m.entries().iter().all(|x| x.is_positive()))
}

/// Factors (I N; 0 I)(I 0; M I) as V·H·W with V lower block-unipotent,
/// H block diagonal and W upper block-unipotent.
pub fn sp_positive_factor(n_mat: &RatMatrix, m_mat: &RatMatrix) -> Result<(RatMatrix, RatMatrix, RatMatrix)> {
    if !n_mat.is_square() || n_mat.rows() != m_mat.rows() || !m_mat.is_square() {
        return Err(Error::Shape("N and M must be square of equal size".into()));
    }
    if !is_positive_definite(n_mat) {
        return Err(Error::Precondition("N is not symmetric positive definite".into()));
    }
    if !is_positive_definite(m_mat) {
        return Err(Error::Precondition("M is not symmetric positive definite".into()));
    }
    let n = n_mat.rows();
    let id = RatMatrix::identity(n);
    let zero = RatMatrix::zeros(n, n);
    let a = id.add(&n_mat.matmul(m_mat)?)?;
    let a_inv = inverse(&a).map_err(|_| Error::Precondition("I + NM is singular".into()))?;
    let v = RatMatrix::blocks(&id, &zero, &m_mat.matmul(&a_inv)?, &id)?;
    let h = RatMatrix::blocks(&a, &zero, &zero, &a_inv)?;
    let w = RatMatrix::blocks(&id, &a_inv.matmul(n_mat)?, &zero, &id)?;
    Ok((v, h, w))
}
