//! Lagrangian subspaces of the standard symplectic Q^{2n}, exact signatures,
//! and the Maslov index of Lagrangian triples.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmat::{rank, solve, RatMatrix, Rational};

/// J = [[0, I], [-I, 0]].
pub fn j_matrix(n: usize) -> RatMatrix {
    let id = RatMatrix::identity(n);
    let z = RatMatrix::zeros(n, n);
    RatMatrix::blocks(&z, &id, &id.neg(), &z).unwrap()
}

/// ω(x, y) = xᵀ J y for column blocks x, y.
pub fn omega(x: &RatMatrix, y: &RatMatrix) -> Result<RatMatrix> {
    if !x.rows().is_multiple_of(2) {
        return Err(Error::Shape("symplectic vectors need even length".into()));
    }
    x.transpose().matmul(&j_matrix(x.rows() / 2))?.matmul(y)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lagrangian {
    basis: RatMatrix,
}

impl Lagrangian {
    pub fn new(basis: RatMatrix) -> Result<Self> {
        if !is_lagrangian(&basis) {
            return Err(Error::Domain("basis does not span a Lagrangian subspace".into()));
        }
        Ok(Lagrangian { basis })
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.cols()
    }

    /// Graph {(v, S v)} of a symmetric S.
    pub fn graph(s: &RatMatrix) -> Result<Self> {
        if !s.is_symmetric() {
            return Err(Error::Domain("graph needs a symmetric matrix".into()));
        }
        Self::new(RatMatrix::identity(s.rows()).vcat(s)?)
    }

    pub fn transform(&self, g: &RatMatrix) -> Result<Self> {
        Self::new(g.matmul(&self.basis)?)
    }
}

pub fn is_lagrangian(b: &RatMatrix) -> bool {
    let n = b.cols();
    b.rows() == 2 * n && n > 0 && rank(b) == n && omega(b, b).map(|m| m.is_zero()).unwrap_or(false)
}

/// Exact congruence diagonalization: returns (P, d) with Pᵀ Q P = diag(d), P invertible.
pub fn diagonalize(q: &RatMatrix) -> Result<(RatMatrix, Vec<Rational>)> {
    if !q.is_symmetric() {
        return Err(Error::Domain("quadratic form matrix must be symmetric".into()));
    }
    let n = q.rows();
    let mut a = q.clone();
    let mut p = RatMatrix::identity(n);

    // basis change b_i <- b_i + f b_j, applied to the form and to P
    fn add_col(a: &mut RatMatrix, p: &mut RatMatrix, i: usize, j: usize, f: &Rational) {
        let n = a.rows();
        for r in 0..n {
            let v = &a[(r, j)] * f;
            a[(r, i)] += v;
        }
        for c in 0..n {
            let v = &a[(j, c)] * f;
            a[(i, c)] += v;
        }
        for r in 0..n {
            let v = &p[(r, j)] * f;
            p[(r, i)] += v;
        }
    }
    fn swap(a: &mut RatMatrix, p: &mut RatMatrix, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = a.rows();
        for r in 0..n {
            let t = a[(r, i)].clone();
            a[(r, i)] = a[(r, j)].clone();
            a[(r, j)] = t;
            let t = p[(r, i)].clone();
            p[(r, i)] = p[(r, j)].clone();
            p[(r, j)] = t;
        }
        for c in 0..n {
            let t = a[(i, c)].clone();
            a[(i, c)] = a[(j, c)].clone();
            a[(j, c)] = t;
        }
    }

    for k in 0..n {
        let piv = (k..n).find(|&i| !a[(i, i)].is_zero());
        match piv {
            Some(i) => swap(&mut a, &mut p, k, i),
            None => {
                // hyperbolic pair: b_i + b_j has value 2 a_ij
                let pair = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[(i, j)].is_zero());
                let Some((i, j)) = pair else { break };
                add_col(&mut a, &mut p, i, j, &Rational::one());
                swap(&mut a, &mut p, k, i);
            }
        }
        let d = a[(k, k)].clone();
        for j in k + 1..n {
            if !a[(k, j)].is_zero() {
                let f = -(&a[(k, j)] / &d);
                add_col(&mut a, &mut p, j, k, &f);
            }
        }
    }
    let d = (0..n).map(|i| a[(i, i)].clone()).collect();
    Ok((p, d))
}

/// (positive, negative, zero) counts.
pub fn signature(q: &RatMatrix) -> Result<(usize, usize, usize)> {
    let (_, d) = diagonalize(q)?;
    let p = d.iter().filter(|x| x.is_positive()).count();
    let m = d.iter().filter(|x| x.is_negative()).count();
    Ok((p, m, d.len() - p - m))
}

fn same_space(ls: &[&Lagrangian]) -> Result<usize> {
    let n = ls[0].n();
    if ls.iter().any(|l| l.n() != n) {
        return Err(Error::Shape("Lagrangians live in different symplectic spaces".into()));
    }
    Ok(n)
}

/// Gram matrix of the triple form on L1 × L2 × L3, global factor 1/2 dropped.
pub fn kashiwara_gram(l1: &Lagrangian, l2: &Lagrangian, l3: &Lagrangian) -> Result<RatMatrix> {
    let n = same_space(&[l1, l2, l3])?;
    let m12 = omega(&l1.basis, &l2.basis)?;
    let m23 = omega(&l2.basis, &l3.basis)?;
    let m31 = omega(&l3.basis, &l1.basis)?;
    let z = RatMatrix::zeros(n, n);
    let r1 = z.hcat(&m12)?.hcat(&m31.transpose())?;
    let r2 = m12.transpose().hcat(&z)?.hcat(&m23)?;
    let r3 = m31.hcat(&m23.transpose())?.hcat(&z)?;
    r1.vcat(&r2)?.vcat(&r3)
}

pub fn maslov_index(l1: &Lagrangian, l2: &Lagrangian, l3: &Lagrangian) -> Result<i64> {
    let (p, m, _) = signature(&kashiwara_gram(l1, l2, l3)?)?;
    Ok(p as i64 - m as i64)
}

pub fn transverse(a: &Lagrangian, b: &Lagrangian) -> bool {
    a.n() == b.n() && rank(&a.basis.hcat(&b.basis).unwrap()) == 2 * a.n()
}

/// Projections of each basis vector of L2 onto L1 along L3 and onto L3 along L1.
fn split_along(l1: &Lagrangian, l2: &Lagrangian, l3: &Lagrangian) -> Result<(RatMatrix, RatMatrix)> {
    let n = same_space(&[l1, l2, l3])?;
    if !transverse(l1, l3) {
        return Err(Error::Precondition("L1 and L3 intersect nontrivially".into()));
    }
    let coeffs = solve(&l1.basis.hcat(&l3.basis)?, &l2.basis)?
        .ok_or_else(|| Error::Precondition("L1 + L3 does not span".into()))?;
    let z = l1.basis.matmul(&coeffs.block_at(0, 0, n, n))?;
    let w = l3.basis.matmul(&coeffs.block_at(n, 0, n, n))?;
    Ok((z, w))
}

/// Gram matrix of S(x) = ω(p13 x, p31 x) on the basis of L2.
pub fn transverse_form(l1: &Lagrangian, l2: &Lagrangian, l3: &Lagrangian) -> Result<RatMatrix> {
    let (z, w) = split_along(l1, l2, l3)?;
    let s = omega(&z, &w)?;
    let half = Rational::new(1.into(), 2.into());
    Ok(s.add(&s.transpose())?.scale(&half))
}

pub fn maslov_transverse(l1: &Lagrangian, l2: &Lagrangian, l3: &Lagrangian) -> Result<i64> {
    let (p, m, _) = signature(&transverse_form(l1, l2, l3)?)?;
    Ok(p as i64 - m as i64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// Columns p_1..p_n, q_1..q_n.
    pub basis: RatMatrix,
    /// Number of +1 entries in ε; ε_i = +1 for i <= k.
    pub k: usize,
    pub eps: Vec<i64>,
    /// ω(p_i, q_i) = weights_i > 0; basisᵀ J basis = [[0, D], [-D, 0]].
    pub weights: Vec<Rational>,
}

impl NormalForm {
    /// Floating-point basis with ω(p_i, q_i) = 1, obtained by dividing p_i and q_i by sqrt(weight_i).
    pub fn unit_basis_f64(&self) -> nalgebra::DMatrix<f64> {
        use num_traits::ToPrimitive;
        let n = self.weights.len();
        let mut b = self.basis.to_f64();
        for (i, w) in self.weights.iter().enumerate() {
            let s = w.to_f64().unwrap().sqrt();
            for r in 0..2 * n {
                b[(r, i)] /= s;
                b[(r, n + i)] /= s;
            }
        }
        b
    }
}

pub fn normal_form(l1: &Lagrangian, l2: &Lagrangian, l3: &Lagrangian) -> Result<NormalForm> {
    let n = same_space(&[l1, l2, l3])?;
    if !transverse(l1, l2) || !transverse(l2, l3) || !transverse(l1, l3) {
        return Err(Error::Precondition("triple is not pairwise transverse".into()));
    }
    let s = transverse_form(l1, l2, l3)?;
    let (p, d) = diagonalize(&s)?;
    // negatives first so that ε is non-increasing
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| if d[i].is_negative() { 0 } else { 1 });
    let q_basis = l2.basis.matmul(&p)?;
    let (z, _) = split_along(l1, &Lagrangian { basis: q_basis.clone() }, l3)?;
    let mut basis = RatMatrix::zeros(2 * n, 2 * n);
    let mut eps = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (slot, &i) in order.iter().enumerate() {
        if d[i].is_zero() {
            return Err(Error::Precondition("transverse form is degenerate".into()));
        }
        let e: i64 = if d[i].is_negative() { 1 } else { -1 };
        let f = Rational::from_integer((-e).into());
        for r in 0..2 * n {
            basis[(r, slot)] = &z[(r, i)] * &f;
            basis[(r, n + slot)] = q_basis[(r, i)].clone();
        }
        eps.push(e);
        weights.push(d[i].abs());
    }
    let k = eps.iter().filter(|&&e| e == 1).count();
    Ok(NormalForm { basis, k, eps, weights })
}

/// τ(1,2,3) − [τ(1,2,4) + τ(2,3,4) + τ(3,1,4)].
pub fn chain_rule_defect(l1: &Lagrangian, l2: &Lagrangian, l3: &Lagrangian, l4: &Lagrangian) -> Result<i64> {
    Ok(maslov_index(l1, l2, l3)?
        - maslov_index(l1, l2, l4)?
        - maslov_index(l2, l3, l4)?
        - maslov_index(l3, l1, l4)?)
}

/// (I N; 0 I).
pub fn upper_unipotent(s: &RatMatrix) -> RatMatrix {
    let n = s.rows();
    RatMatrix::blocks(&RatMatrix::identity(n), s, &RatMatrix::zeros(n, n), &RatMatrix::identity(n)).unwrap()
}

/// (I 0; M I).
pub fn lower_unipotent(s: &RatMatrix) -> RatMatrix {
    upper_unipotent(s).transpose()
}

/// (A 0; 0 A^{-T}).
pub fn levi(a: &RatMatrix) -> Result<RatMatrix> {
    let n = a.rows();
    let ait = crate::exactmat::inverse(a)?.transpose();
    RatMatrix::blocks(a, &RatMatrix::zeros(n, n), &RatMatrix::zeros(n, n), &ait)
}

pub fn is_symplectic_exact(g: &RatMatrix) -> bool {
    if !g.is_square() || !g.rows().is_multiple_of(2) {
        return false;
    }
    let j = j_matrix(g.rows() / 2);
    g.transpose().matmul(&j).and_then(|x| x.matmul(g)).map(|x| x == j).unwrap_or(false)
}
