//! Complete flags in Q^n stored as basis matrices, with transversality,
//! genericity, triple ratios and the two positivity tests for triples.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmat::{det, rank, RatMatrix, Rational};
use crate::totpos::{is_u_positive, is_unitriangular_upper};

/// F_i is the span of the first i columns of `basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    basis: RatMatrix,
}

impl Flag {
    pub fn new(basis: RatMatrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::Shape("flag basis must be square".into()));
        }
        if rank(&basis) != basis.rows() {
            return Err(Error::Domain("flag basis is not invertible".into()));
        }
        Ok(Flag { basis })
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.rows()
    }

    /// First i basis columns.
    pub fn head(&self, i: usize) -> RatMatrix {
        let cols: Vec<usize> = (0..i).collect();
        self.basis.select_cols(&cols)
    }

    /// Same flag as subspaces.
    pub fn same_as(&self, other: &Flag) -> bool {
        self.n() == other.n()
            && (1..self.n()).all(|i| {
                let a = self.head(i);
                rank(&a.hcat(&other.head(i)).unwrap()) == i
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagTriple {
    pub first: Flag,
    pub second: Flag,
    pub third: Flag,
}

impl FlagTriple {
    pub fn new(first: Flag, second: Flag, third: Flag) -> Result<Self> {
        if first.n() != second.n() || first.n() != third.n() {
            return Err(Error::Shape("flags in a triple must share the ambient dimension".into()));
        }
        Ok(FlagTriple { first, second, third })
    }
}

pub fn standard_ascending(n: usize) -> Flag {
    Flag { basis: RatMatrix::identity(n) }
}

pub fn standard_descending(n: usize) -> Flag {
    let mut b = RatMatrix::zeros(n, n);
    for j in 0..n {
        b[(n - 1 - j, j)] = Rational::one();
    }
    Flag { basis: b }
}

fn same_n(a: &Flag, b: &Flag) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::Shape(format!("flags live in dimensions {} and {}", a.n(), b.n())));
    }
    Ok(())
}

fn spans_everything(parts: &[RatMatrix], n: usize) -> bool {
    let mut m = RatMatrix::zeros(n, 0);
    for p in parts {
        m = m.hcat(p).unwrap();
    }
    rank(&m) == n
}

pub fn is_transverse(f1: &Flag, f2: &Flag) -> Result<bool> {
    same_n(f1, f2)?;
    let n = f1.n();
    Ok((1..n).all(|i| spans_everything(&[f1.head(i), f2.head(n - i)], n)))
}

pub fn is_generic(t: &FlagTriple) -> bool {
    let n = t.first.n();
    for a in 0..=n {
        for b in 0..=n - a {
            let c = n - a - b;
            if !spans_everything(&[t.first.head(a), t.second.head(b), t.third.head(c)], n) {
                return false;
            }
        }
    }
    true
}

pub fn act(g: &RatMatrix, f: &Flag) -> Result<Flag> {
    if g.rows() != f.n() || !g.is_square() {
        return Err(Error::Shape("group element does not match the flag dimension".into()));
    }
    Flag::new(g.matmul(&f.basis)?)
}

/// The unit upper-triangular u with u·E = T, E the descending standard flag.
///
/// Column n−j+1 of u spans T_j modulo T_{j−1}: it has a 1 in row n−j+1,
/// zeros below, and is found by solving inside T_j.
pub fn u_from_flag(t: &Flag) -> Result<RatMatrix> {
    let n = t.n();
    if !is_transverse(&standard_ascending(n), t)? {
        return Err(Error::Domain("flag is not transverse to the ascending standard flag".into()));
    }
    let mut u = RatMatrix::zeros(n, n);
    for j in 1..=n {
        // coefficients c on the first j basis vectors of T with
        // (sum c_k t_k) having zeros in rows n-j+2..n and 1 in row n-j+1
        let tj = t.head(j);
        let rows: Vec<usize> = (n - j..n).collect();
        let sys = tj.submatrix(&rows, &(0..j).collect::<Vec<_>>());
        let mut rhs = RatMatrix::zeros(j, 1);
        rhs[(0, 0)] = Rational::one();
        let c = crate::exactmat::solve(&sys, &rhs)?
            .ok_or_else(|| Error::Domain("flag is not transverse to the ascending standard flag".into()))?;
        let col = tj.matmul(&c)?;
        for i in 0..n {
            u[(i, n - j)] = col[(i, 0)].clone();
        }
    }
    debug_assert!(is_unitriangular_upper(&u));
    Ok(u)
}

/// The c×c block in rows a+1..a+c and the last c columns.
pub fn block(u: &RatMatrix, a: usize, b: usize, c: usize) -> Result<RatMatrix> {
    let n = u.rows();
    if a + b + c != n || !u.is_square() {
        return Err(Error::Shape(format!("block needs a+b+c = {n}")));
    }
    Ok(u.block_at(a, n - c, c, c))
}

/// det[first a cols of x | first b cols of y | first c cols of z].
fn wedge(x: &Flag, a: usize, y: &Flag, b: usize, z: &Flag, c: usize) -> Rational {
    let m = x.head(a).hcat(&y.head(b)).unwrap().hcat(&z.head(c)).unwrap();
    det(&m).unwrap()
}

pub fn triple_ratio(e: &Flag, f: &Flag, t: &Flag, a: usize, b: usize, c: usize) -> Result<Rational> {
    same_n(e, f)?;
    same_n(e, t)?;
    let n = e.n();
    if a == 0 || b == 0 || c == 0 || a + b + c != n {
        return Err(Error::Domain(format!("triple ratio needs a,b,c >= 1 with a+b+c = {n}")));
    }
    let num = [
        wedge(e, a + 1, f, b, t, c - 1),
        wedge(e, a, f, b - 1, t, c + 1),
        wedge(e, a - 1, f, b + 1, t, c),
    ];
    let den = [
        wedge(e, a - 1, f, b, t, c + 1),
        wedge(e, a, f, b + 1, t, c - 1),
        wedge(e, a + 1, f, b - 1, t, c),
    ];
    if den.iter().chain(num.iter()).any(|d| d.is_zero()) {
        return Err(Error::Domain("triple is not generic: a wedge vanishes".into()));
    }
    let mut r = Rational::one();
    for (x, y) in num.iter().zip(&den) {
        r = r * x / y;
    }
    Ok(r)
}

/// All (a,b,c) with a,b,c >= 1 and a+b+c = n.
pub fn ratio_indices(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 1..n {
        for b in 1..n - a {
            out.push((a, b, n - a - b));
        }
    }
    out
}

pub fn is_bd_positive(t: &FlagTriple) -> bool {
    if !is_generic(t) {
        return false;
    }
    let n = t.first.n();
    ratio_indices(n).into_iter().all(|(a, b, c)| {
        triple_ratio(&t.first, &t.second, &t.third, a, b, c).map(|r| r.is_positive()).unwrap_or(false)
    })
}

/// Some g with g·first = E (descending) and g·third = F (ascending).
///
/// Columns of g⁻¹ are chosen as x_k ∈ first_{n−k+1} ∩ third_k, which is a
/// line when the two flags are transverse.
fn normalizing_element(first: &Flag, third: &Flag) -> Result<RatMatrix> {
    let n = first.n();
    let mut h = RatMatrix::zeros(n, n);
    for k in 1..=n {
        // intersect span(first_{n-k+1}) with span(third_k)
        let a = first.head(n - k + 1);
        let b = third.head(k);
        let sys = a.hcat(&b.neg())?;
        let ker = crate::exactmat::kernel(&sys);
        if ker.len() != 1 {
            return Err(Error::Domain("flags are not transverse".into()));
        }
        let coeffs = &ker[0];
        let x = b.matmul(&coeffs.block_at(n - k + 1, 0, k, 1))?;
        for i in 0..n {
            h[(i, k - 1)] = x[(i, 0)].clone();
        }
    }
    crate::exactmat::inverse(&h)
}

/// Sign patterns d with d_1 = +1, as diagonal entries.
fn sign_patterns(n: usize) -> impl Iterator<Item = Vec<Rational>> {
    (0u64..(1u64 << (n.saturating_sub(1)))).map(move |mask| {
        (0..n)
            .map(|i| {
                if i > 0 && mask & (1 << (i - 1)) != 0 {
                    -Rational::one()
                } else {
                    Rational::one()
                }
            })
            .collect()
    })
}

/// A sign pattern d with d·u·d⁻¹ in U^{>0}, when one exists.
pub fn positive_sign_pattern(u: &RatMatrix) -> Result<Option<Vec<Rational>>> {
    if !is_unitriangular_upper(u) {
        return Err(Error::Domain("expected an upper unitriangular matrix".into()));
    }
    for d in sign_patterns(u.rows()) {
        let mut c = u.clone();
        for i in 0..u.rows() {
            for j in 0..u.cols() {
                c[(i, j)] = &c[(i, j)] * &d[i] * &d[j];
            }
        }
        if is_u_positive(&c)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

pub fn is_gw_positive(t: &FlagTriple) -> bool {
    if !is_transverse(&t.first, &t.third).unwrap_or(false) {
        return false;
    }
    let Ok(g) = normalizing_element(&t.first, &t.third) else {
        return false;
    };
    let Ok(s) = act(&g, &t.second) else {
        return false;
    };
    let Ok(u) = u_from_flag(&s) else {
        return false;
    };
    matches!(positive_sign_pattern(&u), Ok(Some(_)))
}

/// det(e_1..e_a | e_n..e_{n−b+1} | u_n..u_{n−c+1}) against the signed block determinant.
pub fn sign_lemma_sides(u: &RatMatrix, a: usize, b: usize, c: usize) -> Result<(Rational, Rational)> {
    let n = u.rows();
    if a + b + c != n {
        return Err(Error::Shape(format!("sign lemma needs a+b+c = {n}")));
    }
    let mut m = RatMatrix::zeros(n, n);
    for k in 0..a {
        m[(k, k)] = Rational::one();
    }
    for k in 0..b {
        m[(n - 1 - k, a + k)] = Rational::one();
    }
    for k in 0..c {
        for i in 0..n {
            m[(i, a + b + k)] = u[(i, n - 1 - k)].clone();
        }
    }
    let lhs = det(&m)?;
    let exp = b / 2 + c / 2 + b * c;
    let d = det(&block(u, a, b, c)?)?;
    let rhs = if exp.is_multiple_of(2) { d } else { -d };
    Ok((lhs, rhs))
}

pub fn sign_lemma_check(u: &RatMatrix, a: usize, b: usize, c: usize) -> Result<bool> {
    let (l, r) = sign_lemma_sides(u, a, b, c)?;
    Ok(l == r)
}
