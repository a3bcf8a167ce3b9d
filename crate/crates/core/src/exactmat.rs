//! Exact rational scalars and dense matrices.
//!
//! Determinant and rank go through fraction-free (Bareiss) elimination on a
//! common-denominator integer copy of the matrix.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let r: Rational = t
        .parse()
        .map_err(|_| Error::Parse(format!("not a rational: {t:?}")))?;
    Ok(r)
}

/// Canonical string form: "p/q", or "p" when q = 1.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// A strictly increasing set of 1-based indices inside 1..=ambient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    indices: Vec<usize>,
    ambient: usize,
}

impl IndexSet {
    pub fn new(indices: Vec<usize>, ambient: usize) -> Result<Self> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Domain(format!("index set not increasing: {indices:?}")));
            }
        }
        if indices.iter().any(|&i| i == 0 || i > ambient) {
            return Err(Error::Shape(format!("index out of range 1..={ambient}: {indices:?}")));
        }
        Ok(IndexSet { indices, ambient })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// All k-subsets of 1..=n, lexicographic.
    pub fn all(n: usize, k: usize) -> Vec<IndexSet> {
        combinations(n, k)
            .into_iter()
            .map(|indices| IndexSet { indices, ambient: n })
            .collect()
    }
}

/// k-subsets of 1..=n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        // find rightmost position that can still move
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (k - 1 - i) {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience for tests and literals.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn diag(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Column vector.
    pub fn column(entries: Vec<Rational>) -> Self {
        let n = entries.len();
        RatMatrix { rows: n, cols: 1, data: entries }
    }

    /// n×n matrix with a single 1 at (i, j), 0-based.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = Rational::one();
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn matmul(&self, other: &RatMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RatMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &RatMatrix, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(RatMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn neg(&self) -> Self {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Commutator XY − YX.
    pub fn bracket(&self, other: &RatMatrix) -> Result<Self> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Columns with 0-based indices `cols`.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, cols)
    }

    pub fn hcat(&self, other: &RatMatrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Shape("hcat row mismatch".into()));
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Ok(m)
    }

    pub fn vcat(&self, other: &RatMatrix) -> Result<Self> {
        Ok(self.transpose().hcat(&other.transpose())?.transpose())
    }

    /// Block matrix [[a, b], [c, d]].
    pub fn blocks(a: &RatMatrix, b: &RatMatrix, c: &RatMatrix, d: &RatMatrix) -> Result<Self> {
        a.hcat(b)?.vcat(&c.hcat(d)?)
    }

    /// Sub-block starting at (r0, c0) of size h×w.
    pub fn block_at(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        let rows: Vec<usize> = (r0..r0 + h).collect();
        let cols: Vec<usize> = (c0..c0 + w).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        use num_traits::ToPrimitive;
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].to_f64().unwrap_or(f64::NAN)
        })
    }

    pub fn flatten(&self) -> Vec<Rational> {
        self.data.clone()
    }
}

fn require_square(m: &RatMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Shape(format!("expected square matrix, got {}x{}", m.rows, m.cols)));
    }
    Ok(())
}

/// Integer copy of `m` with every row scaled by the lcm of its denominators.
/// Returns the scale factors so callers can undo them.
fn integer_rows(m: &RatMatrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(m.rows);
    let mut scales = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let l = (0..m.cols).fold(BigInt::one(), |acc, j| acc.lcm(m[(i, j)].denom()));
        rows.push(
            (0..m.cols)
                .map(|j| {
                    let x = &m[(i, j)];
                    x.numer() * (&l / x.denom())
                })
                .collect(),
        );
        scales.push(l);
    }
    (rows, scales)
}

/// Bareiss elimination in place; returns (rank, sign of row swaps, last pivot).
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, i32, BigInt) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut sign = 1;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    (r, sign, prev)
}

pub fn det(m: &RatMatrix) -> Result<Rational> {
    require_square(m)?;
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    let (mut a, scales) = integer_rows(m);
    let (rank, sign, last) = bareiss(&mut a, n);
    if rank < n {
        return Ok(Rational::zero());
    }
    let denom = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    Ok(Rational::new(last * sign, denom))
}

pub fn rank(m: &RatMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let (mut a, _) = integer_rows(m);
    bareiss(&mut a, m.cols).0
}

pub fn minor(m: &RatMatrix, rows: &IndexSet, cols: &IndexSet) -> Result<Rational> {
    if rows.len() != cols.len() {
        return Err(Error::Shape(format!(
            "minor needs |I| = |J|, got {} and {}",
            rows.len(),
            cols.len()
        )));
    }
    if rows.ambient() > m.rows || cols.ambient() > m.cols {
        return Err(Error::Shape("index set ambient exceeds matrix size".into()));
    }
    let r: Vec<usize> = rows.indices().iter().map(|i| i - 1).collect();
    let c: Vec<usize> = cols.indices().iter().map(|j| j - 1).collect();
    det(&m.submatrix(&r, &c))
}

/// k-th compound matrix: rows/cols indexed by lexicographic k-subsets.
pub fn compound(m: &RatMatrix, k: usize) -> Result<RatMatrix> {
    require_square(m)?;
    let n = m.rows;
    if k == 0 || k > n {
        return Err(Error::Domain(format!("compound order {k} outside 1..={n}")));
    }
    let sets = combinations(n, k);
    let mut out = RatMatrix::zeros(sets.len(), sets.len());
    for (a, i) in sets.iter().enumerate() {
        let r: Vec<usize> = i.iter().map(|x| x - 1).collect();
        for (b, j) in sets.iter().enumerate() {
            let c: Vec<usize> = j.iter().map(|x| x - 1).collect();
            out[(a, b)] = det(&m.submatrix(&r, &c))?;
        }
    }
    Ok(out)
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..a.cols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..a.rows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in c..a.cols {
                    let v = &a[(r, j)] * &f;
                    a[(i, j)] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of the right null space, one column vector per free variable.
pub fn kernel(m: &RatMatrix) -> Vec<RatMatrix> {
    let (r, pivots) = rref(m);
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r[(row, free)].clone();
        }
        out.push(RatMatrix::column(v));
    }
    out
}

/// Some solution x of A x = b, or None when inconsistent. `b` may have several columns.
pub fn solve(a: &RatMatrix, b: &RatMatrix) -> Result<Option<RatMatrix>> {
    if a.rows != b.rows {
        return Err(Error::Shape(format!("solve: A has {} rows, b has {}", a.rows, b.rows)));
    }
    let aug = a.hcat(b)?;
    let (r, pivots) = rref(&aug);
    if pivots.iter().any(|&p| p >= a.cols) {
        return Ok(None);
    }
    let mut x = RatMatrix::zeros(a.cols, b.cols);
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x[(p, j)] = r[(row, a.cols + j)].clone();
        }
    }
    Ok(Some(x))
}

pub fn inverse(m: &RatMatrix) -> Result<RatMatrix> {
    require_square(m)?;
    match solve(m, &RatMatrix::identity(m.rows))? {
        Some(x) if rank(m) == m.rows => Ok(x),
        _ => Err(Error::Singular),
    }
}

/// Basis (as columns) of the span of the given columns.
pub fn column_space(m: &RatMatrix) -> RatMatrix {
    let (_, pivots) = rref(m);
    m.select_cols(&pivots)
}

/// Exact positive definiteness via leading principal minors.
pub fn is_positive_definite(m: &RatMatrix) -> bool {
    if !m.is_symmetric() {
        return false;
    }
    (1..=m.rows).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        det(&m.submatrix(&idx, &idx)).map(|d| d.is_positive()).unwrap_or(false)
    })
}

/// Exact positive semidefiniteness via all principal minors.
pub fn is_positive_semidefinite(m: &RatMatrix) -> bool {
    if !m.is_symmetric() {
        return false;
    }
    (1..=m.rows).all(|k| {
        combinations(m.rows, k).into_iter().all(|s| {
            let idx: Vec<usize> = s.iter().map(|x| x - 1).collect();
            !det(&m.submatrix(&idx, &idx)).map(|d| d.is_negative()).unwrap_or(true)
        })
    })
}

pub fn matrix_to_json(m: &RatMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.rows)
            .map(|i| {
                serde_json::Value::Array(
                    (0..m.cols).map(|j| serde_json::Value::String(fmt_rational(&m[(i, j)]))).collect(),
                )
            })
            .collect(),
    )
}

pub fn rational_from_json(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) if n.is_i64() => Ok(q(n.as_i64().unwrap())),
        other => Err(Error::Parse(format!("expected rational string, got {other}"))),
    }
}

pub fn matrix_from_json(v: &serde_json::Value) -> Result<RatMatrix> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    let parsed = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                .iter()
                .map(rational_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RatMatrix::from_rows(parsed)
}
