//! Classical real Lie algebras sl(n), sp(2n), so(Q_{p,q}) as matrix
//! families, with Killing forms and restricted-root decompositions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmat::{inverse, kernel, q, rank, rref, RatMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// sl(n)
    Sl { n: usize },
    /// sp(2n)
    Sp { n: usize },
    /// so(Q_{p,q}), p <= q
    So { p: usize, q: usize },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Sl { n } => write!(f, "sl({n})"),
            Family::Sp { n } => write!(f, "sp({})", 2 * n),
            Family::So { p, q } => write!(f, "so({p},{q})"),
        }
    }
}

/// A classical Lie algebra with its fixed basis and coordinate solver.
#[derive(Clone, Debug)]
pub struct LieAlgebraSpec {
    pub family: Family,
    basis: Vec<RatMatrix>,
    // rows of the flattened basis that determine coordinates, and the inverse of that square block
    coord_rows: Vec<usize>,
    coord_inv: RatMatrix,
}

/// Antidiagonal W_p with W[i][p+1-i] = (-1)^(p-i), 1-based.
pub fn w_matrix(p: usize) -> RatMatrix {
    let mut w = RatMatrix::zeros(p, p);
    for i in 1..=p {
        w[(i - 1, p - i)] = if (p - i).is_multiple_of(2) { q(1) } else { q(-1) };
    }
    w
}

/// Q_{p,q} = [[0, 0, W_p], [0, -I_{q-p}, 0], [W_pᵀ, 0, 0]].
pub fn q_form(p: usize, qq: usize) -> RatMatrix {
    let n = p + qq;
    let w = w_matrix(p);
    let mut m = RatMatrix::zeros(n, n);
    for i in 0..p {
        for j in 0..p {
            m[(i, n - p + j)] = w[(i, j)].clone();
            m[(n - p + j, i)] = w[(i, j)].clone();
        }
    }
    for k in p..qq {
        m[(k, k)] = q(-1);
    }
    m
}

impl LieAlgebraSpec {
    pub fn sl(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain("sl(n) needs n >= 2".into()));
        }
        Ok(Self::build(Family::Sl { n }))
    }

    /// sp(2n).
    pub fn sp(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("sp(2n) needs n >= 1".into()));
        }
        Ok(Self::build(Family::Sp { n }))
    }

    pub fn so(p: usize, qq: usize) -> Result<Self> {
        if p > qq || p + qq < 3 || p == 0 {
            return Err(Error::Domain(format!("so(p,q) needs 1 <= p <= q and p+q >= 3, got ({p},{qq})")));
        }
        Ok(Self::build(Family::So { p, q: qq }))
    }

    fn build(family: Family) -> Self {
        let basis = family_basis(family);
        let size = basis[0].rows();
        let d = basis.len();
        let mut flat = RatMatrix::zeros(size * size, d);
        for (j, b) in basis.iter().enumerate() {
            for (i, x) in b.entries().iter().enumerate() {
                flat[(i, j)] = x.clone();
            }
        }
        let (_, rows) = rref(&flat.transpose());
        let all: Vec<usize> = (0..d).collect();
        let coord_inv = inverse(&flat.submatrix(&rows, &all)).expect("basis is independent");
        LieAlgebraSpec { family, basis, coord_rows: rows, coord_inv }
    }

    /// Matrix size of the defining representation.
    pub fn size(&self) -> usize {
        match self.family {
            Family::Sl { n } => n,
            Family::Sp { n } => 2 * n,
            Family::So { p, q } => p + q,
        }
    }

    pub fn basis(&self) -> &[RatMatrix] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The form preserved by the algebra (J for sp, Q_{p,q} for so).
    pub fn form(&self) -> Option<RatMatrix> {
        match self.family {
            Family::Sl { .. } => None,
            Family::Sp { n } => Some(crate::symplectic::j_matrix(n)),
            Family::So { p, q } => Some(q_form(p, q)),
        }
    }

    pub fn membership(&self, x: &RatMatrix) -> bool {
        if x.rows() != self.size() || !x.is_square() {
            return false;
        }
        match self.form() {
            None => x.trace().is_zero(),
            Some(f) => {
                let lhs = x.transpose().matmul(&f).unwrap();
                let rhs = f.matmul(x).unwrap();
                lhs.add(&rhs).unwrap().is_zero()
            }
        }
    }

    /// Coordinates of x in the fixed basis.
    pub fn coords(&self, x: &RatMatrix) -> Result<Vec<Rational>> {
        if !self.membership(x) {
            return Err(Error::Domain(format!("matrix is not in {}", self.family)));
        }
        let v = RatMatrix::column(self.coord_rows.iter().map(|&r| x.entries()[r].clone()).collect());
        Ok(self.coord_inv.matmul(&v)?.col(0))
    }

    pub fn combine(&self, coeffs: &[Rational]) -> RatMatrix {
        let s = self.size();
        self.basis.iter().zip(coeffs).fold(RatMatrix::zeros(s, s), |acc, (b, c)| acc.add(&b.scale(c)).unwrap())
    }

    /// ad(x) in the fixed basis; column j holds the coordinates of [x, b_j].
    pub fn ad(&self, x: &RatMatrix) -> Result<RatMatrix> {
        let d = self.dim();
        let mut m = RatMatrix::zeros(d, d);
        for (j, b) in self.basis.iter().enumerate() {
            let c = self.coords(&x.bracket(b)?)?;
            for (i, v) in c.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn killing_constant(&self) -> Rational {
        match self.family {
            Family::Sl { n } => q(2 * n as i64),
            Family::Sp { n } => q(2 * n as i64 + 2),
            Family::So { p, q: qq } => q(p as i64 + qq as i64 - 2),
        }
    }

    pub fn killing(&self, x: &RatMatrix, y: &RatMatrix) -> Result<Rational> {
        if !self.membership(x) || !self.membership(y) {
            return Err(Error::Domain(format!("arguments must lie in {}", self.family)));
        }
        Ok(self.killing_constant() * x.matmul(y)?.trace())
    }

    pub fn killing_via_ad(&self, x: &RatMatrix, y: &RatMatrix) -> Result<Rational> {
        Ok(self.ad(x)?.matmul(&self.ad(y)?)?.trace())
    }

    pub fn gram(&self, elems: &[RatMatrix]) -> Result<RatMatrix> {
        let k = elems.len();
        let mut g = RatMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = self.killing(&elems[i], &elems[j])?;
            }
        }
        Ok(g)
    }

    /// Basis of the maximal abelian subspace of symmetric elements.
    pub fn maximal_abelian(&self) -> Vec<RatMatrix> {
        let s = self.size();
        match self.family {
            Family::Sl { n } => (0..n - 1)
                .map(|k| RatMatrix::unit(s, k, k).sub(&RatMatrix::unit(s, k + 1, k + 1)).unwrap())
                .collect(),
            Family::Sp { n } => (0..n)
                .map(|k| RatMatrix::unit(s, k, k).sub(&RatMatrix::unit(s, n + k, n + k)).unwrap())
                .collect(),
            Family::So { p, .. } => (0..p)
                .map(|k| RatMatrix::unit(s, k, k).sub(&RatMatrix::unit(s, s - 1 - k, s - 1 - k)).unwrap())
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.maximal_abelian().len()
    }

    /// Length of the ε-coordinate vectors.
    pub fn eps_len(&self) -> usize {
        match self.family {
            Family::Sl { n } => n,
            _ => self.rank(),
        }
    }

    /// ε-coordinates of a functional given by its values on the 𝔞 basis.
    fn eps_coords(&self, values: &[Rational]) -> Vec<i64> {
        let c: Vec<Rational> = match self.family {
            Family::Sl { n } => {
                // c_k - c_{k+1} = t_k, sum c = 0
                let mut c = vec![Rational::zero(); n];
                for k in 1..n {
                    c[k] = &c[k - 1] - &values[k - 1];
                }
                let mean = c.iter().fold(Rational::zero(), |a, x| a + x) / q(n as i64);
                c.into_iter().map(|x| x - &mean).collect()
            }
            _ => values.to_vec(),
        };
        c.iter()
            .map(|x| {
                assert!(x.is_integer(), "root coordinate {x} is not integral");
                x.to_integer().to_i64().expect("small root coordinate")
            })
            .collect()
    }

    pub fn restricted_roots(&self) -> RootDecomposition {
        let a = self.maximal_abelian();
        let d = self.dim();
        let ads: Vec<RatMatrix> = a.iter().map(|h| self.ad(h).unwrap()).collect();
        // eigenvalues of ad(h) for diagonal h are differences of diagonal entries
        let cands: Vec<Vec<Rational>> = a
            .iter()
            .map(|h| {
                let diag: Vec<Rational> = (0..h.rows()).map(|i| h[(i, i)].clone()).collect();
                let mut v: Vec<Rational> =
                    diag.iter().flat_map(|x| diag.iter().map(move |y| x - y)).collect();
                v.sort();
                v.dedup();
                v
            })
            .collect();

        let mut spaces: Vec<(Vec<Rational>, RatMatrix)> = vec![(Vec::new(), RatMatrix::identity(d))];
        for (ad, cs) in ads.iter().zip(&cands) {
            let mut next = Vec::new();
            for (tuple, v) in &spaces {
                for lam in cs {
                    let shifted = ad.sub(&RatMatrix::identity(d).scale(lam)).unwrap();
                    let ker = kernel(&shifted.matmul(v).unwrap());
                    if ker.is_empty() {
                        continue;
                    }
                    let mut c = RatMatrix::zeros(v.cols(), 0);
                    for k in &ker {
                        c = c.hcat(k).unwrap();
                    }
                    let mut t = tuple.clone();
                    t.push(lam.clone());
                    next.push((t, v.matmul(&c).unwrap()));
                }
            }
            spaces = next;
        }

        let to_mats = |v: &RatMatrix| -> Vec<RatMatrix> { (0..v.cols()).map(|j| self.combine(&v.col(j))).collect() };
        let mut zero_space = Vec::new();
        let mut roots = Vec::new();
        for (values, v) in &spaces {
            if values.iter().all(|x| x.is_zero()) {
                zero_space = to_mats(v);
                continue;
            }
            let coeffs = self.eps_coords(values);
            let space_basis = to_mats(v);
            roots.push(RestrictedRoot { coeffs, values: values.clone(), multiplicity: space_basis.len(), space_basis });
        }
        roots.sort_by(|x, y| root_order(&x.coeffs, &y.coeffs));

        // Z_k(a): antisymmetric elements of g_0
        let centralizer = antisymmetric_part_basis(&zero_space);
        let positive: Vec<&RestrictedRoot> = roots.iter().filter(|r| r.is_positive()).collect();
        let mut simple: Vec<RestrictedRoot> = positive
            .iter()
            .filter(|r| {
                !positive.iter().any(|x| {
                    positive.iter().any(|y| {
                        x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a + b).eq(r.coeffs.iter().copied())
                    })
                })
            })
            .map(|r| (*r).clone())
            .collect();
        simple.sort_by(|x, y| simple_order(&x.coeffs, &y.coeffs));

        let a_gram = self.gram(&a).unwrap();
        let a_gram_inv = inverse(&a_gram).expect("Killing form is nondegenerate on a");
        let mut dec = RootDecomposition {
            family: self.family,
            a_basis: a,
            zero_space_basis: centralizer,
            g0_basis: zero_space,
            roots,
            simple,
            dynkin: String::new(),
            a_gram_inv,
        };
        dec.dynkin = dec.compute_dynkin();
        dec
    }

    pub fn is_split(&self) -> bool {
        self.restricted_roots().zero_space_basis.is_empty()
    }

    /// so(2,3) basis e1..e4, f1..f4, h1, h2.
    pub fn so23_named() -> So23Basis {
        let e = |entries: &[(usize, usize, i64)]| {
            let mut m = RatMatrix::zeros(5, 5);
            for &(i, j, v) in entries {
                m[(i - 1, j - 1)] = q(v);
            }
            m
        };
        let es = [
            e(&[(1, 2, 1), (4, 5, 1)]),
            e(&[(2, 3, 1), (3, 4, 1)]),
            e(&[(1, 3, 1), (3, 5, -1)]),
            e(&[(1, 4, 1), (2, 5, 1)]),
        ];
        let fs = [es[0].transpose(), es[1].transpose(), es[2].transpose(), es[3].transpose()];
        let h = [e(&[(1, 1, 1), (5, 5, -1)]), e(&[(2, 2, 1), (4, 4, -1)])];
        So23Basis { e: es, f: fs, h }
    }
}

#[derive(Clone, Debug)]
pub struct So23Basis {
    pub e: [RatMatrix; 4],
    pub f: [RatMatrix; 4],
    pub h: [RatMatrix; 2],
}

fn family_basis(family: Family) -> Vec<RatMatrix> {
    let u = RatMatrix::unit;
    match family {
        Family::Sl { n } => {
            let mut b = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        b.push(u(n, i, j));
                    }
                }
            }
            for k in 0..n - 1 {
                b.push(u(n, k, k).sub(&u(n, k + 1, k + 1)).unwrap());
            }
            b
        }
        Family::Sp { n } => {
            let s = 2 * n;
            let mut b = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    b.push(u(s, i, j).sub(&u(s, n + j, n + i)).unwrap());
                }
            }
            for i in 0..n {
                for j in i..n {
                    let x = if i == j { u(s, i, n + i) } else { u(s, i, n + j).add(&u(s, j, n + i)).unwrap() };
                    b.push(x);
                }
            }
            for i in 0..n {
                for j in i..n {
                    let x = if i == j { u(s, n + i, i) } else { u(s, n + i, j).add(&u(s, n + j, i)).unwrap() };
                    b.push(x);
                }
            }
            b
        }
        Family::So { p, q: qq } => {
            let s = p + qq;
            let qm = q_form(p, qq);
            let mut b = Vec::new();
            for i in 0..s {
                for j in i + 1..s {
                    b.push(qm.matmul(&u(s, i, j).sub(&u(s, j, i)).unwrap()).unwrap());
                }
            }
            b
        }
    }
}

/// Basis of {x in span(elems) : x antisymmetric}.
fn antisymmetric_part_basis(elems: &[RatMatrix]) -> Vec<RatMatrix> {
    if elems.is_empty() {
        return Vec::new();
    }
    let s = elems[0].rows();
    // columns: flattened (x + xᵀ) for each element
    let mut m = RatMatrix::zeros(s * s, elems.len());
    for (j, x) in elems.iter().enumerate() {
        let sym = x.add(&x.transpose()).unwrap();
        for (i, v) in sym.entries().iter().enumerate() {
            m[(i, j)] = v.clone();
        }
    }
    kernel(&m)
        .into_iter()
        .map(|c| {
            elems.iter().zip(c.col(0)).fold(RatMatrix::zeros(s, s), |acc, (x, k)| acc.add(&x.scale(&k)).unwrap())
        })
        .collect()
}

fn first_nonzero(c: &[i64]) -> Option<usize> {
    c.iter().position(|&x| x != 0)
}

/// Positive roots first (decreasing), then negatives.
fn root_order(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    b.cmp(a)
}

fn simple_order(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    first_nonzero(a).cmp(&first_nonzero(b)).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedRoot {
    /// Integer coordinates in the ε-basis.
    pub coeffs: Vec<i64>,
    /// Values on the 𝔞 basis.
    pub values: Vec<Rational>,
    pub multiplicity: usize,
    pub space_basis: Vec<RatMatrix>,
}

impl RestrictedRoot {
    pub fn is_positive(&self) -> bool {
        first_nonzero(&self.coeffs).map(|i| self.coeffs[i] > 0).unwrap_or(false)
    }

    pub fn label(&self) -> String {
        eps_label(&self.coeffs)
    }
}

/// Human-readable form like "e1-e2" or "2e2".
pub fn eps_label(c: &[i64]) -> String {
    let mut s = String::new();
    for (i, &x) in c.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if x < 0 {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if x.abs() != 1 {
            s.push_str(&x.abs().to_string());
        }
        s.push_str(&format!("e{}", i + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[derive(Clone, Debug)]
pub struct RootDecomposition {
    pub family: Family,
    pub a_basis: Vec<RatMatrix>,
    /// Z_𝔨(𝔞), the part of 𝔤_0 beyond 𝔞.
    pub zero_space_basis: Vec<RatMatrix>,
    /// All of 𝔤_0.
    pub g0_basis: Vec<RatMatrix>,
    pub roots: Vec<RestrictedRoot>,
    pub simple: Vec<RestrictedRoot>,
    pub dynkin: String,
    a_gram_inv: RatMatrix,
}

impl RootDecomposition {
    pub fn positive_roots(&self) -> Vec<&RestrictedRoot> {
        self.roots.iter().filter(|r| r.is_positive()).collect()
    }

    pub fn find(&self, coeffs: &[i64]) -> Option<&RestrictedRoot> {
        self.roots.iter().find(|r| r.coeffs == coeffs)
    }

    /// Killing-induced pairing on 𝔞*, from values on the 𝔞 basis.
    pub fn inner(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let va = RatMatrix::column(a.to_vec());
        let vb = RatMatrix::column(b.to_vec());
        va.transpose().matmul(&self.a_gram_inv).unwrap().matmul(&vb).unwrap()[(0, 0)].clone()
    }

    /// 2(β, α)/(α, α).
    pub fn cartan_integer(&self, alpha: &RestrictedRoot, beta: &RestrictedRoot) -> Result<i64> {
        let aa = self.inner(&alpha.values, &alpha.values);
        if aa.is_zero() {
            return Err(Error::Domain("cartan integer needs a nonzero first argument".into()));
        }
        let v = q(2) * self.inner(&beta.values, &alpha.values) / aa;
        if !v.is_integer() {
            return Err(Error::Domain(format!("pairing {v} is not an integer")));
        }
        Ok(v.to_integer().to_i64().unwrap())
    }

    /// Expansion of a root in the simple roots (integer solve).
    pub fn simple_expansion(&self, r: &RestrictedRoot) -> Option<Vec<i64>> {
        let k = self.simple.len();
        let m = self.eps_len();
        let mut a = RatMatrix::zeros(m, k);
        for (j, s) in self.simple.iter().enumerate() {
            for i in 0..m {
                a[(i, j)] = q(s.coeffs[i]);
            }
        }
        let b = RatMatrix::column(r.coeffs.iter().map(|&x| q(x)).collect());
        let x = crate::exactmat::solve(&a, &b).ok()??;
        x.col(0)
            .iter()
            .map(|v| if v.is_integer() { v.to_integer().to_i64() } else { None })
            .collect()
    }

    fn eps_len(&self) -> usize {
        self.roots.first().map_or(0, |r| r.coeffs.len())
    }

    fn compute_dynkin(&self) -> String {
        let r = self.simple.len();
        if r == 1 {
            return "A1".into();
        }
        let c = |i: usize, j: usize| self.cartan_integer(&self.simple[i], &self.simple[j]).unwrap();
        let bond = |i: usize, j: usize| c(i, j) * c(j, i);
        let has_double = (0..r).any(|i| (0..r).any(|j| bond(i, j) == 2));
        if has_double {
            let len = |i: usize| self.inner(&self.simple[i].values, &self.simple[i].values);
            let last = len(r - 1);
            if (0..r - 1).all(|i| len(i) > last) {
                return format!("B{r}");
            }
            return format!("C{r}");
        }
        if r == 2 && bond(0, 1) == 0 {
            return "D2".into();
        }
        if r >= 3 && bond(r - 3, r - 2) != 0 && bond(r - 3, r - 1) != 0 && bond(r - 2, r - 1) == 0 {
            return format!("D{r}");
        }
        format!("A{r}")
    }

    /// dim 𝔞 + dim Z_𝔨(𝔞) + Σ mult.
    pub fn audited_dim(&self) -> usize {
        self.a_basis.len() + self.zero_space_basis.len() + self.roots.iter().map(|r| r.multiplicity).sum::<usize>()
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.simple.len();
        (0..r)
            .map(|i| (0..r).map(|j| self.cartan_integer(&self.simple[j], &self.simple[i]).unwrap()).collect())
            .collect()
    }
}

pub fn cartan_involution(x: &RatMatrix) -> RatMatrix {
    x.transpose().neg()
}

/// (antisymmetric part, symmetric part).
pub fn cartan_split(x: &RatMatrix) -> (RatMatrix, RatMatrix) {
    let half = Rational::new(1.into(), 2.into());
    let t = x.transpose();
    (x.sub(&t).unwrap().scale(&half), x.add(&t).unwrap().scale(&half))
}

/// Bases of 𝔨 and 𝔭.
pub fn cartan_bases(spec: &LieAlgebraSpec) -> (Vec<RatMatrix>, Vec<RatMatrix>) {
    let independent = |ms: Vec<RatMatrix>| -> Vec<RatMatrix> {
        let mut out: Vec<RatMatrix> = Vec::new();
        for m in ms {
            if m.is_zero() {
                continue;
            }
            let mut trial = out.clone();
            trial.push(m.clone());
            let s = m.rows();
            let mut flat = RatMatrix::zeros(s * s, trial.len());
            for (j, t) in trial.iter().enumerate() {
                for (i, v) in t.entries().iter().enumerate() {
                    flat[(i, j)] = v.clone();
                }
            }
            if rank(&flat) == trial.len() {
                out = trial;
            }
        }
        out
    };
    let (ks, ps): (Vec<_>, Vec<_>) = spec.basis().iter().map(cartan_split).unzip();
    (independent(ks), independent(ps))
}

/// Root table keyed by ε-label, for reports.
pub fn root_table(dec: &RootDecomposition) -> BTreeMap<String, usize> {
    dec.roots.iter().map(|r| (r.label(), r.multiplicity)).collect()
}

/// Whether a functional vanishes on all of 𝔞, i.e. the zero tuple.
pub fn is_zero_values(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}
