//! Θ-positive structures: the 𝔲_Θ / 𝔩_Θ / 𝔷_Θ decomposition, weight
//! spaces, the classification criterion, and the worked so(2,3) and sp(4)
//! cones.

use nalgebra::DMatrix;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactmat::{det, inverse, is_positive_definite, is_positive_semidefinite, kernel, q, qf, rank, RatMatrix, Rational};
use crate::liealg::{Family, LieAlgebraSpec, RestrictedRoot, RootDecomposition};

/// 1-based indices into the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaChoice {
    pub indices: Vec<usize>,
}

impl ThetaChoice {
    pub fn new(mut indices: Vec<usize>, rank: usize) -> Result<Self> {
        indices.sort();
        indices.dedup();
        if indices.is_empty() || indices.iter().any(|&i| i == 0 || i > rank) {
            return Err(Error::Domain(format!("theta indices must be a nonempty subset of 1..={rank}")));
        }
        Ok(ThetaChoice { indices })
    }

    pub fn all(rank: usize) -> Self {
        ThetaChoice { indices: (1..=rank).collect() }
    }

    fn contains(&self, i: usize) -> bool {
        self.indices.contains(&(i + 1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaVerdict {
    pub index: usize,
    pub root: String,
    pub multiplicity: usize,
    pub one_dimensional: bool,
    pub even_pairings: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Debug)]
pub struct WeightSpace {
    /// Values of the restricted weight on the 𝔷_Θ basis.
    pub restriction: Vec<Rational>,
    pub roots: Vec<String>,
    pub basis: Vec<RatMatrix>,
}

#[derive(Clone, Debug)]
pub struct ThetaReport {
    pub family: Family,
    pub theta: ThetaChoice,
    pub admits: bool,
    pub reasons: Vec<BetaVerdict>,
    pub u_theta_basis: Vec<RatMatrix>,
    pub u_opp_basis: Vec<RatMatrix>,
    pub l_theta_basis: Vec<RatMatrix>,
    pub z_theta_basis: Vec<RatMatrix>,
    pub weight_spaces: Vec<WeightSpace>,
    pub cones_constructed: bool,
}

fn supported_in(exp: &[i64], theta: &ThetaChoice) -> bool {
    exp.iter().enumerate().any(|(i, &c)| c != 0 && theta.contains(i))
}

fn flatten(ms: &[RatMatrix]) -> RatMatrix {
    let s = ms.first().map_or(0, |m| m.rows());
    let mut flat = RatMatrix::zeros(s * s, ms.len());
    for (j, m) in ms.iter().enumerate() {
        for (i, v) in m.entries().iter().enumerate() {
            flat[(i, j)] = v.clone();
        }
    }
    flat
}

/// Whether x lies in the span of `space`.
pub fn in_span(space: &[RatMatrix], x: &RatMatrix) -> bool {
    if x.is_zero() {
        return true;
    }
    if space.is_empty() {
        return false;
    }
    let mut all = space.to_vec();
    all.push(x.clone());
    rank(&flatten(&all)) == rank(&flatten(space))
}

fn weight_on(root: &RestrictedRoot, z: &[Rational]) -> Rational {
    root.values.iter().zip(z).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

pub fn theta_decompose(spec: &LieAlgebraSpec, theta: &ThetaChoice) -> Result<ThetaReport> {
    let dec = spec.restricted_roots();
    let r = dec.simple.len();
    if theta.indices.iter().any(|&i| i > r) {
        return Err(Error::Domain(format!("theta index exceeds rank {r}")));
    }
    let mut u = Vec::new();
    let mut u_opp = Vec::new();
    let mut l = dec.g0_basis.clone();
    let mut u_roots: Vec<&RestrictedRoot> = Vec::new();
    for root in &dec.roots {
        let exp = dec
            .simple_expansion(root)
            .ok_or_else(|| Error::Domain(format!("root {} is not an integer combination of simple roots", root.label())))?;
        if supported_in(&exp, theta) {
            if root.is_positive() {
                u.extend(root.space_basis.iter().cloned());
                u_roots.push(root);
            } else {
                u_opp.extend(root.space_basis.iter().cloned());
            }
        } else {
            l.extend(root.space_basis.iter().cloned());
        }
    }

    // 𝔷_Θ: coefficients c on the 𝔞 basis with [Σ c_k a_k, X] = 0 for X in 𝔩_Θ
    let k = dec.a_basis.len();
    let s = spec.size();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for x in &l {
        let brs: Vec<RatMatrix> = dec.a_basis.iter().map(|a| a.bracket(x).unwrap()).collect();
        for e in 0..s * s {
            rows.push(brs.iter().map(|b| b.entries()[e].clone()).collect());
        }
    }
    let sys = if rows.is_empty() { RatMatrix::zeros(0, k) } else { RatMatrix::from_rows(rows)? };
    let z_coeffs: Vec<Vec<Rational>> = if sys.rows() == 0 {
        (0..k).map(|i| (0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
    } else {
        kernel(&sys).into_iter().map(|c| c.col(0)).collect()
    };
    let z_basis: Vec<RatMatrix> = z_coeffs
        .iter()
        .map(|c| dec.a_basis.iter().zip(c).fold(RatMatrix::zeros(s, s), |acc, (a, x)| acc.add(&a.scale(x)).unwrap()))
        .collect();

    let mut weight_spaces: Vec<WeightSpace> = Vec::new();
    for root in u_roots {
        let key: Vec<Rational> = z_coeffs.iter().map(|c| weight_on(root, c)).collect();
        match weight_spaces.iter_mut().find(|w| w.restriction == key) {
            Some(w) => {
                w.roots.push(root.label());
                w.basis.extend(root.space_basis.iter().cloned());
            }
            None => weight_spaces.push(WeightSpace {
                restriction: key,
                roots: vec![root.label()],
                basis: root.space_basis.clone(),
            }),
        }
    }

    let reasons = verdicts(&dec, theta)?;
    let admits = reasons.iter().all(|v| v.one_dimensional && v.even_pairings);
    Ok(ThetaReport {
        family: spec.family,
        theta: theta.clone(),
        admits,
        reasons,
        u_theta_basis: u,
        u_opp_basis: u_opp,
        l_theta_basis: l,
        z_theta_basis: z_basis,
        weight_spaces,
        cones_constructed: worked_example(spec.family, theta),
    })
}

fn worked_example(family: Family, theta: &ThetaChoice) -> bool {
    matches!(
        (family, theta.indices.as_slice()),
        (Family::So { p: 2, q: 3 }, [1]) | (Family::So { p: 2, q: 3 }, [1, 2]) | (Family::Sp { n: 2 }, [2])
    )
}

fn verdicts(dec: &RootDecomposition, theta: &ThetaChoice) -> Result<Vec<BetaVerdict>> {
    let mut out = Vec::new();
    for &b in &theta.indices {
        let beta = &dec.simple[b - 1];
        let one_dimensional = beta.multiplicity == 1;
        let mut even = true;
        let mut reason = None;
        if !one_dimensional {
            reason = Some(format!(
                "root space of {} has dimension {} instead of 1",
                beta.label(),
                beta.multiplicity
            ));
        }
        for (i, alpha) in dec.simple.iter().enumerate() {
            if theta.contains(i) {
                continue;
            }
            // 2(β,α)/(α,α)
            let c = dec.cartan_integer(alpha, beta)?;
            if c % 2 != 0 {
                even = false;
                if reason.is_none() {
                    reason = Some(format!(
                        "sharp-cone criterion fails: weight space carries an SL(2)-type action (2(beta,alpha)/(alpha,alpha) = {c} for alpha = {})",
                        alpha.label()
                    ));
                }
            }
        }
        out.push(BetaVerdict {
            index: b,
            root: beta.label(),
            multiplicity: beta.multiplicity,
            one_dimensional,
            even_pairings: even,
            reason,
        });
    }
    Ok(out)
}

pub fn admits_theta_positive(spec: &LieAlgebraSpec, theta: &ThetaChoice) -> Result<ThetaReport> {
    theta_decompose(spec, theta)
}

/// J = [[0,0,1],[0,-1,0],[1,0,0]].
pub fn so23_cone_form() -> RatMatrix {
    RatMatrix::from_i64(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]])
}

pub fn so23_cone_contains(v: &[Rational], strict: bool) -> Result<bool> {
    if v.len() != 3 {
        return Err(Error::Shape("cone vector must have length 3".into()));
    }
    let quad = q(2) * &v[0] * &v[2] - &v[1] * &v[1];
    Ok(if strict {
        quad.is_positive() && v[0].is_positive()
    } else {
        !quad.is_negative() && !v[0].is_negative()
    })
}

pub fn sp4_cone_contains(m: &RatMatrix, strict: bool) -> Result<bool> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::Shape("sp(4) cone element must be 2x2".into()));
    }
    if !m.is_symmetric() {
        return Err(Error::Domain("sp(4) cone element must be symmetric".into()));
    }
    Ok(if strict { is_positive_definite(m) } else { is_positive_semidefinite(m) })
}

/// Exact exponential of a nilpotent matrix.
pub fn theta_exp(x: &RatMatrix) -> Result<RatMatrix> {
    if !x.is_square() {
        return Err(Error::Shape("exp needs a square matrix".into()));
    }
    let n = x.rows();
    let mut out = RatMatrix::identity(n);
    let mut term = RatMatrix::identity(n);
    for k in 1..=n {
        term = term.matmul(x)?.scale(&qf(1, k as i64));
        if term.is_zero() {
            return Ok(out);
        }
        out = out.add(&term)?;
    }
    if term.matmul(x)?.is_zero() {
        Ok(out)
    } else {
        Err(Error::Domain("matrix is not nilpotent; use a numeric exponential".into()))
    }
}

/// exp(x e1) exp(v e2) exp(y e1) exp(w e2) in SO(Q_{2,3}).
pub fn so23_f1212(x: &Rational, v: &Rational, y: &Rational, w: &Rational) -> RatMatrix {
    let b = LieAlgebraSpec::so23_named();
    let f = |t: &Rational, m: &RatMatrix| theta_exp(&m.scale(t)).expect("nilpotent");
    f(x, &b.e[0])
        .matmul(&f(v, &b.e[1]))
        .unwrap()
        .matmul(&f(y, &b.e[0]))
        .unwrap()
        .matmul(&f(w, &b.e[1]))
        .unwrap()
}

/// 𝔲_Θ element for so(2,3), Θ = {α1}: v in row 1, Jv in column 5.
pub fn so23_u_element(v: &[Rational]) -> RatMatrix {
    let jv = so23_cone_form().matmul(&RatMatrix::column(v.to_vec())).unwrap();
    let mut m = RatMatrix::zeros(5, 5);
    for i in 0..3 {
        m[(0, i + 1)] = v[i].clone();
        m[(i + 1, 4)] = jv[(i, 0)].clone();
    }
    m
}

fn rand_pos(rng: &mut ChaCha8Rng) -> Rational {
    qf(rng.gen_range(1..=12), rng.gen_range(1..=6))
}

fn rand_rat(rng: &mut ChaCha8Rng) -> Rational {
    qf(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

/// A closed-cone point for so(2,3): v1 = p², v3 = q², |v2| <= pq or on the boundary.
fn so23_cone_point(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    match rng.gen_range(0..4) {
        0 => vec![q(0), q(0), q(0)],
        1 => {
            let (p, qq) = (rand_rat(rng), rand_rat(rng));
            vec![q(2) * &p * &p, q(2) * &p * &qq, &qq * &qq]
        }
        _ => {
            let (p, qq) = (rand_rat(rng), rand_rat(rng));
            let r = qf(rng.gen_range(-10..=10), 10);
            vec![&p * &p, r * &p * &qq, &qq * &qq]
        }
    }
}

fn embed_middle(m3: &DMatrix<f64>, a: f64) -> DMatrix<f64> {
    let mut g = DMatrix::<f64>::zeros(5, 5);
    g[(0, 0)] = a;
    g[(4, 4)] = 1.0 / a;
    for i in 0..3 {
        for j in 0..3 {
            g[(i + 1, j + 1)] = m3[(i, j)];
        }
    }
    g
}

/// One trial for so(2,3), Θ = {α1}; exact part then numeric rotation.
fn so23_levi_trial(rng: &mut ChaCha8Rng, tol: f64) -> bool {
    let b = LieAlgebraSpec::so23_named();
    let v = so23_cone_point(rng);
    let x = so23_u_element(&v);
    let a = rand_pos(rng);
    let bb = rand_pos(rng);
    let diag = RatMatrix::diag(&[a.clone(), bb.clone(), q(1), bb.recip(), a.recip()]);
    let g = diag
        .matmul(&theta_exp(&b.e[1].scale(&rand_rat(rng))).unwrap())
        .unwrap()
        .matmul(&theta_exp(&b.f[1].scale(&rand_rat(rng))).unwrap())
        .unwrap();
    let ginv = inverse(&g).unwrap();
    let y = g.matmul(&x).unwrap().matmul(&ginv).unwrap();
    let v2: Vec<Rational> = (1..4).map(|j| y[(0, j)].clone()).collect();
    if y != so23_u_element(&v2) || !so23_cone_contains(&v2, false).unwrap() {
        return false;
    }
    // numeric rotation exp(θ(e2 - f2)) in the middle block
    let theta: f64 = rng.gen_range(-3.2..3.2);
    let k = b.e[1].sub(&b.f[1]).unwrap().to_f64().view((1, 1), (3, 3)).into_owned() * theta;
    let rot = embed_middle(&k.exp(), 1.0);
    let yf = y.to_f64();
    let z = &rot * yf * rot.transpose();
    let w = [z[(0, 1)], z[(0, 2)], z[(0, 3)]];
    let scale = 1.0 + w.iter().map(|t| t * t).sum::<f64>();
    2.0 * w[0] * w[2] - w[1] * w[1] >= -tol * scale && w[0] >= -tol * scale.sqrt()
}

fn so23_full_trial(rng: &mut ChaCha8Rng) -> bool {
    let b = LieAlgebraSpec::so23_named();
    let (a, bb) = (rand_pos(rng), rand_pos(rng));
    let g = RatMatrix::diag(&[a.clone(), bb.clone(), q(1), bb.recip(), a.recip()]);
    let ginv = inverse(&g).unwrap();
    b.e.iter().all(|e| {
        let t = q(rng.gen_range(0..=7));
        let x = e.scale(&t);
        let y = g.matmul(&x).unwrap().matmul(&ginv).unwrap();
        // image is a nonnegative multiple of e
        let idx = e.entries().iter().position(|c| !c.is_zero()).unwrap();
        let s = &y.entries()[idx] / &e.entries()[idx];
        !s.is_negative() && y == e.scale(&s)
    })
}

fn sp4_trial(rng: &mut ChaCha8Rng) -> bool {
    let mut a = RatMatrix::from_rows(vec![
        vec![rand_rat(rng), rand_rat(rng)],
        vec![rand_rat(rng), rand_rat(rng)],
    ])
    .unwrap();
    let d = det(&a).unwrap();
    if d.is_zero() {
        a = RatMatrix::identity(2);
    } else if d.is_negative() {
        for i in 0..2 {
            a[(i, 0)] = -a[(i, 0)].clone();
        }
    }
    let (p, r) = (rand_rat(rng), rand_rat(rng));
    // PSD: rank-one plus a nonnegative multiple of I
    let m = RatMatrix::from_rows(vec![vec![&p * &p, &p * &r], vec![&p * &r, &r * &r]])
        .unwrap()
        .add(&RatMatrix::identity(2).scale(&q(rng.gen_range(0..=2))))
        .unwrap();
    let levi = crate::symplectic::levi(&a).unwrap();
    let x = crate::symplectic::upper_unipotent(&m).sub(&RatMatrix::identity(4)).unwrap();
    let y = levi.matmul(&x).unwrap().matmul(&inverse(&levi).unwrap()).unwrap();
    let m2 = y.block_at(0, 2, 2, 2);
    m2 == a.matmul(&m).unwrap().matmul(&a.transpose()).unwrap() && sp4_cone_contains(&m2, false).unwrap()
}

/// Samples Levi elements and checks that they keep closed-cone points in the cone.
pub fn cone_invariance_sample(spec: &LieAlgebraSpec, theta: &ThetaChoice, trials: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = 1e-9;
    let trial: Box<dyn FnMut(&mut ChaCha8Rng) -> bool> = match (spec.family, theta.indices.as_slice()) {
        (Family::So { p: 2, q: 3 }, [1]) => Box::new(move |r| so23_levi_trial(r, tol)),
        (Family::So { p: 2, q: 3 }, [1, 2]) => Box::new(so23_full_trial),
        (Family::Sp { n: 2 }, [2]) => Box::new(sp4_trial),
        _ => return Err(Error::Domain("cone not constructed for this (algebra, theta) pair".into())),
    };
    let mut trial = trial;
    Ok((0..trials).all(|_| trial(&mut rng)))
}

/// Values of a root on 𝔞 as f64, for diagnostics.
pub fn root_values_f64(r: &RestrictedRoot) -> Vec<f64> {
    r.values.iter().map(|v| v.to_f64().unwrap()).collect()
}
