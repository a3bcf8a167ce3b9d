//! Siegel upper half-space and the bounded domain, in floating point.

use nalgebra::{Complex, DMatrix};
use rand::Rng;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps > 0.0 {
            Ok(Tolerance { eps })
        } else {
            Err(Error::Domain(format!("eps must be positive and finite, got {eps}")))
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-9 }
    }
}

fn i() -> C64 {
    C64::new(0.0, 1.0)
}

pub fn complexify(m: &RMatrix) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

pub fn real_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

pub fn imag_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.im)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

fn scale_of(m: &CMatrix) -> f64 {
    1.0f64.max(max_abs(m))
}

fn check_square(m: &CMatrix, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!("{what} must be square")));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Domain(format!("{what} has non-finite entries")));
    }
    Ok(m.nrows())
}

pub fn is_complex_symmetric(z: &CMatrix, tol: Tolerance) -> bool {
    z.is_square() && max_abs(&(z - z.transpose())) < tol.eps * scale_of(z)
}

fn symmetrize(z: &CMatrix) -> CMatrix {
    (z + z.transpose()) * C64::new(0.5, 0.0)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

pub fn in_siegel(z: &CMatrix, tol: Tolerance) -> bool {
    if check_square(z, "Z").is_err() || !is_complex_symmetric(z, tol) {
        return false;
    }
    let y = complexify(&imag_part(&symmetrize(z)));
    hermitian_eigenvalues(&y).first().is_some_and(|&m| m > tol.eps)
}

pub fn j_matrix_f64(n: usize) -> RMatrix {
    let mut j = RMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = 1.0;
        j[(n + k, k)] = -1.0;
    }
    j
}

pub fn is_symplectic(g: &RMatrix, tol: Tolerance) -> bool {
    if g.nrows() != g.ncols() || !g.nrows().is_multiple_of(2) {
        return false;
    }
    let j = j_matrix_f64(g.nrows() / 2);
    let d = g.transpose() * &j * g - j;
    let scale = 1.0f64.max(g.amax() * g.amax());
    d.amax() < tol.eps * scale
}

fn blocks(g: &CMatrix) -> (CMatrix, CMatrix, CMatrix, CMatrix) {
    let n = g.nrows() / 2;
    (
        g.view((0, 0), (n, n)).into_owned(),
        g.view((0, n), (n, n)).into_owned(),
        g.view((n, 0), (n, n)).into_owned(),
        g.view((n, n), (n, n)).into_owned(),
    )
}

fn checked_inverse(m: &CMatrix, tol: Tolerance, what: &str) -> Result<CMatrix> {
    let sv = m.clone().singular_values();
    let (mx, mn) = sv.iter().fold((0.0f64, f64::INFINITY), |(a, b), &s| (a.max(s), b.min(s)));
    if mn == 0.0 || mx / mn > 1.0 / tol.eps {
        return Err(Error::Precondition(format!("{what} is numerically singular")));
    }
    m.clone().try_inverse().ok_or(Error::Singular)
}

/// (A Z + B)(C Z + D)⁻¹ for any complex 2n×2n block matrix.
pub fn linear_fractional(g: &CMatrix, w: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    let n = check_square(w, "W")?;
    if g.nrows() != 2 * n || g.ncols() != 2 * n {
        return Err(Error::Shape(format!("group element must be {}x{}", 2 * n, 2 * n)));
    }
    let (a, b, c, d) = blocks(g);
    let den = checked_inverse(&(c * w + d), tol, "CZ+D")?;
    let out = (a * w + b) * den;
    Ok(if is_complex_symmetric(&out, tol) { symmetrize(&out) } else { out })
}

pub fn mobius(g: &RMatrix, z: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    let n = check_square(z, "Z")?;
    if g.nrows() != 2 * n || g.ncols() != 2 * n {
        return Err(Error::Shape(format!("g must be {}x{}", 2 * n, 2 * n)));
    }
    if !is_symplectic(g, tol) {
        return Err(Error::Precondition("g is not symplectic".into()));
    }
    if !in_siegel(z, tol) {
        return Err(Error::Precondition("Z is not in the Siegel upper half-space".into()));
    }
    linear_fractional(&complexify(g), z, tol)
}

/// ((CZ̄ + D)ᵀ)⁻¹ Y (CZ + D)⁻¹, the imaginary part of g(Z).
/// The transpose falls on the whole factor C Z̄; Z̄ᵀC alone is wrong once n > 1.
pub fn im_part_formula(g: &RMatrix, z: &CMatrix, tol: Tolerance) -> Result<RMatrix> {
    let n = check_square(z, "Z")?;
    if g.nrows() != 2 * n || g.ncols() != 2 * n {
        return Err(Error::Shape(format!("g must be {}x{}", 2 * n, 2 * n)));
    }
    let (_, _, c, d) = blocks(&complexify(g));
    let y = complexify(&imag_part(z));
    let left = checked_inverse(&(&c * z.conjugate() + &d).transpose(), tol, "(CZbar+D)t")?;
    let right = checked_inverse(&(&c * z + &d), tol, "CZ+D")?;
    Ok(real_part(&(left * y * right)))
}

pub fn stabilizes_i_identity(g: &RMatrix, tol: Tolerance) -> Result<bool> {
    let n = g.nrows() / 2;
    let ii = CMatrix::identity(n, n) * i();
    let w = mobius(g, &ii, tol)?;
    Ok(max_abs(&(w - ii)) < tol.eps.sqrt() * scale_of(&complexify(g)))
}

/// A ≈ D and B ≈ −C.
pub fn stabilizer_block_form(g: &RMatrix, tol: Tolerance) -> bool {
    let (a, b, c, d) = blocks(&complexify(g));
    let s = scale_of(&complexify(g));
    max_abs(&(a - d)) < tol.eps.sqrt() * s && max_abs(&(b + c)) < tol.eps.sqrt() * s
}

pub fn cayley(z: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    let n = check_square(z, "Z")?;
    let ii = CMatrix::identity(n, n) * i();
    Ok((z - &ii) * checked_inverse(&(z + &ii), tol, "Z+iI")?)
}

pub fn cayley_inv(w: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    let n = check_square(w, "W")?;
    let id = CMatrix::identity(n, n);
    let inv = checked_inverse(&(&id - w), tol, "I-W").map_err(|_| Error::Domain("I-W is singular: boundary input".into()))?;
    Ok((&id + w) * inv * i())
}

fn defect_matrix(w: &CMatrix) -> CMatrix {
    let n = w.nrows();
    CMatrix::identity(n, n) - w.adjoint() * w
}

fn rank_threshold(w: &CMatrix, tol: Tolerance) -> f64 {
    tol.eps * scale_of(w).powi(2)
}

/// Rank of I − W̄W.
pub fn boundary_rank(w: &CMatrix, tol: Tolerance) -> Result<usize> {
    check_square(w, "W")?;
    let th = rank_threshold(w, tol);
    Ok(hermitian_eigenvalues(&defect_matrix(w)).iter().filter(|&&e| e.abs() > th).count())
}

pub fn in_bounded(w: &CMatrix, tol: Tolerance) -> bool {
    check_square(w, "W").is_ok()
        && is_complex_symmetric(w, tol)
        && hermitian_eigenvalues(&defect_matrix(w)).first().is_some_and(|&m| m > rank_threshold(w, tol))
}

pub fn on_closure(w: &CMatrix, tol: Tolerance) -> bool {
    check_square(w, "W").is_ok()
        && is_complex_symmetric(w, tol)
        && hermitian_eigenvalues(&defect_matrix(w)).first().is_some_and(|&m| m >= -rank_threshold(w, tol))
}

pub fn on_shilov(w: &CMatrix, tol: Tolerance) -> bool {
    on_closure(w, tol) && boundary_rank(w, tol) == Ok(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stratum {
    Interior,
    Boundary { rank: usize },
    Shilov,
    Outside,
}

impl std::fmt::Display for Stratum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stratum::Interior => write!(f, "interior"),
            Stratum::Boundary { rank } => write!(f, "boundary-rank-{rank}"),
            Stratum::Shilov => write!(f, "shilov"),
            Stratum::Outside => write!(f, "outside"),
        }
    }
}

pub fn classify(w: &CMatrix, tol: Tolerance) -> Result<Stratum> {
    let n = check_square(w, "W")?;
    if !on_closure(w, tol) {
        return Ok(Stratum::Outside);
    }
    Ok(match boundary_rank(w, tol)? {
        0 => Stratum::Shilov,
        r if r == n => Stratum::Interior,
        r => Stratum::Boundary { rank: r },
    })
}

/// The Cayley matrix (1/(1+i)) (I −iI; I iI), using √(2i) = 1+i.
pub fn cayley_matrix(n: usize) -> CMatrix {
    let mut c = CMatrix::zeros(2 * n, 2 * n);
    let s = C64::new(1.0, 0.0) / C64::new(1.0, 1.0);
    for k in 0..n {
        c[(k, k)] = s;
        c[(k, n + k)] = -i() * s;
        c[(n + k, k)] = s;
        c[(n + k, n + k)] = i() * s;
    }
    c
}

pub fn cayley_matrix_inv(n: usize) -> CMatrix {
    let mut c = CMatrix::zeros(2 * n, 2 * n);
    let s = C64::new(1.0, 0.0) / C64::new(1.0, 1.0);
    for k in 0..n {
        c[(k, k)] = i() * s;
        c[(k, n + k)] = i() * s;
        c[(n + k, k)] = -s;
        c[(n + k, n + k)] = s;
    }
    c
}

pub fn conjugate_to_disc(g: &RMatrix) -> CMatrix {
    let n = g.nrows() / 2;
    cayley_matrix(n) * complexify(g) * cayley_matrix_inv(n)
}

/// c g c⁻¹ has the shape (A B; B̄ Ā) and is complex symplectic.
pub fn conj_group_form(g: &RMatrix, tol: Tolerance) -> bool {
    if g.nrows() != g.ncols() || !g.nrows().is_multiple_of(2) {
        return false;
    }
    let n = g.nrows() / 2;
    let h = conjugate_to_disc(g);
    let (a, b, c, d) = blocks(&h);
    let s = scale_of(&h).powi(2);
    let shape = max_abs(&(c - b.conjugate())) < tol.eps * s && max_abs(&(d - a.conjugate())) < tol.eps * s;
    let j = complexify(&j_matrix_f64(n));
    shape && max_abs(&(h.transpose() * &j * &h - j)) < tol.eps * s
}

/// Moves W along the orbit of c g c⁻¹.
pub fn disc_action(g: &RMatrix, w: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    if !is_symplectic(g, tol) {
        return Err(Error::Precondition("g is not symplectic".into()));
    }
    linear_fractional(&conjugate_to_disc(g), w, tol)
}

/// Random element of Sp(2n,ℝ): product of unipotent and Levi factors with entries of size `spread`.
pub fn random_symplectic<R: Rng>(n: usize, spread: f64, rng: &mut R) -> RMatrix {
    let sym = |rng: &mut R| {
        let m = RMatrix::from_fn(n, n, |_, _| rng.gen_range(-spread..spread));
        (&m + m.transpose()) * 0.5
    };
    let id = RMatrix::identity(n, n);
    let z = RMatrix::zeros(n, n);
    let join = |a: &RMatrix, b: &RMatrix, c: &RMatrix, d: &RMatrix| {
        let mut g = RMatrix::zeros(2 * n, 2 * n);
        g.view_mut((0, 0), (n, n)).copy_from(a);
        g.view_mut((0, n), (n, n)).copy_from(b);
        g.view_mut((n, 0), (n, n)).copy_from(c);
        g.view_mut((n, n), (n, n)).copy_from(d);
        g
    };
    let up = join(&id, &sym(rng), &z, &id);
    let low = join(&id, &z, &sym(rng), &id);
    let mut a = RMatrix::from_fn(n, n, |_, _| rng.gen_range(-spread..spread)) + &id;
    while a.determinant().abs() < 0.1 {
        a = RMatrix::from_fn(n, n, |_, _| rng.gen_range(-spread..spread)) + &id;
    }
    let at_inv = a.transpose().try_inverse().unwrap();
    let levi = join(&a, &z, &z, &at_inv);
    up * levi * low
}

pub fn random_siegel<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let s = RMatrix::from_fn(n, n, |_, _| rng.gen_range(-2.0..2.0));
    let s = (&s + s.transpose()) * 0.5;
    let b = RMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let y = &b * b.transpose() + RMatrix::identity(n, n) * 0.5;
    CMatrix::from_fn(n, n, |r, c| C64::new(s[(r, c)], y[(r, c)]))
}

/// diag(w₁, …, w_r, −1, …, −1).
pub fn boundary_point(ws: &[C64], n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = ws.get(k).copied().unwrap_or(C64::new(-1.0, 0.0));
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t() -> Tolerance {
        Tolerance::default()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn tolerance_rejects_nonpositive() {
        assert!(Tolerance::new(0.0).is_err());
        assert!(Tolerance::new(-1.0).is_err());
        assert!(Tolerance::new(f64::NAN).is_err());
        assert!(Tolerance::new(1e-6).is_ok());
    }

    #[test]
    fn siegel_membership() {
        let ii = CMatrix::identity(2, 2) * i();
        assert!(in_siegel(&ii, t()));
        let s = complexify(&RMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 3.0]));
        assert!(!in_siegel(&s, t()));
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0, 1.0), c(0.0, -1.0)]));
        assert!(!in_siegel(&d, t()));
    }

    #[test]
    fn symplectic_checks() {
        assert!(is_symplectic(&RMatrix::identity(4, 4), t()));
        let mut g = RMatrix::identity(4, 4);
        g[(0, 2)] = 1.0;
        g[(0, 3)] = 2.0;
        g[(1, 2)] = 2.0;
        assert!(is_symplectic(&g, t()));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = RMatrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
        assert!(!is_symplectic(&r, t()));
        assert!(is_symplectic(&random_symplectic(3, 1.0, &mut rng), t()));
    }

    #[test]
    fn mobius_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let z = random_siegel(2, &mut rng);
        let w = mobius(&RMatrix::identity(4, 4), &z, t()).unwrap();
        assert!(max_abs(&(w - &z)) < 1e-12);
        // (I −X; 0 I) sends X + iY to iY
        let x = real_part(&z);
        let mut g = RMatrix::identity(4, 4);
        g.view_mut((0, 2), (2, 2)).copy_from(&(-&x));
        let w = mobius(&g, &z, t()).unwrap();
        assert!(real_part(&w).amax() < 1e-12);
        assert!((imag_part(&w) - imag_part(&z)).amax() < 1e-12);
        // (h 0; 0 h⁻ᵀ) sends iY to i hYhᵀ
        let h = RMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.5, 3.0]);
        let y = imag_part(&z);
        let iy = complexify(&y) * i();
        let mut g = RMatrix::zeros(4, 4);
        g.view_mut((0, 0), (2, 2)).copy_from(&h);
        g.view_mut((2, 2), (2, 2)).copy_from(&h.transpose().try_inverse().unwrap());
        let w = mobius(&g, &iy, t()).unwrap();
        assert!((imag_part(&w) - &h * y * h.transpose()).amax() < 1e-10);
        assert!(real_part(&w).amax() < 1e-10);
    }

    #[test]
    fn mobius_preconditions() {
        let ii = CMatrix::identity(2, 2) * i();
        let mut bad = RMatrix::identity(4, 4);
        bad[(0, 1)] = 1.0;
        assert!(matches!(mobius(&bad, &ii, t()), Err(Error::Precondition(_))));
        let s = CMatrix::identity(2, 2);
        assert!(matches!(mobius(&RMatrix::identity(4, 4), &s, t()), Err(Error::Precondition(_))));
    }

    #[test]
    fn stabilizer_examples() {
        assert!(stabilizes_i_identity(&RMatrix::identity(4, 4), t()).unwrap());
        // (A −B; B A) with A + iB unitary
        let th: f64 = 0.7;
        let u = nalgebra::Matrix2::new(C64::from_polar(1.0, th), c(0.0, 0.0), c(0.0, 0.0), C64::from_polar(1.0, -0.3));
        let rot = nalgebra::Matrix2::new(c(0.6, 0.0), c(-0.8, 0.0), c(0.8, 0.0), c(0.6, 0.0));
        let u = rot * u;
        let a = u.map(|z| z.re);
        let b = u.map(|z| z.im);
        let mut g = RMatrix::zeros(4, 4);
        g.view_mut((0, 0), (2, 2)).copy_from(&a);
        g.view_mut((0, 2), (2, 2)).copy_from(&(-b));
        g.view_mut((2, 0), (2, 2)).copy_from(&b);
        g.view_mut((2, 2), (2, 2)).copy_from(&a);
        assert!(stabilizes_i_identity(&g, t()).unwrap());
        assert!(stabilizer_block_form(&g, t()));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let g = random_symplectic(2, 1.0, &mut rng);
            assert_eq!(stabilizes_i_identity(&g, t()).unwrap(), stabilizer_block_form(&g, t()));
            assert!(!stabilizes_i_identity(&g, t()).unwrap());
        }
    }

    #[test]
    fn cayley_examples() {
        let z = CMatrix::identity(1, 1) * c(0.0, 2.0);
        let w = cayley(&z, t()).unwrap();
        assert!((w[(0, 0)] - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        let ii = CMatrix::identity(3, 3) * i();
        assert!(max_abs(&cayley(&ii, t()).unwrap()) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3 {
            let z = random_siegel(n, &mut rng);
            let w = cayley(&z, t()).unwrap();
            assert!(in_bounded(&w, t()));
            assert!(max_abs(&(cayley_inv(&w, t()).unwrap() - &z)) < 1e-7);
        }
        assert!(cayley_inv(&CMatrix::identity(2, 2), t()).is_err());
    }

    #[test]
    fn bounded_domain_strata() {
        let z = CMatrix::zeros(2, 2);
        assert_eq!(boundary_rank(&z, t()).unwrap(), 2);
        assert_eq!(classify(&z, t()).unwrap(), Stratum::Interior);
        let id = CMatrix::identity(2, 2);
        assert!(on_shilov(&id, t()));
        assert_eq!(boundary_rank(&id, t()).unwrap(), 0);
        let w = boundary_point(&[c(0.3, 0.2)], 2);
        assert!(!in_bounded(&w, t()));
        assert!(!on_shilov(&w, t()));
        assert_eq!(boundary_rank(&w, t()).unwrap(), 1);
        assert_eq!(classify(&w, t()).unwrap(), Stratum::Boundary { rank: 1 });
        assert_eq!(classify(&(id * c(2.0, 0.0)), t()).unwrap(), Stratum::Outside);
    }

    #[test]
    fn conj_group_examples() {
        assert!(conj_group_form(&RMatrix::identity(4, 4), t()));
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in 1..=3 {
            assert!(conj_group_form(&random_symplectic(n, 1.0, &mut rng), t()));
            let r = RMatrix::from_fn(2 * n, 2 * n, |_, _| rng.gen_range(-1.0..1.0));
            assert!(!conj_group_form(&r, t()));
        }
        let n = 2;
        let prod = cayley_matrix(n) * cayley_matrix_inv(n);
        assert!(max_abs(&(prod - CMatrix::identity(4, 4))) < 1e-15);
    }

    #[test]
    fn disc_action_matches_cayley() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=3 {
            let g = random_symplectic(n, 0.8, &mut rng);
            let z = random_siegel(n, &mut rng);
            let lhs = disc_action(&g, &cayley(&z, t()).unwrap(), t()).unwrap();
            let rhs = cayley(&mobius(&g, &z, t()).unwrap(), t()).unwrap();
            assert!(max_abs(&(lhs - rhs)) < 1e-8);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]

            #[test]
            fn action_composes(seed in any::<u64>(), n in 1usize..=3) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let g = random_symplectic(n, 1.0, &mut rng);
                let h = random_symplectic(n, 1.0, &mut rng);
                let z = random_siegel(n, &mut rng);
                let lhs = mobius(&g, &mobius(&h, &z, t()).unwrap(), t()).unwrap();
                let rhs = mobius(&(&g * &h), &z, t()).unwrap();
                prop_assert!(max_abs(&(lhs - rhs)) < 1e-7 * scale_of(&complexify(&(&g * &h))));
            }

            #[test]
            fn image_stays_in_siegel(seed in any::<u64>(), n in 1usize..=3) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let g = random_symplectic(n, 1.0, &mut rng);
                let z = random_siegel(n, &mut rng);
                let w = mobius(&g, &z, t()).unwrap();
                prop_assert!(in_siegel(&w, t()));
                let y = im_part_formula(&g, &z, t()).unwrap();
                prop_assert!((imag_part(&w) - y).amax() < 1e-8 * scale_of(&w));
            }

            #[test]
            fn boundary_rank_along_orbit(seed in any::<u64>(), re in -0.9f64..0.9, im in -0.4f64..0.4) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut w = boundary_point(&[c(re, im)], 2);
                for _ in 0..20 {
                    let g = random_symplectic(2, 0.3, &mut rng);
                    w = disc_action(&g, &w, t()).unwrap();
                    prop_assert_eq!(boundary_rank(&w, t()).unwrap(), 1);
                }
            }
        }
    }
}
