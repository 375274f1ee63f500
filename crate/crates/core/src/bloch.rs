//! Augmented Bloch representation of a qubit and the superoperators acting
//! on it.
//!
//! A density matrix is expanded as `rho = (v0 I + v1 sx + v2 sy + v3 sz) / 2`
//! so that `v0 = Tr(rho) = 1`. The strictly orthonormal basis `{s_i / sqrt 2}`
//! differs from this by a factor `sqrt 2` on every component, see
//! [`BlochVector::to_orthonormal`].

use nalgebra::{Matrix2, Matrix4, Vector3, Vector4};

use crate::{Error, Result, C64};

pub type Mat2 = Matrix2<C64>;
pub type CMat4 = Matrix4<C64>;
pub type CVec4 = Vector4<C64>;

const HERMITIAN_TOL: f64 = 1e-10;
const RECONSTRUCTION_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity2() -> Mat2 {
    Mat2::identity()
}

pub fn sigma_x() -> Mat2 {
    Mat2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.))
}

pub fn sigma_y() -> Mat2 {
    Mat2::new(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.))
}

pub fn sigma_z() -> Mat2 {
    Mat2::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.))
}

/// `sigma_theta = sigma_z cos(theta) + sigma_x sin(theta)`.
pub fn sigma_theta(theta: f64) -> Mat2 {
    sigma_z() * c(theta.cos(), 0.) + sigma_x() * c(theta.sin(), 0.)
}

/// Four Hermitian 2x2 matrices spanning the qubit operator space.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianBasis {
    elements: [Mat2; 4],
}

impl HermitianBasis {
    /// `{I, sx, sy, sz}`, the basis in which Bloch components are taken.
    /// `Tr(M_i M_j) = 2 delta_ij`.
    pub fn pauli() -> Self {
        Self {
            elements: [identity2(), sigma_x(), sigma_y(), sigma_z()],
        }
    }

    /// `{I, sx, sy, sz} / sqrt 2`, orthonormal under the trace inner product.
    pub fn orthonormal() -> Self {
        let k = c(std::f64::consts::FRAC_1_SQRT_2, 0.);
        let p = Self::pauli();
        Self {
            elements: p.elements.map(|m| m * k),
        }
    }

    pub fn elements(&self) -> &[Mat2; 4] {
        &self.elements
    }

    /// Gram matrix `G_ij = Tr(M_i M_j)`.
    pub fn gram(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| (self.elements[i] * self.elements[j]).trace().re)
    }
}

/// Augmented Bloch vector `[v0, v1, v2, v3]` with `v0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(Vector4<f64>);

impl BlochVector {
    pub fn new(v1: f64, v2: f64, v3: f64) -> Self {
        Self(Vector4::new(1.0, v1, v2, v3))
    }

    /// Rejects vectors whose trace component is not exactly 1.
    pub fn from_components(v: [f64; 4]) -> Result<Self> {
        if v[0] != 1.0 {
            return Err(Error::invalid(format!(
                "Bloch vector trace component must be 1, got {}",
                v[0]
            )));
        }
        Ok(Self(Vector4::from(v)))
    }

    pub(crate) fn from_raw(v: Vector4<f64>) -> Self {
        Self(v)
    }

    /// Charge-basis ground/zero-charge state `|0><0|`.
    pub fn up() -> Self {
        Self::new(0., 0., 1.)
    }

    /// `|1><1|`.
    pub fn down() -> Self {
        Self::new(0., 0., -1.)
    }

    pub fn maximally_mixed() -> Self {
        Self::new(0., 0., 0.)
    }

    pub fn as_vector(&self) -> &Vector4<f64> {
        &self.0
    }

    pub fn components(&self) -> [f64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    pub fn v3(&self) -> f64 {
        self.0[3]
    }

    /// Euclidean length of `(v1, v2, v3)`; at most 1 for a physical state.
    pub fn radius(&self) -> f64 {
        Vector3::new(self.0[1], self.0[2], self.0[3]).norm()
    }

    pub fn is_physical(&self, eps: f64) -> bool {
        self.0[0] == 1.0 && self.radius() <= 1.0 + eps
    }

    /// Average charge number `Q = (1 - v3) / 2`.
    pub fn charge(&self) -> f64 {
        0.5 * (1.0 - self.0[3])
    }

    /// Components in the orthonormal basis `{s_i / sqrt 2}`.
    pub fn to_orthonormal(&self) -> [f64; 4] {
        self.components()
            .map(|x| x * std::f64::consts::FRAC_1_SQRT_2)
    }

    pub fn from_orthonormal(u: [f64; 4]) -> Result<Self> {
        let v = u.map(|x| x * std::f64::consts::SQRT_2);
        // Snap the trace component: sqrt 2 * (1/sqrt 2) is not always exactly 1.
        if (v[0] - 1.0).abs() > 1e-14 {
            return Err(Error::invalid(format!("trace component {} != 1", v[0])));
        }
        Ok(Self::new(v[1], v[2], v[3]))
    }
}

fn hermiticity_defect(m: &Mat2) -> f64 {
    (m - m.adjoint()).norm()
}

fn check_hermitian(h: &Mat2, what: &str) -> Result<()> {
    let d = hermiticity_defect(h);
    if d > HERMITIAN_TOL * h.norm().max(1.0) {
        return Err(Error::invalid(format!(
            "{what} is not Hermitian (|H - H^dagger| = {d:.3e})"
        )));
    }
    Ok(())
}

/// Bloch components `v_i = Tr(rho s_i)` of a density matrix.
pub fn vectorize(rho: &Mat2) -> Result<BlochVector> {
    check_hermitian(rho, "density matrix")?;
    let tr = rho.trace();
    if (tr - c(1., 0.)).norm() > HERMITIAN_TOL {
        return Err(Error::invalid(format!("density matrix trace {tr} != 1")));
    }
    let raw = raw_components(rho);
    Ok(BlochVector::new(raw[1], raw[2], raw[3]))
}

pub fn devectorize(v: &BlochVector) -> Mat2 {
    components_to_matrix(v.as_vector())
}

/// `Re Tr(X s_i)` for an arbitrary Hermitian `X` (no normalization).
fn raw_components(x: &Mat2) -> Vector4<f64> {
    let b = HermitianBasis::pauli();
    Vector4::from_fn(|i, _| (x * b.elements[i]).trace().re)
}

fn components_to_matrix(v: &Vector4<f64>) -> Mat2 {
    let b = HermitianBasis::pauli();
    let mut m = Mat2::zeros();
    for i in 0..4 {
        m += b.elements[i] * c(0.5 * v[i], 0.);
    }
    m
}

/// Real 4x4 matrix acting on augmented Bloch vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superoperator(Matrix4<f64>);

impl Superoperator {
    pub fn from_matrix(m: Matrix4<f64>) -> Self {
        Self(m)
    }

    pub fn zero() -> Self {
        Self(Matrix4::zeros())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn complex(&self) -> CMat4 {
        self.0.map(|x| c(x, 0.))
    }

    pub fn apply(&self, v: &Vector4<f64>) -> Vector4<f64> {
        self.0 * v
    }

    fn from_action(f: impl Fn(&Mat2) -> Mat2) -> Self {
        let mut m = Matrix4::zeros();
        for j in 0..4 {
            let mut e = Vector4::zeros();
            e[j] = 1.0;
            let out = raw_components(&f(&components_to_matrix(&e)));
            m.set_column(j, &out);
        }
        Self(m)
    }
}

/// Matrix of `v -> -i[H, rho(v)]`.
pub fn commutator_superop(h: &Mat2) -> Result<Superoperator> {
    check_hermitian(h, "Hamiltonian")?;
    let h = *h;
    Ok(Superoperator::from_action(|x| (h * x - x * h) * c(0., -1.)))
}

/// Matrix of `v -> {H, rho(v)}`.
pub fn anticommutator_superop(h: &Mat2) -> Result<Superoperator> {
    check_hermitian(h, "Hamiltonian")?;
    let h = *h;
    Ok(Superoperator::from_action(|x| h * x + x * h))
}

/// `L0 = P^{-1} diag(x_1..x_4) P`, with the rows of `P` left eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperopEigendecomposition {
    eigenvalues: [C64; 4],
    p: CMat4,
    p_inv: CMat4,
}

impl SuperopEigendecomposition {
    /// Accepts an explicit factorization after checking it reconstructs
    /// `target` to within 1e-12 relative error.
    pub fn from_parts(
        eigenvalues: [C64; 4],
        p: CMat4,
        p_inv: CMat4,
        target: &Superoperator,
    ) -> Result<Self> {
        let eig = Self {
            eigenvalues,
            p,
            p_inv,
        };
        let err = eig.reconstruction_error(target);
        if !(err <= RECONSTRUCTION_TOL) {
            return Err(Error::invalid(format!(
                "eigendecomposition does not reconstruct L0 (relative error {err:.3e})"
            )));
        }
        Ok(eig)
    }

    /// Decomposes the commutator superoperator of an arbitrary Hermitian
    /// `H = h0 I + b.sigma`. `L0` rotates `(v1, v2, v3)` about `b` at angular
    /// rate `2|b|`, so the eigenvalues are `{0, 0, +2i|b|, -2i|b|}`.
    pub fn from_hamiltonian(h: &Mat2) -> Result<Self> {
        let l0 = commutator_superop(h)?;
        let b = Vector3::new(
            0.5 * (h * sigma_x()).trace().re,
            0.5 * (h * sigma_y()).trace().re,
            0.5 * (h * sigma_z()).trace().re,
        );
        let len = b.norm();
        if len == 0.0 {
            return Self::from_parts(
                [C64::default(); 4],
                CMat4::identity(),
                CMat4::identity(),
                &l0,
            );
        }
        let (p, p_inv) = rotation_eigenbasis(&(b / len));
        let w = 2.0 * len;
        Self::from_parts([c(0., 0.), c(0., 0.), c(0., w), c(0., -w)], p, p_inv, &l0)
    }

    pub fn eigenvalues(&self) -> &[C64; 4] {
        &self.eigenvalues
    }

    pub fn p(&self) -> &CMat4 {
        &self.p
    }

    pub fn p_inv(&self) -> &CMat4 {
        &self.p_inv
    }

    pub fn reconstruct(&self) -> CMat4 {
        self.p_inv * CMat4::from_diagonal(&CVec4::from(self.eigenvalues)) * self.p
    }

    pub fn reconstruction_error(&self, target: &Superoperator) -> f64 {
        let diff = (self.reconstruct() - target.complex()).norm();
        let scale = target.matrix().norm();
        if scale > 0.0 {
            diff / scale
        } else {
            diff
        }
    }

    /// `exp(tau L0)`, real because `L0` is.
    pub fn propagator(&self, tau: f64) -> Matrix4<f64> {
        let d = CVec4::from(self.eigenvalues.map(|x| (x * tau).exp()));
        (self.p_inv * CMat4::from_diagonal(&d) * self.p).map(|z| z.re)
    }
}

/// Rows: `e0`, `n`, `e1 + i e2`, `e1 - i e2` with `e1 = y x n` (or `x x n`
/// when `n` is along `y`) and `e2 = n x e1`. Columns of the inverse:
/// `e0`, `n`, `(e1 - i e2)/2`, `(e1 + i e2)/2`.
pub(crate) fn rotation_eigenbasis(n: &Vector3<f64>) -> (CMat4, CMat4) {
    let y = Vector3::y();
    let mut e1 = y.cross(n);
    if e1.norm() < 1e-8 {
        e1 = Vector3::x().cross(n);
    }
    let e1 = e1.normalize();
    let e2 = n.cross(&e1);

    let mut p = CMat4::zeros();
    let mut p_inv = CMat4::zeros();
    p[(0, 0)] = c(1., 0.);
    p_inv[(0, 0)] = c(1., 0.);
    for k in 0..3 {
        p[(1, k + 1)] = c(n[k], 0.);
        p[(2, k + 1)] = c(e1[k], e2[k]);
        p[(3, k + 1)] = c(e1[k], -e2[k]);
        p_inv[(k + 1, 1)] = c(n[k], 0.);
        p_inv[(k + 1, 2)] = c(0.5 * e1[k], -0.5 * e2[k]);
        p_inv[(k + 1, 3)] = c(0.5 * e1[k], 0.5 * e2[k]);
    }
    (p, p_inv)
}

/// `f(sI - L0) = P^{-1} diag(f(s - x_i)) P`.
///
/// A pole of `f` at some `s - x_i` is reported with the offending eigenvalue.
pub fn matrix_s_function<F>(f: F, eig: &SuperopEigendecomposition, s: C64) -> Result<CMat4>
where
    F: Fn(C64) -> Result<C64>,
{
    let mut d = CVec4::zeros();
    for (i, &x) in eig.eigenvalues.iter().enumerate() {
        d[i] = f(s - x).map_err(|e| match e {
            Error::Singular { .. } => Error::Singular {
                s,
                eigenvalue: Some(x),
            },
            other => other,
        })?;
    }
    Ok(eig.p_inv * CMat4::from_diagonal(&d) * eig.p)
}
