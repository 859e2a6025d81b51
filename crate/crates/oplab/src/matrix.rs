//! Hermitian matrix calculus at desk scale: complex Jacobi
//! eigendecomposition, functional calculus, Loewner-order comparison,
//! Kronecker/symmetrized-tensor/Hadamard products and seeded random
//! generators.
//!
//! Everything is dense and dimension-capped: user-facing operators live in
//! dimension at most [`MAX_FIELD_DIM`], tensor products in at most
//! [`MAX_TENSOR_DIM`]. All operations are pure functions of immutable
//! inputs.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{OplabError, Result};
use crate::scalar::ScalarExpr;

/// Largest dimension accepted for user-supplied operators and field samples.
pub const MAX_FIELD_DIM: usize = 8;
/// Largest dimension handled anywhere (tensor products of field operators).
pub const MAX_TENSOR_DIM: usize = MAX_FIELD_DIM * MAX_FIELD_DIM;

/// Hermitian-symmetry tolerance applied on construction (relative).
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Relative PSD tolerance: eigenvalues above `-PSD_TOL * (1 + |A|)` count as nonnegative.
pub const PSD_TOL: f64 = 1e-10;

const EIG_OFF_TOL: f64 = 1e-13;
const EIG_MAX_SWEEPS: usize = 100;

// ---------------------------------------------------------------------------
// Dense complex square matrices
// ---------------------------------------------------------------------------

/// Dense square complex matrix, row-major. Used for eigenvector bases and
/// intermediate products; no structural invariant is enforced.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

// ---------------------------------------------------------------------------
// Hermitian matrices
// ---------------------------------------------------------------------------

/// A validated finite-dimensional self-adjoint operator.
///
/// Construction symmetrizes via `(M + M*)/2` once the asymmetry is within
/// [`HERMITIAN_TOL`] (relative to the largest entry) and rejects the input
/// otherwise, so every value of this type is exactly Hermitian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct HermitianMatrix {
    mat: ComplexMatrix,
}

impl HermitianMatrix {
    /// Validate and symmetrize an arbitrary complex square matrix.
    pub fn from_complex(m: ComplexMatrix) -> Result<Self> {
        let d = m.dim();
        if d == 0 {
            return Err(OplabError::InvalidDimension {
                dim: 0,
                reason: "dimension must be at least 1".into(),
            });
        }
        if d > MAX_TENSOR_DIM {
            return Err(OplabError::InvalidDimension {
                dim: d,
                reason: format!("dimension exceeds the cap {MAX_TENSOR_DIM}"),
            });
        }
        if !m.is_finite() {
            return Err(OplabError::InvalidInput(
                "matrix entries must be finite".into(),
            ));
        }
        let scale = 1.0 + m.max_abs();
        let mut asym: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                asym = asym.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        let tol = HERMITIAN_TOL * scale;
        if asym > tol {
            return Err(OplabError::NotHermitian {
                asymmetry: asym,
                tol,
            });
        }
        let sym = ComplexMatrix::from_fn(d, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
        Ok(HermitianMatrix { mat: sym })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(OplabError::InvalidInput("matrix must be square".into()));
        }
        Self::from_complex(ComplexMatrix::from_fn(d, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(OplabError::InvalidInput("matrix must be square".into()));
        }
        Self::from_complex(ComplexMatrix::from_fn(d, |i, j| {
            Complex64::new(rows[i][j], 0.0)
        }))
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let d = entries.len();
        assert!(d >= 1 && d <= MAX_TENSOR_DIM, "diagonal dimension out of range");
        let mut m = ComplexMatrix::zeros(d);
        for i in 0..d {
            m[(i, i)] = Complex64::new(entries[i], 0.0);
        }
        HermitianMatrix { mat: m }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn scaled_identity(dim: usize, s: f64) -> Self {
        Self::diagonal(&vec![s; dim])
    }

    pub fn zero(dim: usize) -> Self {
        Self::diagonal(&vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        self.mat.clone()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.max_abs()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        HermitianMatrix {
            mat: self.mat.scale(Complex64::new(s, 0.0)),
        }
    }

    /// `(M + M*)/2` of an arbitrary complex matrix; always Hermitian.
    pub fn hermitian_part(m: &ComplexMatrix) -> HermitianMatrix {
        let d = m.dim();
        HermitianMatrix {
            mat: ComplexMatrix::from_fn(d, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5),
        }
    }

    /// Eigendecomposition by cyclic complex Jacobi rotations.
    ///
    /// Converges when the off-diagonal Frobenius norm drops below
    /// `1e-13 * |A|_F`, with a hard cap of 100 sweeps. Eigenvalues come back
    /// sorted ascending; the unitary's columns are the matching eigenvectors.
    pub fn eig(&self) -> Result<SpectralDecomposition> {
        let d = self.dim();
        let mut a = self.mat.data.clone();
        let mut u = ComplexMatrix::identity(d).data;
        let scale = self.mat.frobenius_norm();
        if scale == 0.0 {
            return Ok(SpectralDecomposition {
                eigenvalues: vec![0.0; d],
                eigenvectors: ComplexMatrix::identity(d),
            });
        }
        let threshold = EIG_OFF_TOL * scale;
        let mut sweeps = 0;
        loop {
            let off = off_diagonal_norm(&a, d);
            if off <= threshold {
                break;
            }
            if sweeps == EIG_MAX_SWEEPS {
                return Err(OplabError::EigNonConvergence {
                    sweeps,
                    off_norm: off,
                });
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    jacobi_rotate(&mut a, &mut u, d, p, q);
                }
            }
            sweeps += 1;
        }

        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&i, &j| a[i * d + i].re.total_cmp(&a[j * d + j].re));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * d + i].re).collect();
        let evm = ComplexMatrix {
            dim: d,
            data: u,
        };
        let eigenvectors = ComplexMatrix::from_fn(d, |i, j| evm[(i, order[j])]);
        Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Largest eigenvalue magnitude, `max |lambda_i|`.
    pub fn operator_norm(&self) -> f64 {
        match self.eig() {
            Ok(s) => s
                .eigenvalues
                .iter()
                .fold(0.0f64, |m, &l| m.max(l.abs())),
            // Unreachable for Hermitian input in practice; the Frobenius norm
            // is a valid upper bound fallback.
            Err(_) => self.frobenius_norm(),
        }
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.eigenvalues[0])
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eig()?.eigenvalues.last().expect("dim >= 1"))
    }

    /// True when the spectrum is nonnegative within the relative [`PSD_TOL`].
    pub fn is_psd(&self) -> Result<bool> {
        let min = self.min_eigenvalue()?;
        Ok(min >= -PSD_TOL * (1.0 + self.max_abs()))
    }

    pub fn ensure_psd(&self) -> Result<()> {
        let min = self.min_eigenvalue()?;
        if min < -PSD_TOL * (1.0 + self.max_abs()) {
            return Err(OplabError::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
        Ok(())
    }

    /// Functional calculus: `U diag(f(lambda_i)) U*`.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
        let s = self.eig()?;
        Ok(s.apply(f))
    }

    /// Functional calculus through a symbolic function, rejecting
    /// eigenvalues outside the function's domain.
    ///
    /// The identity function is applied exactly (no decomposition), so
    /// algebraic reductions between verifier cases hold bit for bit.
    pub fn apply_expr(&self, f: &ScalarExpr) -> Result<HermitianMatrix> {
        if matches!(f, ScalarExpr::Identity) {
            return Ok(self.clone());
        }
        let s = self.eig()?;
        let mut vals = Vec::with_capacity(s.eigenvalues.len());
        for &l in &s.eigenvalues {
            vals.push(f.eval(l)?);
        }
        Ok(s.recompose(&vals))
    }

    /// PSD square root; eigenvalues within the PSD tolerance are clamped to
    /// zero, genuinely negative spectra are rejected.
    pub fn psd_sqrt(&self) -> Result<HermitianMatrix> {
        let s = self.eig()?;
        let min = s.eigenvalues[0];
        if min < -PSD_TOL * (1.0 + self.max_abs()) {
            return Err(OplabError::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
        Ok(s.apply(|l| l.max(0.0).sqrt()))
    }

    /// `O * inner * O` for a Hermitian sandwich operator `O` (e.g. `W^{1/2}`).
    pub fn sandwich(&self, inner: &HermitianMatrix) -> Result<HermitianMatrix> {
        if self.dim() != inner.dim() {
            return Err(OplabError::DimensionMismatch {
                left: self.dim(),
                right: inner.dim(),
            });
        }
        let prod = self.mat.mul(&inner.mat).mul(&self.mat);
        Ok(HermitianMatrix::hermitian_part(&prod))
    }

    pub fn checked_add(&self, rhs: &HermitianMatrix) -> Result<HermitianMatrix> {
        if self.dim() != rhs.dim() {
            return Err(OplabError::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        Ok(self + rhs)
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim(), rhs.dim(), "hermitian sum dimension mismatch");
        HermitianMatrix {
            mat: self.mat.add(&rhs.mat),
        }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim(), rhs.dim(), "hermitian difference dimension mismatch");
        HermitianMatrix {
            mat: self.mat.add(&rhs.mat.scale(Complex64::new(-1.0, 0.0))),
        }
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, s: f64) -> HermitianMatrix {
        self.scale(s)
    }
}

// ---------------------------------------------------------------------------
// Spectral decomposition
// ---------------------------------------------------------------------------

/// Result of [`HermitianMatrix::eig`]: ascending eigenvalues plus the
/// unitary whose columns are the matching eigenvectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// `U diag(values) U*` for arbitrary replacement diagonal values.
    pub fn recompose(&self, values: &[f64]) -> HermitianMatrix {
        let d = self.eigenvectors.dim();
        assert_eq!(values.len(), d);
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for j in 0..d {
            for i in 0..d {
                scaled[(i, j)] = u[(i, j)] * values[j];
            }
        }
        let m = scaled.mul(&u.adjoint());
        HermitianMatrix::hermitian_part(&m)
    }

    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.recompose(&vals)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.recompose(&self.eigenvalues)
    }
}

fn off_diagonal_norm(a: &[Complex64], d: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[i * d + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation zeroing the (p, q) entry: `A <- V* A V`,
/// `U <- U V` with `V` unitary on the (p, q) plane.
fn jacobi_rotate(a: &mut [Complex64], u: &mut [Complex64], d: usize, p: usize, q: usize) {
    let apq = a[p * d + q];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let phase = apq / b; // e^{i phi}
    let pc = phase.conj();
    let alpha = a[p * d + p].re;
    let gamma = a[q * d + q].re;
    let tau = (gamma - alpha) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // A <- A V (columns p, q)
    for k in 0..d {
        let akp = a[k * d + p];
        let akq = a[k * d + q];
        a[k * d + p] = akp * c - akq * pc * s;
        a[k * d + q] = akp * s + akq * pc * c;
    }
    // A <- V* A (rows p, q)
    for k in 0..d {
        let apk = a[p * d + k];
        let aqk = a[q * d + k];
        a[p * d + k] = apk * c - aqk * phase * s;
        a[q * d + k] = apk * s + aqk * phase * c;
    }
    // The transformed 2x2 block has a closed form; writing it directly keeps
    // the pivot entry exactly zero and the diagonal exactly real.
    let app = c * c * alpha - 2.0 * s * c * b + s * s * gamma;
    let aqq = s * s * alpha + 2.0 * s * c * b + c * c * gamma;
    a[p * d + p] = Complex64::new(app, 0.0);
    a[q * d + q] = Complex64::new(aqq, 0.0);
    a[p * d + q] = Complex64::new(0.0, 0.0);
    a[q * d + p] = Complex64::new(0.0, 0.0);
    for k in 0..d {
        if k != p && k != q {
            a[k * d + p] = a[p * d + k].conj();
            a[k * d + q] = a[q * d + k].conj();
        }
    }

    // U <- U V
    for k in 0..d {
        let ukp = u[k * d + p];
        let ukq = u[k * d + q];
        u[k * d + p] = ukp * c - ukq * pc * s;
        u[k * d + q] = ukp * s + ukq * pc * c;
    }
}

// ---------------------------------------------------------------------------
// Binary operations
// ---------------------------------------------------------------------------

/// `lambda_min(R - L)`; nonnegative exactly when `L <= R` in Loewner order.
pub fn loewner_margin(l: &HermitianMatrix, r: &HermitianMatrix) -> Result<f64> {
    if l.dim() != r.dim() {
        return Err(OplabError::DimensionMismatch {
            left: l.dim(),
            right: r.dim(),
        });
    }
    (r - l).min_eigenvalue()
}

/// Default relative tolerance under which a Loewner comparison "holds":
/// margin `>= -LOEWNER_REL_TOL * (1 + |R|)`.
pub const LOEWNER_REL_TOL: f64 = 1e-8;

/// Kronecker product. Row-major convention: entry `((i*dB + k), (j*dB + l))`
/// equals `A[i][j] * B[k][l]`.
pub fn kron(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let d = da * db;
    if d > MAX_TENSOR_DIM {
        return Err(OplabError::InvalidDimension {
            dim: d,
            reason: format!("tensor dimension exceeds the cap {MAX_TENSOR_DIM}"),
        });
    }
    let m = ComplexMatrix::from_fn(d, |r, c| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (c / db, c % db);
        a.entry(i, j) * b.entry(k, l)
    });
    // The Kronecker product of Hermitian matrices is exactly Hermitian.
    Ok(HermitianMatrix { mat: m })
}

/// Symmetrized tensor product `(A (x) B + B (x) A) / 2`; requires equal
/// dimensions and is exactly symmetric in its arguments.
pub fn sym_tensor(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.dim() != b.dim() {
        return Err(OplabError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let ab = kron(a, b)?;
    let ba = kron(b, a)?;
    Ok((&ab + &ba).scale(0.5))
}

/// `A (x) A`.
pub fn tensor_power2(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    kron(a, a)
}

/// Entrywise (Hadamard) product; Hermitian for Hermitian arguments.
pub fn hadamard(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.dim() != b.dim() {
        return Err(OplabError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let d = a.dim();
    let m = ComplexMatrix::from_fn(d, |i, j| a.entry(i, j) * b.entry(i, j));
    Ok(HermitianMatrix { mat: m })
}

// ---------------------------------------------------------------------------
// Spectrum window
// ---------------------------------------------------------------------------

/// A strictly positive interval `[a, b]` confining spectra.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WindowJson", into = "WindowJson")]
pub struct SpectrumWindow {
    a: f64,
    b: f64,
}

impl SpectrumWindow {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a <= 0.0 || b < a {
            return Err(OplabError::InvalidInput(format!(
                "spectrum window requires 0 < a <= b, got [{a}, {b}]"
            )));
        }
        Ok(SpectrumWindow { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.a - tol && x <= self.b + tol
    }

    /// `(a^2 + b^2) / (2ab)`, the tensor-product Kantorovich constant.
    pub fn tensor_constant(&self) -> f64 {
        (self.a * self.a + self.b * self.b) / (2.0 * self.a * self.b)
    }

    /// `(a + b)^2 / (4ab)`, the classical scalar Kantorovich constant.
    pub fn classical_constant(&self) -> f64 {
        let s = self.a + self.b;
        s * s / (4.0 * self.a * self.b)
    }

    /// `(a^2 + b^2) / (ab)`, the bound for `A (x) B^{-1} + A^{-1} (x) B`.
    pub fn pair_bound(&self) -> f64 {
        (self.a * self.a + self.b * self.b) / (self.a * self.b)
    }
}

#[derive(Serialize, Deserialize)]
struct WindowJson {
    a: f64,
    b: f64,
}

impl TryFrom<WindowJson> for SpectrumWindow {
    type Error = OplabError;
    fn try_from(w: WindowJson) -> Result<Self> {
        SpectrumWindow::new(w.a, w.b)
    }
}

impl From<SpectrumWindow> for WindowJson {
    fn from(w: SpectrumWindow) -> Self {
        WindowJson { a: w.a, b: w.b }
    }
}

// ---------------------------------------------------------------------------
// Seeded random generators
// ---------------------------------------------------------------------------

fn ginibre(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(dim, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal) * inv_sqrt2,
            rng.sample::<f64, _>(StandardNormal) * inv_sqrt2,
        )
    })
}

/// Haar-like random unitary: modified Gram-Schmidt QR of a complex Ginibre
/// matrix, which fixes the R diagonal real positive.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut q = ginibre(dim, rng);
    for j in 0..dim {
        for i in 0..j {
            let mut r = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                r += q[(k, i)].conj() * q[(k, j)];
            }
            for k in 0..dim {
                let qki = q[(k, i)];
                q[(k, j)] -= r * qki;
            }
        }
        let mut norm = 0.0;
        for k in 0..dim {
            norm += q[(k, j)].norm_sqr();
        }
        let mut norm = norm.sqrt();
        if norm < 1e-12 {
            // Essentially impossible for Gaussian input; fall back to the
            // standard basis vector orthogonalized against earlier columns.
            for k in 0..dim {
                q[(k, j)] = Complex64::new(if k == j { 1.0 } else { 0.0 }, 0.0);
            }
            for i in 0..j {
                let mut r = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    r += q[(k, i)].conj() * q[(k, j)];
                }
                for k in 0..dim {
                    let qki = q[(k, i)];
                    q[(k, j)] -= r * qki;
                }
            }
            norm = (0..dim).map(|k| q[(k, j)].norm_sqr()).sum::<f64>().sqrt();
        }
        for k in 0..dim {
            q[(k, j)] /= norm;
        }
    }
    q
}

fn check_field_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_FIELD_DIM {
        return Err(OplabError::InvalidDimension {
            dim: d,
            reason: format!("field operators must have 1 <= dim <= {MAX_FIELD_DIM}"),
        });
    }
    Ok(())
}

/// Random Hermitian matrix with spectrum inside the window: a Haar-like
/// unitary conjugating a uniform random diagonal. Deterministic per seed.
pub fn random_hermitian_in_window(
    d: usize,
    window: &SpectrumWindow,
    seed: u64,
) -> Result<HermitianMatrix> {
    check_field_dim(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let evals: Vec<f64> = (0..d)
        .map(|_| rng.gen_range(window.a()..=window.b()))
        .collect();
    let u = random_unitary(d, &mut rng);
    conjugate_diagonal(&u, &evals)
}

/// Random PSD matrix `G* G` rescaled to unit operator norm.
pub fn random_psd(d: usize, seed: u64) -> Result<HermitianMatrix> {
    check_field_dim(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(d, &mut rng);
    let m = HermitianMatrix::hermitian_part(&g.adjoint().mul(&g));
    let norm = m.operator_norm();
    if norm <= 0.0 {
        return Err(OplabError::InvalidInput(
            "degenerate Gaussian sample (zero norm)".into(),
        ));
    }
    Ok(m.scale(1.0 / norm))
}

/// Random Hermitian (not necessarily positive) with operator norm at most
/// `radius`, for perturbation-style constructions.
pub fn random_hermitian_ball(d: usize, radius: f64, rng: &mut impl Rng) -> HermitianMatrix {
    let g = ginibre(d, rng);
    let h = HermitianMatrix::hermitian_part(&g);
    let norm = h.operator_norm();
    if norm == 0.0 {
        return HermitianMatrix::zero(d);
    }
    h.scale(radius / norm)
}

fn conjugate_diagonal(u: &ComplexMatrix, evals: &[f64]) -> Result<HermitianMatrix> {
    let d = u.dim();
    let mut scaled = u.clone();
    for j in 0..d {
        for i in 0..d {
            scaled[(i, j)] = u[(i, j)] * evals[j];
        }
    }
    Ok(HermitianMatrix::hermitian_part(&scaled.mul(&u.adjoint())))
}

// ---------------------------------------------------------------------------
// JSON exchange format
// ---------------------------------------------------------------------------

/// Matrix exchange schema: `{"dim": d, "re": [[...]], "im": [[...]]}`,
/// row-major.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<MatrixJson> for HermitianMatrix {
    type Error = OplabError;
    fn try_from(j: MatrixJson) -> Result<Self> {
        let d = j.dim;
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == d && m.iter().all(|r| r.len() == d);
        if !shape_ok(&j.re) || !shape_ok(&j.im) {
            return Err(OplabError::InvalidInput(format!(
                "matrix json: re/im must both be {d} x {d}"
            )));
        }
        HermitianMatrix::from_complex(ComplexMatrix::from_fn(d, |i, jx| {
            Complex64::new(j.re[i][jx], j.im[i][jx])
        }))
    }
}

impl From<HermitianMatrix> for MatrixJson {
    fn from(m: HermitianMatrix) -> Self {
        let d = m.dim();
        MatrixJson {
            dim: d,
            re: (0..d)
                .map(|i| (0..d).map(|j| m.entry(i, j).re).collect())
                .collect(),
            im: (0..d)
                .map(|i| (0..d).map(|j| m.entry(i, j).im).collect())
                .collect(),
        }
    }
}
