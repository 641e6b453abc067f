//! Floating-point geometry of `ℍ × ℍ_g`: augmented periods, transporter
//! matrices, the negative `2g`-plane `φ(τ, τ′)` spanned by `r_j, s_j`, and
//! the pairing identities linking it to the period condition.
//!
//! Conventions. `M = [[w, x], [y, z]]` sends `i` to `τ = (w·i + x)/(y·i + z)`.
//! `M′ = [[W, X], [Y, Z]]` sends `i·Id` to `τ′ = (i·W + X)(i·Y + Z)^{-1}`,
//! with `W, X` acting on the `e′` block. Tensor coordinates follow
//! [`crate::lattice::tensor_labels`].

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isogeny::IsogenyMatrix;
use crate::linalg::{
    cholesky, cmatmul, eigenvalues, inverse, matmul, max_abs_diff, span_residual, transpose,
    zeros, CMat, RMat,
};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            abs: T::lit(1e-9),
            rel: T::lit(1e-8),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SiegelPair<T: Real> {
    tau: Complex<T>,
    tau_prime: CMat<T>,
}

impl<T: Real> SiegelPair<T> {
    pub fn new(tau: Complex<T>, tau_prime: CMat<T>, tol: T) -> Result<Self> {
        if tau.im <= T::zero() {
            return Err(Error::NotInUpperHalfSpace(format!("Im τ = {}", tau.im)));
        }
        let g = tau_prime.len();
        if g == 0 || tau_prime.iter().any(|r| r.len() != g) {
            return Err(Error::Shape("τ′ must be a nonempty square matrix".into()));
        }
        for i in 0..g {
            for j in 0..i {
                if (tau_prime[i][j] - tau_prime[j][i]).norm() > tol {
                    return Err(Error::NotInUpperHalfSpace(format!("τ′ not symmetric at ({i},{j})")));
                }
            }
        }
        let im: RMat<T> = tau_prime.iter().map(|r| r.iter().map(|z| z.im).collect()).collect();
        cholesky(&im).map_err(|_| Error::NotInUpperHalfSpace("Im τ′ not positive definite".into()))?;
        Ok(Self { tau, tau_prime })
    }

    pub fn tau(&self) -> Complex<T> {
        self.tau
    }

    pub fn tau_prime(&self) -> &CMat<T> {
        &self.tau_prime
    }

    pub fn genus(&self) -> usize {
        self.tau_prime.len()
    }

    /// `(i, i·Id)`.
    pub fn base_point(g: usize) -> Self {
        let mut tp = vec![vec![Complex::new(T::zero(), T::zero()); g]; g];
        for (i, row) in tp.iter_mut().enumerate() {
            row[i] = Complex::new(T::zero(), T::one());
        }
        Self {
            tau: Complex::new(T::zero(), T::one()),
            tau_prime: tp,
        }
    }

    pub fn real_part(&self) -> RMat<T> {
        self.tau_prime.iter().map(|r| r.iter().map(|z| z.re).collect()).collect()
    }

    pub fn imag_part(&self) -> RMat<T> {
        self.tau_prime.iter().map(|r| r.iter().map(|z| z.im).collect()).collect()
    }

    /// Random pair with `Re` entries in `[−1, 1]` and `Im τ′ = AAᵀ + Id/2`.
    pub fn random<R: Rng>(g: usize, rng: &mut R) -> Self {
        let u = |rng: &mut R| T::lit(rng.gen_range(-1.0..1.0));
        let tau = Complex::new(u(rng), T::lit(rng.gen_range(0.5..2.0)));
        let a: RMat<T> = (0..g).map(|_| (0..g).map(|_| u(rng)).collect()).collect();
        let mut y = matmul(&a, &transpose(&a));
        for (i, row) in y.iter_mut().enumerate() {
            row[i] += T::lit(0.5);
        }
        let mut tp = vec![vec![Complex::new(T::zero(), T::zero()); g]; g];
        for i in 0..g {
            for j in 0..=i {
                let x = u(rng);
                tp[i][j] = Complex::new(x, y[i][j]);
                tp[j][i] = tp[i][j];
            }
        }
        Self { tau, tau_prime: tp }
    }
}

/// The stacked matrix `(τ; 1)` or `(τ′; Id)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedPeriod<T: Real> {
    pub matrix: CMat<T>,
}

impl<T: Real> AugmentedPeriod<T> {
    pub fn of_tau(tau: Complex<T>) -> Self {
        Self {
            matrix: vec![vec![tau], vec![Complex::new(T::one(), T::zero())]],
        }
    }

    pub fn of_tau_prime(tp: &CMat<T>) -> Self {
        let g = tp.len();
        let mut m = tp.clone();
        for i in 0..g {
            let mut row = vec![Complex::new(T::zero(), T::zero()); g];
            row[i] = Complex::new(T::one(), T::zero());
            m.push(row);
        }
        Self { matrix: m }
    }

    pub fn bottom_is_identity(&self) -> bool {
        let cols = self.matrix[0].len();
        let top = self.matrix.len() - cols;
        (0..cols).all(|i| {
            (0..cols).all(|j| {
                self.matrix[top + i][j]
                    == if i == j {
                        Complex::new(T::one(), T::zero())
                    } else {
                        Complex::new(T::zero(), T::zero())
                    }
            })
        })
    }
}

fn to_cmat<T: Real>(b: &IsogenyMatrix) -> CMat<T> {
    b.rows()
        .iter()
        .map(|r| r.iter().map(|&x| Complex::new(T::of_i64(x), T::zero())).collect())
        .collect()
}

/// `(Bτ̃)ᵀ·τ̃′ ∈ ℂ^g`.
pub fn period_vector<T: Real>(b: &IsogenyMatrix, pair: &SiegelPair<T>) -> Result<Vec<Complex<T>>> {
    if b.genus() != pair.genus() {
        return Err(Error::Shape(format!(
            "B has genus {} but τ′ is {}×{}",
            b.genus(),
            pair.genus(),
            pair.genus()
        )));
    }
    let bt = cmatmul(&to_cmat::<T>(b), &AugmentedPeriod::of_tau(pair.tau).matrix);
    let row = vec![bt.iter().map(|r| r[0]).collect::<Vec<_>>()];
    Ok(cmatmul(&row, &AugmentedPeriod::of_tau_prime(&pair.tau_prime).matrix).remove(0))
}

/// `M = [[√y, x/√y], [0, 1/√y]]`.
pub fn transporter_sl2<T: Real>(tau: Complex<T>) -> Result<[[T; 2]; 2]> {
    if tau.im <= T::zero() {
        return Err(Error::NotInUpperHalfSpace(format!("Im τ = {}", tau.im)));
    }
    let s = tau.im.sqrt();
    Ok([[s, tau.re / s], [T::zero(), T::one() / s]])
}

/// `(w·i + x)/(y·i + z)`.
pub fn mobius<T: Real>(m: &[[T; 2]; 2]) -> Complex<T> {
    let i = Complex::new(T::zero(), T::one());
    (i * m[0][0] + m[0][1]) / (i * m[1][0] + m[1][1])
}

/// `M′ = [[S, X·S^{-1}], [0, S^{-1}]]` with `S` the symmetric square root
/// of `Im τ′`.
pub fn transporter_sp<T: Real>(tp: &CMat<T>) -> Result<RMat<T>> {
    let g = tp.len();
    let y: RMat<T> = tp.iter().map(|r| r.iter().map(|z| z.im).collect()).collect();
    let x: RMat<T> = tp.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
    let s = crate::linalg::sym_sqrt(&y)?;
    let si = inverse(&s)?;
    Ok(assemble(g, &s, &matmul(&x, &si), &zeros(g, g), &si))
}

/// Second upper-triangular representative `[[A, X·A^{-T}], [0, A^{-T}]]`
/// from the Cholesky factor `A·Aᵀ = Im τ′`.
pub fn transporter_sp_cholesky<T: Real>(tp: &CMat<T>) -> Result<RMat<T>> {
    let g = tp.len();
    let y: RMat<T> = tp.iter().map(|r| r.iter().map(|z| z.im).collect()).collect();
    let x: RMat<T> = tp.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
    let a = cholesky(&y)?;
    let ait = transpose(&inverse(&a)?);
    Ok(assemble(g, &a, &matmul(&x, &ait), &zeros(g, g), &ait))
}

fn assemble<T: Real>(g: usize, w: &RMat<T>, x: &RMat<T>, y: &RMat<T>, z: &RMat<T>) -> RMat<T> {
    let mut m = zeros(2 * g, 2 * g);
    for i in 0..g {
        for j in 0..g {
            m[i][j] = w[i][j];
            m[i][g + j] = x[i][j];
            m[g + i][j] = y[i][j];
            m[g + i][g + j] = z[i][j];
        }
    }
    m
}

/// Blocks `(W, X, Y, Z)` of a `2g × 2g` matrix.
pub fn blocks<T: Real>(m: &RMat<T>) -> (RMat<T>, RMat<T>, RMat<T>, RMat<T>) {
    let g = m.len() / 2;
    let sub = |r0: usize, c0: usize| -> RMat<T> {
        (0..g).map(|i| (0..g).map(|j| m[r0 + i][c0 + j]).collect()).collect()
    };
    (sub(0, 0), sub(0, g), sub(g, 0), sub(g, g))
}

/// `(i·W + X)(i·Y + Z)^{-1}`.
pub fn siegel_action<T: Real>(m: &RMat<T>) -> Result<CMat<T>> {
    let g = m.len() / 2;
    let (w, x, y, z) = blocks(m);
    // Invert the complex matrix iY + Z through its real 2g×2g form.
    let mut real = zeros(2 * g, 2 * g);
    for i in 0..g {
        for j in 0..g {
            real[i][j] = z[i][j];
            real[i][g + j] = -y[i][j];
            real[g + i][j] = y[i][j];
            real[g + i][g + j] = z[i][j];
        }
    }
    let inv = inverse(&real)?;
    let cinv: CMat<T> = (0..g)
        .map(|i| (0..g).map(|j| Complex::new(inv[i][j], inv[g + i][j])).collect())
        .collect();
    let num: CMat<T> = (0..g)
        .map(|i| (0..g).map(|j| Complex::new(x[i][j], w[i][j])).collect())
        .collect();
    Ok(cmatmul(&num, &cinv))
}

/// `MᵀJM − J`, largest entry.
pub fn symplectic_defect<T: Real>(m: &RMat<T>) -> T {
    let n = m.len();
    let g = n / 2;
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..n {
            let v = (0..g).fold(T::zero(), |acc, k| acc + m[k][i] * m[g + k][j] - m[g + k][i] * m[k][j]);
            let want = if i < g && j == i + g {
                T::one()
            } else if j < g && i == j + g {
                -T::one()
            } else {
                T::zero()
            };
            worst = worst.max((v - want).abs());
        }
    }
    worst
}

/// `γ` on `V = L ⊗ ℝ` in tensor coordinates.
pub fn gamma<T: Real>(x: &[T], y: &[T]) -> T {
    let g = x.len() / 4;
    (0..g).fold(T::zero(), |acc, k| {
        acc + x[k] * y[3 * g + k] + x[3 * g + k] * y[k] - x[g + k] * y[2 * g + k] - x[2 * g + k] * y[g + k]
    })
}

pub fn gram<T: Real>(vs: &[Vec<T>]) -> RMat<T> {
    vs.iter().map(|x| vs.iter().map(|y| gamma(x, y)).collect()).collect()
}

/// Integer bases `(N₀, P₀)`: `N₀ = {ee′_i − ff′_i, ef′_i + fe′_i}`,
/// `P₀ = {ee′_i + ff′_i, ef′_i − fe′_i}`.
pub fn n0_p0_bases(g: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut n0 = Vec::new();
    let mut p0 = Vec::new();
    for sgn in [1i64, -1] {
        let target = if sgn == 1 { &mut p0 } else { &mut n0 };
        for i in 0..g {
            let mut v = vec![0; 4 * g];
            v[i] = 1;
            v[3 * g + i] = sgn;
            target.push(v);
        }
        for i in 0..g {
            let mut v = vec![0; 4 * g];
            v[g + i] = 1;
            v[2 * g + i] = -sgn;
            target.push(v);
        }
    }
    (n0, p0)
}

/// A `2g`-plane in `V` with a chosen basis, ordered `r_1 … r_g, s_1 … s_g`.
#[derive(Clone, Debug, PartialEq)]
pub struct NegativePlane<T: Real> {
    pub basis: Vec<Vec<T>>,
}

impl<T: Real> NegativePlane<T> {
    pub fn gram(&self) -> RMat<T> {
        gram(&self.basis)
    }

    /// Largest eigenvalue of the Gram matrix; negative for a negative plane.
    pub fn top_eigenvalue(&self) -> T {
        *eigenvalues(&self.gram()).last().expect("nonempty plane")
    }

    pub fn is_negative_definite(&self, tol: T) -> bool {
        self.top_eigenvalue() < -tol
    }

    pub fn standard(g: usize) -> Self {
        let basis = n0_p0_bases(g)
            .0
            .into_iter()
            .map(|v| v.into_iter().map(T::of_i64).collect())
            .collect();
        Self { basis }
    }

    /// Relative Euclidean residual of `other` against this plane's span.
    pub fn span_residual(&self, other: &Self) -> T {
        span_residual(&self.basis, &other.basis).max(span_residual(&other.basis, &self.basis))
    }
}

/// `r_j, s_j` written out from the entries of `M` and `M′`.
pub fn plane_from_transporters<T: Real>(m: &[[T; 2]; 2], mp: &RMat<T>) -> NegativePlane<T> {
    let g = mp.len() / 2;
    let (w, x, y, z) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let (bw, bx, by, bz) = blocks(mp);
    let mut basis = Vec::with_capacity(2 * g);
    for j in 0..g {
        let mut r = vec![T::zero(); 4 * g];
        for k in 0..g {
            r[k] = w * bw[k][j] - x * bx[k][j];
            r[g + k] = w * by[k][j] - x * bz[k][j];
            r[2 * g + k] = y * bw[k][j] - z * bx[k][j];
            r[3 * g + k] = y * by[k][j] - z * bz[k][j];
        }
        basis.push(r);
    }
    for j in 0..g {
        let mut s = vec![T::zero(); 4 * g];
        for k in 0..g {
            s[k] = w * bx[k][j] + x * bw[k][j];
            s[g + k] = w * bz[k][j] + x * by[k][j];
            s[2 * g + k] = y * bx[k][j] + z * bw[k][j];
            s[3 * g + k] = y * bz[k][j] + z * by[k][j];
        }
        basis.push(s);
    }
    NegativePlane { basis }
}

/// `φ(τ, τ′)` with basis `{r_j, s_j}`.
pub fn phi_plane<T: Real>(pair: &SiegelPair<T>) -> Result<NegativePlane<T>> {
    let m = transporter_sl2(pair.tau)?;
    let mp = transporter_sp(&pair.tau_prime)?;
    Ok(plane_from_transporters(&m, &mp))
}

/// Kronecker product `M ⊗ M′` in the tensor basis ordering.
pub fn kron<T: Real>(m: &[[T; 2]; 2], mp: &RMat<T>) -> RMat<T> {
    let n = mp.len();
    let mut out = zeros(2 * n, 2 * n);
    for a in 0..2 {
        for b in 0..2 {
            for i in 0..n {
                for j in 0..n {
                    out[a * n + i][b * n + j] = m[a][b] * mp[i][j];
                }
            }
        }
    }
    out
}

/// `(M ⊗ M′)(N₀)` by matrix multiplication, as a second route to the plane.
pub fn phi_plane_via_kron<T: Real>(m: &[[T; 2]; 2], mp: &RMat<T>) -> NegativePlane<T> {
    let g = mp.len() / 2;
    let k = kron(m, mp);
    let basis = NegativePlane::<T>::standard(g)
        .basis
        .iter()
        .map(|v| crate::linalg::matvec(&k, v))
        .collect();
    NegativePlane { basis }
}

/// Random element of the stabiliser of `i·Id` in `Sp_{2g}(ℝ)`: rotations in
/// each `(e′_k, f′_k)` plane followed by `diag(O, O)` with `O` orthogonal.
pub fn random_stabilizer<T: Real, R: Rng>(g: usize, rng: &mut R) -> RMat<T> {
    let mut k = crate::linalg::eye::<T>(2 * g);
    for p in 0..g {
        let t = T::lit(rng.gen_range(0.0..std::f64::consts::TAU));
        let mut r = crate::linalg::eye::<T>(2 * g);
        r[p][p] = t.cos();
        r[p][g + p] = t.sin();
        r[g + p][p] = -t.sin();
        r[g + p][g + p] = t.cos();
        k = matmul(&r, &k);
    }
    for p in 0..g {
        for q in p + 1..g {
            let t = T::lit(rng.gen_range(0.0..std::f64::consts::TAU));
            let mut r = crate::linalg::eye::<T>(2 * g);
            for off in [0, g] {
                r[off + p][off + p] = t.cos();
                r[off + p][off + q] = -t.sin();
                r[off + q][off + p] = t.sin();
                r[off + q][off + q] = t.cos();
            }
            k = matmul(&r, &k);
        }
    }
    k
}

pub fn random_rotation<T: Real, R: Rng>(rng: &mut R) -> [[T; 2]; 2] {
    let t = T::lit(rng.gen_range(0.0..std::f64::consts::TAU));
    [[t.cos(), t.sin()], [-t.sin(), t.cos()]]
}

pub fn mul2<T: Real>(a: &[[T; 2]; 2], b: &[[T; 2]; 2]) -> [[T; 2]; 2] {
    let mut out = [[T::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    /// `β_j` as `(re, im)`.
    pub beta: Vec<(f64, f64)>,
    /// `γ(B_φ, −r_j)`.
    pub pair_r: Vec<f64>,
    /// `γ(B_φ, s_j)`.
    pub pair_s: Vec<f64>,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub period_norm: f64,
    pub max_plane_pairing: f64,
    pub period_vanishes: bool,
    pub orthogonal: bool,
}

impl OrthogonalityReport {
    pub fn verdicts_agree(&self) -> bool {
        self.period_vanishes == self.orthogonal
    }
}

/// Computes `β_j = (y·i + z)·[(Bτ̃)ᵀ τ̃′ (i·Y + Z)]_j` and the pairings
/// `γ(B_φ, −r_j)`, `γ(B_φ, s_j)`, which must equal `Re β_j`, `Im β_j`.
pub fn orthogonality_identities<T: Real>(
    b: &IsogenyMatrix,
    pair: &SiegelPair<T>,
    tol: Tolerance<T>,
) -> Result<OrthogonalityReport> {
    let g = pair.genus();
    let period = period_vector(b, pair)?;
    let m = transporter_sl2(pair.tau)?;
    let mp = transporter_sp(&pair.tau_prime)?;
    let plane = plane_from_transporters(&m, &mp);
    let (_, _, by, bz) = blocks(&mp);
    let factor = Complex::new(m[1][1], m[1][0]);
    let beta: Vec<Complex<T>> = (0..g)
        .map(|j| {
            let s = (0..g).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                acc + period[k] * Complex::new(bz[k][j], by[k][j])
            });
            factor * s
        })
        .collect();
    let v: Vec<T> = b.tensor_vector().coords.into_iter().map(T::of_i64).collect();
    let pair_r: Vec<T> = (0..g).map(|j| -gamma(&v, &plane.basis[j])).collect();
    let pair_s: Vec<T> = (0..g).map(|j| gamma(&v, &plane.basis[g + j])).collect();
    let mut abs_res = T::zero();
    let mut rel_res = T::zero();
    for j in 0..g {
        let d = (pair_r[j] - beta[j].re).abs() + (pair_s[j] - beta[j].im).abs();
        abs_res = abs_res.max(d);
        rel_res = rel_res.max(d / (T::one() + beta[j].norm()));
    }
    let period_norm = period.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    let max_pair = plane.basis.iter().fold(T::zero(), |acc, r| acc.max(gamma(&v, r).abs()));
    let scale = T::one() + T::of_i64(b.height());
    let f = |x: T| x.to_f64_lossy();
    Ok(OrthogonalityReport {
        beta: beta.iter().map(|z| (f(z.re), f(z.im))).collect(),
        pair_r: pair_r.iter().map(|&x| f(x)).collect(),
        pair_s: pair_s.iter().map(|&x| f(x)).collect(),
        max_abs_residual: f(abs_res),
        max_rel_residual: f(rel_res),
        period_norm: f(period_norm),
        max_plane_pairing: f(max_pair),
        period_vanishes: period_norm <= tol.abs * scale,
        orthogonal: max_pair <= tol.abs * scale,
    })
}

/// Numerical checks of the transporters: `det M − 1`, `|M·i − τ|`,
/// symplectic defect of `M′`, `|M′·(i·Id) − τ′|`.
pub fn transporter_defects<T: Real>(pair: &SiegelPair<T>) -> Result<[T; 4]> {
    let m = transporter_sl2(pair.tau)?;
    let mp = transporter_sp(&pair.tau_prime)?;
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0] - T::one();
    let img = siegel_action(&mp)?;
    let diff = img
        .iter()
        .zip(&pair.tau_prime)
        .flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (*x - *y).norm()))
        .fold(T::zero(), T::max);
    Ok([det.abs(), (mobius(&m) - pair.tau).norm(), symplectic_defect(&mp), diff])
}

/// Gram of the mapped `N₀` basis against the Gram of `N₀`.
pub fn isometry_defect<T: Real>(m: &[[T; 2]; 2], mp: &RMat<T>) -> T {
    let g = mp.len() / 2;
    let mapped = phi_plane_via_kron(m, mp);
    max_abs_diff(&mapped.gram(), &NegativePlane::<T>::standard(g).gram())
}

/// `J₂⁻¹` on the first symplectic plane: its period vanishes whenever
/// `τ′₀₀ = τ` and `τ′₀ⱼ = 0` for `j > 0`.
pub fn identity_isogeny(g: usize) -> IsogenyMatrix {
    embed_block(&IsogenyMatrix::from_columns(&[0, 1], &[-1, 0]).expect("2×2"), g)
}

/// Embeds a genus-1 matrix block-diagonally into genus `g`, acting on the
/// first symplectic plane.
pub fn embed_block(b: &IsogenyMatrix, g: usize) -> IsogenyMatrix {
    assert_eq!(b.genus(), 1);
    let mut rows = vec![[0i64; 2]; 2 * g];
    rows[0] = b.rows()[0];
    rows[g] = b.rows()[1];
    IsogenyMatrix::new(g, rows).expect("shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn j2_inv(n: i64) -> IsogenyMatrix {
        IsogenyMatrix::from_columns(&[0, n], &[-1, 0]).unwrap()
    }

    #[test]
    fn identity_isogeny_period_vanishes() {
        let tau = c(0.3, 1.7);
        let pair = SiegelPair::new(tau, vec![vec![tau]], 1e-12).unwrap();
        let p = period_vector(&j2_inv(1), &pair).unwrap();
        assert!(p[0].norm() < 1e-15);
        // multiplication by n: B = n·J₂^{-1} with τ′ = τ
        let n = 3;
        let bn = IsogenyMatrix::from_columns(&[0, n], &[-n, 0]).unwrap();
        assert_eq!(bn.degree(), n * n);
        assert!(period_vector(&bn, &pair).unwrap()[0].norm() < 1e-12);
        // degree-n map τ′ = nτ
        let pair_n = SiegelPair::new(tau, vec![vec![tau * 3.0]], 1e-12).unwrap();
        let b3 = j2_inv(3);
        assert_eq!(b3.degree(), 3);
        assert!(period_vector(&b3, &pair_n).unwrap()[0].norm() < 1e-12);
    }

    #[test]
    fn transporter_examples() {
        let m = transporter_sl2(c(0.0, 1.0)).unwrap();
        assert_eq!(m, [[1.0, 0.0], [0.0, 1.0]]);
        let m = transporter_sl2(c(1.0, 2.0)).unwrap();
        let r2 = 2f64.sqrt();
        assert!((m[0][0] - r2).abs() < 1e-15 && (m[0][1] - 1.0 / r2).abs() < 1e-15);
        assert!((m[1][1] - 1.0 / r2).abs() < 1e-15 && m[1][0] == 0.0);
        assert!((mobius(&m) - c(1.0, 2.0)).norm() < 1e-14);
        let id = SiegelPair::<f64>::base_point(3);
        let mp = transporter_sp(id.tau_prime()).unwrap();
        assert!(max_abs_diff(&mp, &crate::linalg::eye(6)) < 1e-14);
        assert!(transporter_sl2(c(0.0, -1.0)).is_err());
    }

    #[test]
    fn invalid_pairs_rejected() {
        assert!(SiegelPair::new(c(0.0, -1.0), vec![vec![c(0.0, 1.0)]], 1e-9).is_err());
        let bad = vec![vec![c(0.0, 1.0), c(0.0, 2.0)], vec![c(0.0, 2.0), c(0.0, 1.0)]];
        assert!(SiegelPair::new(c(0.0, 1.0), bad, 1e-9).is_err());
        let asym = vec![vec![c(0.0, 1.0), c(0.1, 0.0)], vec![c(0.2, 0.0), c(0.0, 1.0)]];
        assert!(SiegelPair::new(c(0.0, 1.0), asym, 1e-9).is_err());
    }

    #[test]
    fn bases_exact_grams() {
        let (n0, p0) = n0_p0_bases(1);
        let l = crate::lattice::tensor_symplectic(1);
        assert_eq!(l.pair_int(&p0[0], &p0[0]), 2.into());
        assert_eq!(l.pair_int(&p0[0], &n0[0]), 0.into());
        for g in 1..=3 {
            let l = crate::lattice::tensor_symplectic(g);
            let (n0, p0) = n0_p0_bases(g);
            for (i, x) in n0.iter().enumerate() {
                for (j, y) in n0.iter().enumerate() {
                    assert_eq!(l.pair_int(x, y), (if i == j { -2 } else { 0 }).into());
                }
                for y in &p0 {
                    assert_eq!(l.pair_int(x, y), 0.into());
                }
            }
            for (i, x) in p0.iter().enumerate() {
                for (j, y) in p0.iter().enumerate() {
                    assert_eq!(l.pair_int(x, y), (if i == j { 2 } else { 0 }).into());
                }
            }
            let all: Vec<Vec<i64>> = n0.iter().chain(&p0).cloned().collect();
            let gram: Vec<Vec<num_bigint::BigInt>> =
                all.iter().map(|x| all.iter().map(|y| l.pair_int(x, y)).collect()).collect();
            let sub = crate::lattice::GramLattice::new(gram, None).unwrap();
            assert_eq!(sub.signature(), (2 * g, 2 * g));
        }
    }

    #[test]
    fn base_point_plane_is_n0() {
        for g in 1..=3 {
            let plane = phi_plane(&SiegelPair::<f64>::base_point(g)).unwrap();
            assert!(plane.span_residual(&NegativePlane::standard(g)) < 1e-9);
        }
    }

    #[test]
    fn random_planes_negative_and_choice_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in 1..=3 {
            for _ in 0..20 {
                let pair = SiegelPair::<f64>::random(g, &mut rng);
                let plane = phi_plane(&pair).unwrap();
                assert!(plane.is_negative_definite(1e-9));
                let d = transporter_defects(&pair).unwrap();
                assert!(d.iter().all(|&x| x < 1e-10), "{d:?}");
                let m = transporter_sl2(pair.tau()).unwrap();
                let mp = transporter_sp(pair.tau_prime()).unwrap();
                assert!(isometry_defect(&m, &mp) < 1e-9);
                let kron_plane = phi_plane_via_kron(&m, &mp);
                assert!(plane.span_residual(&kron_plane) < 1e-12);
                // other representatives: Cholesky form, and both composed
                // with random stabiliser elements
                let chol = transporter_sp_cholesky(pair.tau_prime()).unwrap();
                let k = random_stabilizer::<f64, _>(g, &mut rng);
                let m2 = mul2(&m, &random_rotation(&mut rng));
                let alt = plane_from_transporters(&m2, &matmul(&chol, &k));
                assert!(plane.span_residual(&alt) < 1e-9);
                assert!(symplectic_defect(&matmul(&chol, &k)) < 1e-10);
            }
        }
    }

    #[test]
    fn identity_case_orthogonal() {
        let tau = c(-0.4, 1.1);
        let pair = SiegelPair::new(tau, vec![vec![tau]], 1e-12).unwrap();
        let r = orthogonality_identities(&j2_inv(1), &pair, Tolerance::default()).unwrap();
        assert!(r.max_abs_residual < 1e-9);
        assert!(r.period_vanishes && r.orthogonal);
    }

    #[test]
    fn identities_on_random_samples_and_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in 1..=2 {
            for _ in 0..50 {
                let pair = SiegelPair::<f64>::random(g, &mut rng);
                let rows: Vec<[i64; 2]> =
                    (0..2 * g).map(|_| [rng.gen_range(-5..=5), rng.gen_range(-5..=5)]).collect();
                let b = IsogenyMatrix::new(g, rows.clone()).unwrap();
                let r = orthogonality_identities(&b, &pair, Tolerance::default()).unwrap();
                assert!(r.max_rel_residual < 1e-8);
                let b2 = IsogenyMatrix::new(g, rows.iter().map(|r| [2 * r[0], 2 * r[1]]).collect()).unwrap();
                let r2 = orthogonality_identities(&b2, &pair, Tolerance::default()).unwrap();
                for j in 0..g {
                    assert!((r2.beta[j].0 - 2.0 * r.beta[j].0).abs() < 1e-9 * (1.0 + r.beta[j].0.abs()));
                    assert!((r2.pair_s[j] - 2.0 * r.pair_s[j]).abs() < 1e-9 * (1.0 + r.pair_s[j].abs()));
                }
                assert!(r2.max_rel_residual < 1e-8);
            }
        }
    }

    #[test]
    fn embedded_zero_cases_both_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=4i64 {
            let tau = c(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.5));
            let other = c(0.2, 1.3);
            let tp = vec![vec![tau * n as f64, c(0.0, 0.0)], vec![c(0.0, 0.0), other]];
            let pair = SiegelPair::new(tau, tp, 1e-12).unwrap();
            let b = embed_block(&j2_inv(n), 2);
            let r = orthogonality_identities(&b, &pair, Tolerance::default()).unwrap();
            assert!(r.period_vanishes && r.orthogonal && r.verdicts_agree());
            // a generic matrix is nonzero on both sides
            let generic = IsogenyMatrix::new(2, vec![[1, 2], [0, 1], [3, -1], [1, 1]]).unwrap();
            let r = orthogonality_identities(&generic, &pair, Tolerance::default()).unwrap();
            assert!(!r.period_vanishes && !r.orthogonal);
        }
    }

    #[test]
    fn generic_periods_nonzero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let pair = SiegelPair::<f64>::random(2, &mut rng);
            let rows: Vec<[i64; 2]> = (0..4).map(|_| [rng.gen_range(-5..=5), rng.gen_range(-5..=5)]).collect();
            let b = IsogenyMatrix::new(2, rows).unwrap();
            if b.rows().iter().all(|r| r == &[0, 0]) {
                continue;
            }
            let p = period_vector(&b, &pair).unwrap();
            assert!(p.iter().map(|z| z.norm()).fold(0.0, f64::max) > 1e-9);
        }
    }

    #[test]
    fn single_precision_plane() {
        let pair = SiegelPair::<f32>::base_point(2);
        let plane = phi_plane(&pair).unwrap();
        assert!(plane.is_negative_definite(1e-4));
    }
}
