//! Integer matrices `B` (2g×2) with `BᵀJ_{2g}B = d·J₂`, their homology form
//! `B_h = B·J₂`, the tensor-lattice vector `B_φ`, level-N congruence data,
//! a constructive normal form for the action `(γ, δ)·B = δ·B·γ` of
//! `SL₂(ℤ) × Sp_{2g}(ℤ)`, and search harnesses over height windows.
//!
//! Row `i` of a matrix holds `(a_i, b_i)`; rows `0..g` are the `e` block and
//! rows `g..2g` the `f` block.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::ext_gcd;
use crate::error::{Error, Result};
use crate::lattice::tensor_symplectic;

pub type Mat = Vec<Vec<i64>>;
pub type Mat2 = [[i64; 2]; 2];

pub const J2: Mat2 = [[0, 1], [-1, 0]];
pub const J2_INV: Mat2 = [[0, -1], [1, 0]];

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IsogenyMatrix {
    g: usize,
    rows: Vec<[i64; 2]>,
}

impl IsogenyMatrix {
    pub fn new(g: usize, rows: Vec<[i64; 2]>) -> Result<Self> {
        if g == 0 || rows.len() != 2 * g {
            return Err(Error::Shape(format!("expected {} rows for g = {g}", 2 * g)));
        }
        Ok(Self { g, rows })
    }

    /// Builds `B` from its two columns.
    pub fn from_columns(a: &[i64], b: &[i64]) -> Result<Self> {
        if a.len() != b.len() || a.len() % 2 != 0 || a.is_empty() {
            return Err(Error::Shape("columns must have equal even length".into()));
        }
        let rows = a.iter().zip(b).map(|(&x, &y)| [x, y]).collect();
        Self::new(a.len() / 2, rows)
    }

    pub fn zero(g: usize) -> Self {
        Self {
            g,
            rows: vec![[0, 0]; 2 * g],
        }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn rows(&self) -> &[[i64; 2]] {
        &self.rows
    }

    pub fn a(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r[0]).collect()
    }

    pub fn b(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r[1]).collect()
    }

    pub fn height(&self) -> i64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter())
            .map(|x| x.abs())
            .max()
            .unwrap_or(0)
    }

    /// The `(1,2)` entry of `BᵀJ_{2g}B`.
    pub fn degree(&self) -> i64 {
        let g = self.g;
        (0..g)
            .map(|k| self.rows[k][0] * self.rows[g + k][1] - self.rows[g + k][0] * self.rows[k][1])
            .sum()
    }

    /// `BᵀJ_{2g}B` in full.
    pub fn form(&self) -> Mat2 {
        let g = self.g;
        let mut out = [[0i64; 2]; 2];
        for (s, row) in out.iter_mut().enumerate() {
            for (t, entry) in row.iter_mut().enumerate() {
                *entry = (0..g)
                    .map(|k| {
                        self.rows[k][s] * self.rows[g + k][t] - self.rows[g + k][s] * self.rows[k][t]
                    })
                    .sum();
            }
        }
        out
    }

    pub fn is_member(&self, d: i64) -> bool {
        d != 0 && self.degree() == d
    }

    pub fn right_mul(&self, m: &Mat2) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                [
                    r[0] * m[0][0] + r[1] * m[1][0],
                    r[0] * m[0][1] + r[1] * m[1][1],
                ]
            })
            .collect();
        Self { g: self.g, rows }
    }

    pub fn left_mul(&self, m: &Mat) -> Self {
        let n = 2 * self.g;
        let rows = (0..n)
            .map(|i| {
                let mut r = [0i64; 2];
                for k in 0..n {
                    if m[i][k] != 0 {
                        r[0] += m[i][k] * self.rows[k][0];
                        r[1] += m[i][k] * self.rows[k][1];
                    }
                }
                r
            })
            .collect();
        Self { g: self.g, rows }
    }

    /// `(γ, δ)·B = δ·B·γ`.
    pub fn act(&self, gamma: &Mat2, delta: &Mat) -> Self {
        self.left_mul(delta).right_mul(gamma)
    }

    /// `B_h = B·J₂`; each row `(a, b)` becomes `(−b, a)`.
    pub fn to_homology(&self) -> HomologyMatrix {
        HomologyMatrix(self.right_mul(&J2))
    }

    pub fn from_homology(h: &HomologyMatrix) -> Self {
        h.0.right_mul(&J2_INV)
    }

    pub fn tensor_vector(&self) -> TensorVector {
        let g = self.g;
        let mut c = vec![0i64; 4 * g];
        for k in 0..g {
            let (ak, bk) = (self.rows[k][0], self.rows[k][1]);
            let (agk, bgk) = (self.rows[g + k][0], self.rows[g + k][1]);
            c[k] = bgk;
            c[g + k] = -bk;
            c[2 * g + k] = -agk;
            c[3 * g + k] = ak;
        }
        TensorVector { coords: c }
    }

    pub fn matrix_of_vector(v: &TensorVector) -> Result<Self> {
        let n = v.coords.len();
        if n == 0 || n % 4 != 0 {
            return Err(Error::Shape(format!("tensor vector of length {n}")));
        }
        let g = n / 4;
        let c = &v.coords;
        let mut rows = vec![[0i64; 2]; 2 * g];
        for k in 0..g {
            rows[k] = [c[3 * g + k], -c[g + k]];
            rows[g + k] = [-c[2 * g + k], c[k]];
        }
        Self::new(g, rows)
    }

    pub fn congruence_class(&self, n: u64) -> LevelDatum {
        assert!(n >= 1);
        let m = n as i64;
        let bh = self.to_homology();
        LevelDatum {
            n,
            b: bh.0.rows.iter().map(|r| [r[0].rem_euclid(m), r[1].rem_euclid(m)]).collect(),
        }
    }

    pub fn congruence_check(&self, datum: &LevelDatum) -> bool {
        self.congruence_class(datum.n) == *datum
    }
}

/// `B_h = B·J₂`, kept as a distinct type so the two conventions never mix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyMatrix(pub IsogenyMatrix);

impl HomologyMatrix {
    /// `(1,2)` entry of `B_hᵀ J B_h`; equals the degree of the underlying `B`.
    pub fn degree(&self) -> i64 {
        self.0.degree()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorVector {
    pub coords: Vec<i64>,
}

impl TensorVector {
    /// `γ(v, w)` on the tensor lattice of rank `4g`.
    pub fn pair(&self, other: &TensorVector) -> i64 {
        let g = self.coords.len() / 4;
        let x = &self.coords;
        let y = &other.coords;
        (0..g)
            .map(|k| {
                x[k] * y[3 * g + k] + x[3 * g + k] * y[k]
                    - x[g + k] * y[2 * g + k]
                    - x[2 * g + k] * y[g + k]
            })
            .sum()
    }

    pub fn norm(&self) -> i64 {
        self.pair(self)
    }

    /// Same pairing through the exact Gram matrix of the lattice module.
    pub fn norm_via_gram(&self) -> num_bigint::BigInt {
        let g = self.coords.len() / 4;
        tensor_symplectic(g).pair_int(&self.coords, &self.coords)
    }
}

/// Residue matrix `b` with entries in `[0, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelDatum {
    pub n: u64,
    pub b: Vec<[i64; 2]>,
}

impl LevelDatum {
    pub fn new(n: u64, b: Vec<[i64; 2]>) -> Self {
        assert!(n >= 1);
        let m = n as i64;
        Self {
            n,
            b: b.iter().map(|r| [r[0].rem_euclid(m), r[1].rem_euclid(m)]).collect(),
        }
    }

    /// Whether `bᵀJ_{2g}b ≡ d·J₂ (mod N)`.
    pub fn respects_form(&self, d: i64) -> bool {
        let g = self.b.len() / 2;
        let m = IsogenyMatrix {
            g,
            rows: self.b.clone(),
        };
        let f = m.form();
        let n = self.n as i64;
        (f[0][1] - d).rem_euclid(n) == 0 && f[0][0].rem_euclid(n) == 0
    }
}

/// All `B` with `max|entry| ≤ height` and `degree(B) = d`, in lexicographic
/// order of the flattened columns `(a₁ … a_{2g}, b₁ … b_{2g})`.
pub fn enumerate(g: usize, d: i64, height: i64, filter: Option<&LevelDatum>) -> Vec<IsogenyMatrix> {
    assert!(height >= 1 && g >= 1);
    if d == 0 {
        return Vec::new();
    }
    let n = 4 * g;
    let side = 2 * height + 1;
    let heads: Vec<i64> = (-height..=height).collect();
    let chunks: Vec<Vec<IsogenyMatrix>> = heads
        .par_iter()
        .map(|&head| {
            let mut out = Vec::new();
            let mut digits = vec![0i64; n - 1];
            let total = (side as u64).pow((n - 1) as u32);
            let mut flat = vec![0i64; n];
            flat[0] = head;
            for _ in 0..total {
                for (slot, dgt) in flat[1..].iter_mut().zip(&digits) {
                    *slot = dgt - height;
                }
                let a = &flat[..2 * g];
                let b = &flat[2 * g..];
                let deg: i64 = (0..g).map(|k| a[k] * b[g + k] - a[g + k] * b[k]).sum();
                if deg == d {
                    let m = IsogenyMatrix::from_columns(a, b).expect("shape");
                    if filter.map_or(true, |f| m.congruence_check(f)) {
                        out.push(m);
                    }
                }
                // odometer, last digit fastest
                for dgt in digits.iter_mut().rev() {
                    *dgt += 1;
                    if *dgt < side {
                        break;
                    }
                    *dgt = 0;
                }
            }
            out
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    let n = x.len();
    let m = y[0].len();
    let k = y.len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|t| x[i][t] * y[t][j]).sum()).collect())
        .collect()
}

pub fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

pub fn is_symplectic(m: &Mat) -> bool {
    let n = m.len();
    if n % 2 != 0 || m.iter().any(|r| r.len() != n) {
        return false;
    }
    let g = n / 2;
    for i in 0..n {
        for j in 0..n {
            let v: i64 = (0..g)
                .map(|k| m[k][i] * m[g + k][j] - m[g + k][i] * m[k][j])
                .sum();
            let want = if j == i + g && i < g {
                1
            } else if i == j + g && j < g {
                -1
            } else {
                0
            };
            if v != want {
                return false;
            }
        }
    }
    true
}

pub fn det2(m: &Mat2) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Normal form produced by [`symplectic_reduce`].
///
/// `s1 | s2` are the Smith divisors of `B` (gcd of entries, gcd of 2×2
/// minors divided by `s1`). The representative is `(s1·e₁ | s2·e₂ + (d/s1)·f₁)`
/// when `s1·s2 < d` and `(s1·e₁ | s2·f₁)` when `s1·s2 = d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub d: i64,
    pub s1: i64,
    pub s2: i64,
    pub representative: IsogenyMatrix,
    pub gamma: Mat2,
    pub delta: Mat,
}

impl Reduction {
    /// Whether the divisor pair multiplies out to the degree.
    pub fn is_split(&self) -> bool {
        self.s1 * self.s2 == self.d
    }
}

/// Canonical representative with given invariants.
pub fn representative(g: usize, d: i64, s1: i64, s2: i64) -> IsogenyMatrix {
    let mut rows = vec![[0i64; 2]; 2 * g];
    rows[0][0] = s1;
    if s1 * s2 == d {
        rows[g][1] = s2;
    } else {
        assert!(g >= 2, "non-split orbits need g ≥ 2");
        rows[1][1] = s2;
        rows[g][1] = d / s1;
    }
    IsogenyMatrix { g, rows }
}

/// Every representative of degree `d` for genus `g`, sorted by `(s1, s2)`.
pub fn all_representatives(g: usize, d: i64) -> Vec<(i64, i64, IsogenyMatrix)> {
    let mut out = Vec::new();
    for s1 in 1..=d {
        if d % (s1 * s1) != 0 {
            continue;
        }
        let k = d / s1;
        for m in 1..=k / s1 {
            if (k / s1) % m != 0 {
                continue;
            }
            let s2 = s1 * m;
            if s1 * s2 != d && g < 2 {
                continue;
            }
            out.push((s1, s2, representative(g, d, s1, s2)));
        }
    }
    out
}

struct Reducer {
    g: usize,
    m: IsogenyMatrix,
    delta: Mat,
    gamma: Mat2,
}

impl Reducer {
    fn rows_op(&mut self, f: impl Fn(&mut Vec<[i64; 2]>, &mut Mat)) {
        f(&mut self.m.rows, &mut self.delta);
    }

    /// SL₂ matrix `[[p,q],[r,s]]` acting on rows `(i, j)` of both `B` and `δ`.
    fn plane(&mut self, i: usize, j: usize, p: i64, q: i64, r: i64, s: i64) {
        self.rows_op(|rows, delta| {
            for c in 0..2 {
                let (x, y) = (rows[i][c], rows[j][c]);
                rows[i][c] = p * x + q * y;
                rows[j][c] = r * x + s * y;
            }
            for c in 0..delta[0].len() {
                let (x, y) = (delta[i][c], delta[j][c]);
                delta[i][c] = p * x + q * y;
                delta[j][c] = r * x + s * y;
            }
        });
    }

    /// `diag(A, A^{-T})` with `A` the unimodular 2×2 block `[[p,q],[r,s]]`
    /// on `e`-indices `(i, j)`.
    fn gl_block(&mut self, i: usize, j: usize, p: i64, q: i64, r: i64, s: i64) {
        let g = self.g;
        self.plane(i, j, p, q, r, s);
        // A^{-T} = [[s, -r], [-q, p]]
        self.plane(g + i, g + j, s, -r, -q, p);
    }

    /// Symmetric transvection `f_i ↦ f_i + λ e_j`, `f_j ↦ f_j + λ e_i`
    /// (rows: `e_i += λ f_j`, `e_j += λ f_i`).
    fn shear(&mut self, i: usize, j: usize, lambda: i64) {
        let g = self.g;
        self.rows_op(|rows, delta| {
            let add = |v: &mut Vec<[i64; 2]>, dst: usize, src: usize, t: i64| {
                for c in 0..2 {
                    let s = v[src][c];
                    v[dst][c] += t * s;
                }
            };
            add(rows, i, g + j, lambda);
            if i != j {
                add(rows, j, g + i, lambda);
            }
            for c in 0..delta[0].len() {
                let s = delta[g + j][c];
                delta[i][c] += lambda * s;
            }
            if i != j {
                for c in 0..delta[0].len() {
                    let s = delta[g + i][c];
                    delta[j][c] += lambda * s;
                }
            }
        });
    }

    fn right(&mut self, m: Mat2) {
        self.m = self.m.right_mul(&m);
        self.gamma = mat2_mul(&self.gamma, &m);
    }

    /// Brings column `col` restricted to planes `from..g` into `c·e_from`,
    /// `c ≥ 0`, using only symplectic moves on those planes.
    fn gather(&mut self, col: usize, from: usize) {
        let g = self.g;
        for k in from..g {
            let (x, y) = (self.m.rows[k][col], self.m.rows[g + k][col]);
            if y != 0 {
                let (h, u, v) = ext_gcd(x, y);
                self.plane(k, g + k, u, v, -y / h, x / h);
            }
        }
        for k in from + 1..g {
            let (x, y) = (self.m.rows[from][col], self.m.rows[k][col]);
            if y != 0 {
                let (h, u, v) = ext_gcd(x, y);
                self.gl_block(from, k, u, v, -y / h, x / h);
            }
        }
        if self.m.rows[from][col] < 0 {
            self.plane(from, g + from, -1, 0, 0, -1);
        }
    }
}

/// Reduces `B` of positive degree to its normal form and returns the
/// transforming pair with `δ·B·γ = representative`.
pub fn symplectic_reduce(b: &IsogenyMatrix) -> Result<Reduction> {
    let d = b.degree();
    if d <= 0 {
        return Err(Error::NonPositiveDegree(d));
    }
    let g = b.genus();
    let mut r = Reducer {
        g,
        m: b.clone(),
        delta: identity(2 * g),
        gamma: [[1, 0], [0, 1]],
    };
    r.gather(0, 0);
    // fold the content of b into a
    let c = r.m.rows[0][0];
    let b1 = r.m.rows[0][1];
    let rest = (1..2 * g).fold(0i64, |acc, i| acc.gcd(&r.m.rows[i][1]));
    let target = c.gcd(&b1).gcd(&rest);
    if c != target {
        let x = (0..rest.abs().max(1))
            .find(|x| (x * c + b1).gcd(&rest) == target)
            .expect("a suitable shift exists below the modulus");
        r.right([[x, -1], [1, 0]]);
        r.gather(0, 0);
    }
    let s1 = r.m.rows[0][0];
    let t = r.m.rows[0][1] / s1;
    if t != 0 {
        r.right([[1, -t], [0, 1]]);
    }
    let k = d / s1;
    debug_assert_eq!(r.m.rows[g][1], k);
    let mut s2 = k;
    if g >= 2 {
        r.gather(1, 1);
        let tt = r.m.rows[1][1];
        if tt % k != 0 {
            // e₂ ↦ e₂ + e₁ folds k into the complement
            r.gl_block(0, 1, 1, 1, 0, 1);
            let shift = r.m.rows[0][1] / s1;
            if shift != 0 {
                r.right([[1, -shift], [0, 1]]);
            }
            r.gather(1, 1);
        }
        let tt = r.m.rows[1][1];
        if tt != 0 && tt % k == 0 {
            r.shear(0, 1, -tt / k);
        }
        let tt = r.m.rows[1][1];
        if tt != 0 {
            s2 = tt;
        }
    }
    let rep = representative(g, d, s1, s2);
    if r.m != rep {
        return Err(Error::Unsupported(format!(
            "reduction stalled at {:?}",
            r.m.rows
        )));
    }
    Ok(Reduction {
        d,
        s1,
        s2,
        representative: rep,
        gamma: r.gamma,
        delta: r.delta,
    })
}

/// Smith divisors `(s1, s2)` of a 2g×2 integer matrix, computed directly
/// from gcds of entries and of 2×2 minors.
pub fn smith_pair(b: &IsogenyMatrix) -> (i64, i64) {
    let rows = b.rows();
    let s1 = rows.iter().fold(0i64, |acc, r| acc.gcd(&r[0]).gcd(&r[1]));
    let mut minors = 0i64;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            minors = minors.gcd(&(rows[i][0] * rows[j][1] - rows[j][0] * rows[i][1]));
        }
    }
    if s1 == 0 {
        (0, 0)
    } else {
        (s1, minors / s1)
    }
}

/// One generator move of the action graph.
#[derive(Clone, Debug)]
pub enum Move {
    Left(String, Mat),
    Right(String, Mat2),
}

impl Move {
    pub fn label(&self) -> &str {
        match self {
            Move::Left(l, _) | Move::Right(l, _) => l,
        }
    }

    pub fn apply(&self, b: &IsogenyMatrix) -> IsogenyMatrix {
        match self {
            Move::Left(_, m) => b.left_mul(m),
            Move::Right(_, m) => b.right_mul(m),
        }
    }
}

/// Generators of `Sp_{2g}(ℤ)` (symmetric shears above and below the
/// diagonal, elementary `diag(A, A^{-T})`) and of `SL₂(ℤ)`, each with its
/// inverse, scaled by `n` so that every move is `≡ Id (mod n)`.
/// `n = 1` gives the full groups; the `S` element is only added then.
pub fn generators(g: usize, n: i64) -> Vec<Move> {
    let size = 2 * g;
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        let t = sign * n;
        for i in 0..g {
            for j in i..g {
                let mut up = identity(size);
                up[i][g + j] += t;
                if i != j {
                    up[j][g + i] += t;
                }
                out.push(Move::Left(format!("U{i}{j}({t})"), up));
                let mut lo = identity(size);
                lo[g + i][j] += t;
                if i != j {
                    lo[g + j][i] += t;
                }
                out.push(Move::Left(format!("D{i}{j}({t})"), lo));
            }
        }
        for i in 0..g {
            for j in 0..g {
                if i != j {
                    let mut a = identity(size);
                    a[i][j] += t;
                    a[g + j][g + i] -= t;
                    out.push(Move::Left(format!("A{i}{j}({t})"), a));
                }
            }
        }
        out.push(Move::Right(format!("T({t})"), [[1, t], [0, 1]]));
        out.push(Move::Right(format!("L({t})"), [[1, 0], [t, 1]]));
    }
    if n == 1 {
        out.push(Move::Right("S".into(), [[0, -1], [1, 0]]));
        out.push(Move::Right("S'".into(), [[0, 1], [-1, 0]]));
    }
    out
}

/// A path in the action graph, with its multiplied-out group elements.
#[derive(Clone, Debug, Serialize)]
pub struct GroupWord {
    pub labels: Vec<String>,
    pub gamma: Mat2,
    pub delta: Mat,
}

impl GroupWord {
    fn from_moves(g: usize, moves: &[Move], path: &[usize]) -> Self {
        let mut delta = identity(2 * g);
        let mut gamma = [[1, 0], [0, 1]];
        for &ix in path {
            match &moves[ix] {
                Move::Left(_, m) => delta = mat_mul(m, &delta),
                Move::Right(_, m) => gamma = mat2_mul(&gamma, m),
            }
        }
        Self {
            labels: path.iter().map(|&i| moves[i].label().to_string()).collect(),
            gamma,
            delta,
        }
    }

    /// Checks `δ·from·γ = to`, `δ ∈ Sp`, `det γ = 1`, and both `≡ Id (mod n)`.
    pub fn certifies(&self, from: &IsogenyMatrix, to: &IsogenyMatrix, n: i64) -> bool {
        let id = identity(self.delta.len());
        let delta_ok = is_symplectic(&self.delta)
            && self
                .delta
                .iter()
                .zip(&id)
                .all(|(r, e)| r.iter().zip(e).all(|(x, y)| (x - y).rem_euclid(n) == 0));
        let gamma_ok = det2(&self.gamma) == 1
            && (0..2).all(|i| {
                (0..2).all(|j| (self.gamma[i][j] - i64::from(i == j)).rem_euclid(n) == 0)
            });
        delta_ok && gamma_ok && from.act(&self.gamma, &self.delta) == *to
    }

    pub fn inverse_path(path: &[usize], moves: &[Move]) -> Vec<usize> {
        // every generator list from `generators` is closed under inversion
        path.iter()
            .rev()
            .map(|&i| inverse_index(moves, i))
            .collect()
    }
}

fn inverse_index(moves: &[Move], i: usize) -> usize {
    let probe = |m: &Move, x: &Move| match (m, x) {
        (Move::Left(_, a), Move::Left(_, b)) => mat_mul(a, b) == identity(a.len()),
        (Move::Right(_, a), Move::Right(_, b)) => mat2_mul(a, b) == [[1, 0], [0, 1]],
        _ => false,
    };
    moves
        .iter()
        .position(|m| probe(&moves[i], m))
        .expect("generator set closed under inverses")
}

/// Breadth-first search forest over the action graph restricted to
/// matrices of height `≤ cap`, grown from several sources at once.
pub struct ActionForest {
    g: usize,
    pub moves: Vec<Move>,
    inverse: Vec<usize>,
    parent: HashMap<IsogenyMatrix, (usize, Option<usize>, u32)>,
    sources: Vec<IsogenyMatrix>,
}

impl ActionForest {
    /// `max_depth = None` explores the whole capped component.
    pub fn grow(
        g: usize,
        n: i64,
        sources: &[IsogenyMatrix],
        cap: i64,
        max_depth: Option<u32>,
    ) -> Self {
        let moves = generators(g, n);
        let inverse = (0..moves.len()).map(|i| inverse_index(&moves, i)).collect();
        let mut parent = HashMap::new();
        let mut queue = VecDeque::new();
        for (s, src) in sources.iter().enumerate() {
            if !parent.contains_key(src) {
                parent.insert(src.clone(), (s, None, 0));
                queue.push_back(src.clone());
            }
        }
        while let Some(x) = queue.pop_front() {
            let (root, _, depth) = parent[&x];
            if max_depth.is_some_and(|m| depth >= m) {
                continue;
            }
            for (mi, mv) in moves.iter().enumerate() {
                let y = mv.apply(&x);
                if y.height() > cap || parent.contains_key(&y) {
                    continue;
                }
                parent.insert(y.clone(), (root, Some(mi), depth + 1));
                queue.push_back(y);
            }
        }
        Self {
            g,
            moves,
            inverse,
            parent,
            sources: sources.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root_of(&self, b: &IsogenyMatrix) -> Option<usize> {
        self.parent.get(b).map(|p| p.0)
    }

    pub fn depth_of(&self, b: &IsogenyMatrix) -> Option<u32> {
        self.parent.get(b).map(|p| p.2)
    }

    /// Move indices leading from the root of `b` to `b`.
    fn path_from_root(&self, b: &IsogenyMatrix) -> Option<Vec<usize>> {
        let mut path = Vec::new();
        let mut cur = b.clone();
        loop {
            let (_, mv, _) = *self.parent.get(&cur)?;
            match mv {
                None => break,
                Some(mi) => {
                    path.push(mi);
                    cur = self.moves[self.inverse[mi]].apply(&cur);
                }
            }
        }
        path.reverse();
        Some(path)
    }

    /// Word taking `b` to the source of its tree.
    pub fn word_to_root(&self, b: &IsogenyMatrix) -> Option<(usize, GroupWord)> {
        let root = self.root_of(b)?;
        let up = self.path_from_root(b)?;
        let back: Vec<usize> = up.iter().rev().map(|&i| self.inverse[i]).collect();
        Some((root, GroupWord::from_moves(self.g, &self.moves, &back)))
    }

    /// Word taking `x` to `y` through their roots: `x → root(x)`, then the
    /// bridge `root(x) → root(y)` supplied by the caller is not needed when
    /// the roots agree.
    pub fn word_between(&self, x: &IsogenyMatrix, y: &IsogenyMatrix) -> Option<GroupWord> {
        if self.root_of(x)? != self.root_of(y)? {
            return None;
        }
        let up = self.path_from_root(x)?;
        let mut path: Vec<usize> = up.iter().rev().map(|&i| self.inverse[i]).collect();
        path.extend(self.path_from_root(y)?);
        Some(GroupWord::from_moves(self.g, &self.moves, &path))
    }

    pub fn sources(&self) -> &[IsogenyMatrix] {
        &self.sources
    }
}

/// One certified reduction of the BFS oracle.
#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub matrix: IsogenyMatrix,
    pub reduction: Option<Reduction>,
    pub bfs_word: Option<GroupWord>,
    pub reduction_certified: bool,
    pub bfs_certified: bool,
}

/// Reduces every matrix of the window and confirms each reduction with an
/// independent breadth-first search from the representatives.
pub fn reduction_oracle(g: usize, d: i64, height: i64, cap: i64) -> Vec<OracleCheck> {
    let mats = enumerate(g, d, height, None);
    let reps: Vec<IsogenyMatrix> = all_representatives(g, d).into_iter().map(|r| r.2).collect();
    let forest = ActionForest::grow(g, 1, &reps, cap.max(d).max(height), None);
    mats.into_par_iter()
        .map(|m| {
            let reduction = symplectic_reduce(&m).ok();
            let reduction_certified = reduction.as_ref().is_some_and(|r| {
                GroupWord {
                    labels: vec![],
                    gamma: r.gamma,
                    delta: r.delta.clone(),
                }
                .certifies(&m, &r.representative, 1)
                    && smith_pair(&m) == (r.s1, r.s2)
            });
            let bfs_word = forest.word_to_root(&m);
            let bfs_certified = match (&reduction, &bfs_word) {
                (Some(r), Some((root, w))) => {
                    forest.sources()[*root] == r.representative
                        && w.certifies(&m, &r.representative, 1)
                }
                _ => false,
            };
            OracleCheck {
                matrix: m,
                reduction,
                bfs_word: bfs_word.map(|x| x.1),
                reduction_certified,
                bfs_certified,
            }
        })
        .collect()
}

/// Union-find with path halving.
struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusClass {
    pub rep: Vec<[i64; 2]>,
    pub size: usize,
    pub congruence_class: Vec<[i64; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub g: usize,
    pub d: i64,
    #[serde(rename = "N")]
    pub n: u64,
    pub height_bound: i64,
    pub bfs_depth: u32,
    pub classes: Vec<CensusClass>,
    pub merges: usize,
    pub merges_certified: bool,
    pub congruence_constant: bool,
}

/// Partitions the height window by level-`N` moves.
///
/// A multi-source BFS of depth `bfs_depth` runs from every window matrix
/// over matrices of height `≤ height_bound + N`; two window matrices are
/// merged when their trees touch across a single generator edge. Each
/// merge is certified by multiplying out the joined word.
pub fn orbit_census(g: usize, d: i64, n: u64, height_bound: i64, bfs_depth: u32) -> CensusReport {
    let ni = n as i64;
    let window = enumerate(g, d, height_bound, None);
    let forest = ActionForest::grow(g, ni, &window, height_bound + ni, Some(bfs_depth));
    let mut dsu = Dsu((0..window.len()).collect());
    let mut merges = 0;
    let mut certified = true;
    let mut keys: Vec<&IsogenyMatrix> = forest.parent.keys().collect();
    keys.sort();
    for x in keys {
        let (rx, _, dx) = forest.parent[x];
        if dx >= bfs_depth {
            continue;
        }
        for (mi, mv) in forest.moves.iter().enumerate() {
            let y = mv.apply(x);
            let Some(&(ry, _, _)) = forest.parent.get(&y) else {
                continue;
            };
            if dsu.find(rx) == dsu.find(ry) {
                continue;
            }
            // root(x) → x, the bridging edge, then y → root(y)
            let mut word = forest.path_from_root(x).expect("tree vertex");
            word.push(mi);
            word.extend(
                forest
                    .path_from_root(&y)
                    .expect("tree vertex")
                    .iter()
                    .rev()
                    .map(|&i| forest.inverse[i]),
            );
            let w = GroupWord::from_moves(g, &forest.moves, &word);
            certified &= w.certifies(&window[rx], &window[ry], ni);
            dsu.union(rx, ry);
            merges += 1;
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..window.len() {
        let r = dsu.find(i);
        let s = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[s].push(i);
    }
    let mut congruence_constant = true;
    let classes = groups
        .iter()
        .map(|members| {
            let rep = &window[members[0]];
            let cc = rep.congruence_class(n);
            congruence_constant &= members.iter().all(|&i| window[i].congruence_check(&cc));
            CensusClass {
                rep: rep.rows().to_vec(),
                size: members.len(),
                congruence_class: cc.b,
            }
        })
        .collect();
    CensusReport {
        g,
        d,
        n,
        height_bound,
        bfs_depth,
        classes,
        merges,
        merges_certified: certified,
        congruence_constant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(g: usize, i: usize) -> Vec<i64> {
        let mut v = vec![0; 2 * g];
        v[i] = 1;
        v
    }

    fn cols(a: Vec<i64>, b: Vec<i64>) -> IsogenyMatrix {
        IsogenyMatrix::from_columns(&a, &b).unwrap()
    }

    #[test]
    fn degree_examples() {
        assert_eq!(cols(e(2, 0), e(2, 2)).degree(), 1);
        let scaled = cols(e(2, 0).iter().map(|x| 3 * x).collect(), e(2, 2).iter().map(|x| 5 * x).collect());
        assert_eq!(scaled.degree(), 15);
        let m = cols(vec![2, 7], vec![-3, 4]);
        assert_eq!(m.degree(), 2 * 4 - 7 * -3);
    }

    #[test]
    fn homology_examples() {
        let b = cols(e(2, 0), e(2, 2));
        let h = b.to_homology();
        assert_eq!(h.0.a(), vec![0, 0, -1, 0]);
        assert_eq!(h.0.b(), vec![1, 0, 0, 0]);
        assert_eq!(IsogenyMatrix::from_homology(&h), b);
        for n in 1..6 {
            let bh = HomologyMatrix(cols(vec![n, 0], vec![0, n]));
            let back = IsogenyMatrix::from_homology(&bh);
            assert_eq!(back, cols(vec![0, n], vec![-n, 0]));
            assert_eq!(back.degree(), n * n);
            assert_eq!(bh.degree(), n * n);
        }
    }

    #[test]
    fn tensor_vector_examples() {
        assert!(IsogenyMatrix::zero(2).tensor_vector().coords.iter().all(|&x| x == 0));
        let v = cols(e(2, 0), e(2, 2)).tensor_vector();
        assert_eq!(v.coords.iter().filter(|&&x| x != 0).count(), 2);
        assert_eq!(v.norm(), 2);
        assert_eq!(v.norm_via_gram(), 2.into());
    }

    #[test]
    fn congruence_examples() {
        let b = cols(e(2, 0), e(2, 2));
        assert!(b.congruence_check(&LevelDatum::new(1, vec![[0, 0]; 4])));
        assert!(!b.congruence_check(&LevelDatum::new(2, vec![[0, 0]; 4])));
        let c = b.congruence_class(7);
        assert!(b.congruence_check(&c));
        assert!(c.respects_form(1));
        assert!(!c.respects_form(2));
    }

    #[test]
    fn enumerate_small_case_matches_brute_force() {
        let got = enumerate(1, 1, 1, None);
        let mut count = 0;
        for p in -1..=1i64 {
            for q in -1..=1i64 {
                for r in -1..=1i64 {
                    for s in -1..=1i64 {
                        // rows (p,q),(r,s): degree = p·s − r·q
                        if p * s - q * r == 1 {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(got.len(), count);
        assert!(got.windows(2).all(|w| {
            let f = |m: &IsogenyMatrix| [m.a(), m.b()].concat();
            f(&w[0]) < f(&w[1])
        }));
        assert!(enumerate(1, 0, 2, None).is_empty());
        for m in enumerate(2, 3, 1, None) {
            assert_eq!(m.form(), [[0, 3], [-3, 0]]);
        }
    }

    #[test]
    fn canonical_inputs_are_fixed() {
        let r = symplectic_reduce(&cols(e(2, 0), e(2, 2))).unwrap();
        assert_eq!((r.s1, r.s2), (1, 1));
        let b = cols(vec![2, 0, 0, 0], vec![0, 0, 2, 0]);
        let r = symplectic_reduce(&b).unwrap();
        assert_eq!((r.s1, r.s2, r.d), (2, 2, 4));
        assert_eq!(r.representative, b);
        assert!(matches!(
            symplectic_reduce(&cols(vec![0, 1], vec![1, 0])),
            Err(Error::NonPositiveDegree(-1))
        ));
    }

    #[test]
    fn non_split_orbit_exists() {
        // (e₁ | e₂ + 2f₁) has degree 2 but every 2×2 minor is coprime.
        let b = cols(vec![1, 0, 0, 0], vec![0, 1, 2, 0]);
        assert_eq!(b.degree(), 2);
        assert_eq!(smith_pair(&b), (1, 1));
        let r = symplectic_reduce(&b).unwrap();
        assert!(!r.is_split());
        assert_eq!(r.representative, b);
    }

    #[test]
    fn representative_count_formula() {
        // Σ_{c²|d} τ(d/c²) for g ≥ 2; divisor pairs only for g = 1.
        assert_eq!(all_representatives(2, 4).len(), 3 + 1);
        assert_eq!(all_representatives(2, 12).len(), 6 + 2);
        assert_eq!(all_representatives(1, 4).len(), 2);
    }

    #[test]
    fn generators_are_group_elements() {
        for g in 1..4 {
            for n in [1, 3] {
                for mv in generators(g, n) {
                    match mv {
                        Move::Left(_, m) => assert!(is_symplectic(&m)),
                        Move::Right(_, m) => assert_eq!(det2(&m), 1),
                    }
                }
            }
        }
    }

    #[test]
    fn bfs_oracle_small_window() {
        for d in 1..=2 {
            for c in reduction_oracle(2, d, 1, 2) {
                assert!(c.reduction_certified, "{:?}", c.matrix);
                assert!(c.bfs_certified, "{:?}", c.matrix);
            }
        }
    }

    #[test]
    fn census_level_one_g1() {
        let r = orbit_census(1, 1, 1, 2, 6);
        assert_eq!(r.classes.len(), 1);
        assert!(r.merges_certified && r.congruence_constant);
    }

    #[test]
    fn census_monotone_in_depth() {
        let counts: Vec<usize> = (1..5)
            .map(|depth| orbit_census(1, 2, 2, 2, depth).classes.len())
            .collect();
        assert!(counts.windows(2).all(|w| w[1] <= w[0]), "{counts:?}");
        let r = orbit_census(1, 2, 2, 2, 4);
        assert!(r.merges_certified && r.congruence_constant);
    }
}
