//! Exact integral lattices given by a Gram matrix.
//!
//! Everything here is exact: `BigInt` Gram entries, `BigRational` duals,
//! signature by symmetric pivoting over ℚ, discriminant groups by Smith
//! normal form. The symplectic tensor lattice `Λ ⊗ Λ′` uses the fixed basis
//! ordering
//!
//! ```text
//! e⊗e′_1 … e⊗e′_g, e⊗f′_1 … e⊗f′_g, f⊗e′_1 … f⊗e′_g, f⊗f′_1 … f⊗f′_g
//! ```
//!
//! which every other module relies on.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{frac, lcm_big};
use crate::error::{Error, Result};

/// Default bound on `|det|` for explicit coset enumeration.
pub const DESK_DISCRIMINANT_BOUND: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    gram: Vec<Vec<BigInt>>,
    labels: Vec<String>,
    even: bool,
}

impl GramLattice {
    /// Builds a lattice from a symmetric nondegenerate integer Gram matrix.
    /// Labels default to `b1 … bn`.
    pub fn new(gram: Vec<Vec<BigInt>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::MalformedGram("rank must be positive".into()));
        }
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::MalformedGram("Gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::MalformedGram(format!("not symmetric at ({i},{j})")));
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(l) => {
                return Err(Error::MalformedGram(format!(
                    "{} labels for rank {n}",
                    l.len()
                )))
            }
            None => (1..=n).map(|i| format!("b{i}")).collect(),
        };
        if determinant(&gram).is_zero() {
            return Err(Error::DegenerateLattice);
        }
        let even = (0..n).all(|i| gram[i][i].is_even());
        Ok(Self { gram, labels, even })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let gram = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::new(gram, None)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank() {
            return Err(Error::MalformedGram("label count differs from rank".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.gram)
    }

    /// Gram matrix as machine integers, if every entry fits.
    pub fn gram_i64(&self) -> Result<Vec<Vec<i64>>> {
        self.gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        x.to_i64()
                            .ok_or_else(|| Error::MalformedGram("entry exceeds i64".into()))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn pair_int(&self, x: &[i64], y: &[i64]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if *yj != 0 {
                    acc += &self.gram[i][j] * (*xi) * (*yj);
                }
            }
        }
        acc
    }

    pub fn pair_rat(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    acc += xi * yj * BigRational::from_integer(self.gram[i][j].clone());
                }
            }
        }
        acc
    }

    /// Real-valued pairing, used by the floating-point geometry.
    pub fn pair_f64(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                let g = self.gram[i][j].to_f64().unwrap_or(f64::NAN);
                if g != 0.0 {
                    acc += xi * g * yj;
                }
            }
        }
        acc
    }

    /// `(r₊, r₋)` by exact symmetric elimination over ℚ.
    pub fn signature(&self) -> (usize, usize) {
        let a = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        let (pos, neg, zero) = inertia(a);
        debug_assert_eq!(zero, 0);
        (pos, neg)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature().1 == 0
    }

    /// The lattice `L(N)`: all pairings multiplied by `n`.
    ///
    /// Panics if `n` is zero.
    pub fn rescale(&self, n: u64) -> GramLattice {
        assert!(n > 0, "rescale factor must be positive");
        let n = BigInt::from(n);
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x * &n).collect())
            .collect::<Vec<Vec<BigInt>>>();
        let even = (0..gram.len()).all(|i| gram[i][i].is_even());
        GramLattice {
            gram,
            labels: self.labels.clone(),
            even,
        }
    }

    /// Gram matrix of the dual basis, `G⁻¹`.
    pub fn dual_gram(&self) -> Vec<Vec<BigRational>> {
        invert(&self.gram).expect("nondegenerate by construction")
    }

    pub fn discriminant_group(&self) -> DiscriminantGroup {
        let factors = smith_diagonal(self.gram.clone());
        DiscriminantGroup::from_factors(factors)
    }

    /// Least `N` with `N·(x,x) ∈ 2ℤ` for every dual vector `x`.
    pub fn level(&self) -> BigInt {
        let inv = self.dual_gram();
        let n = inv.len();
        let mut level = BigInt::one();
        for i in 0..n {
            for j in 0..n {
                let q = &inv[i][j];
                let need = if i == j {
                    // least m with m·q ∈ 2ℤ
                    let den = q.denom().clone();
                    if (q.numer() * BigInt::one()).is_even() {
                        den
                    } else {
                        den * 2
                    }
                } else {
                    q.denom().clone()
                };
                level = lcm_big(&level, &need);
            }
        }
        level
    }

    /// One representative of each class of `L∨/L`, in `[0,1)^n` coordinates
    /// relative to the lattice basis, sorted lexicographically.
    pub fn coset_representatives(&self, bound: u64) -> Result<Vec<Vec<BigRational>>> {
        let order = self.determinant().abs();
        if order > BigInt::from(bound) {
            return Err(Error::DiscriminantTooLarge {
                order: order.to_string(),
                bound,
            });
        }
        let inv = self.dual_gram();
        let n = self.rank();
        let gens: Vec<Vec<BigRational>> = (0..n)
            .map(|j| (0..n).map(|i| frac(&inv[i][j])).collect())
            .collect();
        let zero = vec![BigRational::zero(); n];
        let mut seen: BTreeSet<Vec<BigRational>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(zero.clone());
        queue.push_back(zero);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y: Vec<BigRational> = x.iter().zip(g).map(|(a, b)| frac(&(a + b))).collect();
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    pub fn to_document(&self) -> Result<LatticeDocument> {
        Ok(LatticeDocument {
            rank: self.rank(),
            gram: self.gram_i64()?,
            labels: self.labels.clone(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(&self.to_document()?).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LatticeDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.into_lattice()
    }
}

/// On-disk form of a lattice: `{ "rank": n, "gram": [[…]], "labels": […] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDocument {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    #[serde(default)]
    pub labels: Vec<String>,
}

impl LatticeDocument {
    pub fn into_lattice(self) -> Result<GramLattice> {
        if self.gram.len() != self.rank {
            return Err(Error::Parse(format!(
                "rank {} but {} Gram rows",
                self.rank,
                self.gram.len()
            )));
        }
        let labels = if self.labels.is_empty() {
            None
        } else {
            Some(self.labels)
        };
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        GramLattice::new(gram, labels)
    }
}

/// The standard symplectic form `J_{2g} = [[0, I],[−I, 0]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    g: usize,
    matrix: Vec<Vec<i64>>,
}

impl SymplecticForm {
    pub fn standard(g: usize) -> Self {
        assert!(g >= 1);
        let n = 2 * g;
        let mut m = vec![vec![0i64; n]; n];
        for k in 0..g {
            m[k][g + k] = 1;
            m[g + k][k] = -1;
        }
        Self { g, matrix: m }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn size(&self) -> usize {
        2 * self.g
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn eval(&self, x: &[i64], y: &[i64]) -> i64 {
        let g = self.g;
        (0..g).map(|k| x[k] * y[g + k] - x[g + k] * y[k]).sum()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == -self.matrix[j][i]))
    }

    pub fn squares_to_minus_identity(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let s: i64 = (0..n).map(|k| self.matrix[i][k] * self.matrix[k][j]).sum();
                s == if i == j { -1 } else { 0 }
            })
        })
    }

    pub fn is_unimodular(&self) -> bool {
        let m: Vec<Vec<BigInt>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        determinant(&m).abs().is_one()
    }
}

/// The even unimodular lattice `Λ ⊗ Λ′` with `γ = ω·ω′`, of rank `4g`.
pub fn tensor_symplectic(g: usize) -> GramLattice {
    assert!(g >= 1, "genus must be positive");
    let j2 = SymplecticForm::standard(1);
    let jg = SymplecticForm::standard(g);
    let n = 2 * g;
    let mut gram = vec![vec![BigInt::zero(); 2 * n]; 2 * n];
    for a in 0..2 {
        for b in 0..2 {
            let w = j2.matrix()[a][b];
            if w == 0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    gram[a * n + i][b * n + j] = BigInt::from(w * jg.matrix()[i][j]);
                }
            }
        }
    }
    GramLattice::new(gram, Some(tensor_labels(g))).expect("tensor lattice is unimodular")
}

pub fn tensor_labels(g: usize) -> Vec<String> {
    let mut labels = Vec::with_capacity(4 * g);
    for left in ["e", "f"] {
        for right in ["e′", "f′"] {
            for k in 1..=g {
                labels.push(format!("{left}⊗{right}{k}"));
            }
        }
    }
    labels
}

/// `L∨/L` as invariant factors `d₁ | d₂ | …`, each `> 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    invariant_factors: Vec<BigInt>,
    order: BigInt,
}

impl DiscriminantGroup {
    fn from_factors(mut all: Vec<BigInt>) -> Self {
        all.sort();
        let invariant_factors: Vec<BigInt> =
            all.into_iter().filter(|d| *d > BigInt::one()).collect();
        let order = invariant_factors.iter().fold(BigInt::one(), |acc, d| acc * d);
        Self {
            invariant_factors,
            order,
        }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// True when the group is `(ℤ/n)^k`.
    pub fn is_homogeneous(&self, n: u64, k: usize) -> bool {
        self.invariant_factors.len() == k
            && self.invariant_factors.iter().all(|d| *d == BigInt::from(n))
    }

    pub fn divisibility_chain_holds(&self) -> bool {
        self.invariant_factors
            .windows(2)
            .all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for DiscriminantGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "(Z/1)^0 (trivial)");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.invariant_factors.len() {
            let d = &self.invariant_factors[i];
            let mut j = i;
            while j < self.invariant_factors.len() && &self.invariant_factors[j] == d {
                j += 1;
            }
            parts.push(format!("(Z/{d})^{}", j - i));
            i = j;
        }
        write!(f, "{}", parts.join(" x "))
    }
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Exact inverse over ℚ; `None` when singular.
pub fn invert(m: &[Vec<BigInt>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        inv.swap(piv, col);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Counts of positive, negative and zero pivots of a symmetric rational
/// matrix under congruence (Sylvester's law of inertia).
pub fn inertia(mut a: Vec<Vec<BigRational>>) -> (usize, usize, usize) {
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    while !a.is_empty() {
        let n = a.len();
        if let Some(i) = (0..n).find(|&i| !a[i][i].is_zero()) {
            swap_sym(&mut a, 0, i);
        } else if let Some((i, j)) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && !a[i][j].is_zero())
        {
            // e_i ← e_i + e_j makes the (i,i) entry 2·a_ij ≠ 0.
            for k in 0..n {
                let t = a[j][k].clone();
                a[i][k] += t;
            }
            for k in 0..n {
                let t = a[k][j].clone();
                a[k][i] += t;
            }
            swap_sym(&mut a, 0, i);
        } else {
            zero += n;
            break;
        }
        let p = a[0][0].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let next: Vec<Vec<BigRational>> = (1..n)
            .map(|i| {
                (1..n)
                    .map(|j| &a[i][j] - &a[i][0] * &a[0][j] / &p)
                    .collect()
            })
            .collect();
        a = next;
    }
    (pos, neg, zero)
}

fn swap_sym<T>(a: &mut [Vec<T>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Diagonal of the Smith normal form (absolute values, zeros dropped).
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for i in t..rows {
                        let v = &q * &a[i][t];
                        a[i][j] -= v;
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn u() -> GramLattice {
        GramLattice::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn a1() -> GramLattice {
        GramLattice::from_rows(&[vec![2]]).unwrap()
    }

    #[test]
    fn tensor_g1_gram_by_hand() {
        // ω(e,f) = 1, ω′(e′,f′) = 1: γ(e⊗e′, f⊗f′) = 1, γ(e⊗f′, f⊗e′) = −1.
        let l = tensor_symplectic(1);
        let expected = [
            [0, 0, 0, 1],
            [0, 0, -1, 0],
            [0, -1, 0, 0],
            [1, 0, 0, 0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(l.gram()[i][j], BigInt::from(expected[i][j]), "({i},{j})");
            }
        }
        assert_eq!(l.determinant(), BigInt::one());
        assert!(l.is_even());
        assert_eq!(l.labels()[0], "e⊗e′1");
        assert_eq!(l.labels()[3], "f⊗f′1");
    }

    #[test]
    fn signatures() {
        assert_eq!(u().signature(), (1, 1));
        assert_eq!(a1().signature(), (1, 0));
        assert_eq!(tensor_symplectic(2).signature(), (4, 4));
        let neg = GramLattice::from_rows(&[vec![-2, 1], vec![1, -2]]).unwrap();
        assert_eq!(neg.signature(), (0, 2));
    }

    #[test]
    fn rescale_examples() {
        let u3 = u().rescale(3);
        assert_eq!(u3.gram_i64().unwrap(), vec![vec![0, 3], vec![3, 0]]);
        assert_eq!(a1().rescale(1), a1());
    }

    #[test]
    fn discriminant_examples() {
        assert!(tensor_symplectic(2).discriminant_group().is_trivial());
        let d = a1().discriminant_group();
        assert_eq!(d.invariant_factors(), &[BigInt::from(2)]);
        let r = tensor_symplectic(1).rescale(6).discriminant_group();
        assert!(r.is_homogeneous(6, 4));
        assert_eq!(r.to_string(), "(Z/6)^4");
        assert_eq!(
            tensor_symplectic(2).discriminant_group().to_string(),
            "(Z/1)^0 (trivial)"
        );
        let mixed = GramLattice::from_rows(&[vec![2, 0], vec![0, 4]]).unwrap();
        let g = mixed.discriminant_group();
        assert_eq!(g.to_string(), "(Z/2)^1 x (Z/4)^1");
        assert!(g.divisibility_chain_holds());
    }

    #[test]
    fn smith_handles_non_diagonal_input() {
        // [[2,4],[6,8]] has Smith form diag(2, 4).
        let m = vec![
            vec![BigInt::from(2), BigInt::from(4)],
            vec![BigInt::from(6), BigInt::from(8)],
        ];
        assert_eq!(smith_diagonal(m), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn levels() {
        assert_eq!(u().level(), BigInt::one());
        assert_eq!(a1().level(), BigInt::from(4));
        for n in 1..8u64 {
            assert_eq!(u().rescale(n).level(), BigInt::from(n));
        }
    }

    #[test]
    fn coset_examples() {
        assert_eq!(u().coset_representatives(16).unwrap(), vec![vec![rat(0, 1), rat(0, 1)]]);
        assert_eq!(
            a1().coset_representatives(16).unwrap(),
            vec![vec![rat(0, 1)], vec![rat(1, 2)]]
        );
        assert_eq!(u().rescale(2).coset_representatives(16).unwrap().len(), 4);
        assert!(matches!(
            u().rescale(100).coset_representatives(16),
            Err(Error::DiscriminantTooLarge { .. })
        ));
    }

    #[test]
    fn degenerate_and_malformed_inputs_are_rejected() {
        assert_eq!(
            GramLattice::from_rows(&[vec![1, 1], vec![1, 1]]),
            Err(Error::DegenerateLattice)
        );
        assert!(matches!(
            GramLattice::from_rows(&[vec![1, 2], vec![3, 1]]),
            Err(Error::MalformedGram(_))
        ));
    }

    #[test]
    fn json_round_trip_is_deterministic() {
        let l = tensor_symplectic(1);
        let s = l.to_json().unwrap();
        assert!(s.starts_with("{\"rank\":4,\"gram\":[[0,0,0,1]"));
        assert_eq!(GramLattice::from_json(&s).unwrap(), l);
        assert!(matches!(GramLattice::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn standard_form_axioms() {
        for g in 1..5 {
            let j = SymplecticForm::standard(g);
            assert!(j.is_antisymmetric());
            assert!(j.squares_to_minus_identity());
            assert!(j.is_unimodular());
        }
    }
}
