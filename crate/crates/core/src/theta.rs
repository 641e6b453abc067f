//! Positive-definite lattice enumeration and theta series.
//!
//! Vectors of a coset `c + L` are stored as integer numerators over a
//! common denominator `D`, so norms are exact rationals. Enumeration runs a
//! Fincke–Pohst search in floating point with a small slack and rechecks
//! every candidate exactly.
//!
//! Gaussian tails. With `G = UᵀΔU` (`U` unit upper triangular, pivots
//! `q_i`), for any `θ ∈ (0, 1)`
//!
//! ```text
//! Σ_{Q(x) > R} e^{−π v Q(x)} ≤ e^{−π v θ R} · Π_i (1 + (v (1−θ) q_i)^{−1/2})
//! ```
//!
//! and `R` is chosen as the smallest value over a grid of `θ` that pushes
//! the right side below the requested accuracy.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{frac, rat_to_f64};
use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::scalar::Real;

/// Default cap on the number of enumerated vectors.
pub const DEFAULT_BUDGET: usize = 20_000_000;

/// Standard `E₈` Gram matrix (Cartan matrix of the `E₈` diagram).
pub fn e8() -> GramLattice {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)];
    let mut g = vec![vec![0i64; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (i, j) in edges {
        g[i][j] = -1;
        g[j][i] = -1;
    }
    GramLattice::from_rows(&g).expect("E8 is nondegenerate")
}

/// Exact `G = UᵀΔU`: pivots `q_i` and the strict upper part `μ_ij`.
pub fn ldl(lat: &GramLattice) -> Result<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let n = lat.rank();
    let g: Vec<Vec<BigRational>> = lat
        .gram()
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut q = vec![BigRational::zero(); n];
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut qi = g[i][i].clone();
        for k in 0..i {
            qi -= &mu[k][i] * &mu[k][i] * &q[k];
        }
        if !qi.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        for j in i + 1..n {
            let mut v = g[i][j].clone();
            for k in 0..i {
                v -= &mu[k][i] * &mu[k][j] * &q[k];
            }
            mu[i][j] = v / &qi;
        }
        q[i] = qi;
    }
    Ok((q, mu))
}

/// Vectors of `coset + L` grouped by exact norm `(x, x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortVectorList {
    /// Common denominator of every stored coordinate.
    pub denom: u64,
    /// Norm → list of coordinate numerators (coordinates = numerator / denom).
    pub by_norm: BTreeMap<BigRational, Vec<Vec<i64>>>,
}

impl ShortVectorList {
    pub fn count(&self) -> usize {
        self.by_norm.values().map(Vec::len).sum()
    }

    pub fn count_with_norm(&self, norm: &BigRational) -> usize {
        self.by_norm.get(norm).map_or(0, Vec::len)
    }

    pub fn closed_under_negation(&self) -> bool {
        self.by_norm.values().all(|vs| {
            let set: std::collections::BTreeSet<&Vec<i64>> = vs.iter().collect();
            vs.iter().all(|v| {
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                set.contains(&neg)
            })
        })
    }
}

struct Search {
    n: usize,
    q: Vec<f64>,
    mu: Vec<Vec<f64>>,
    center: Vec<f64>,
    gram: Vec<Vec<i64>>,
    denom: i64,
    offset: Vec<i64>,
}

impl Search {
    fn new(lat: &GramLattice, coset: &[BigRational]) -> Result<Self> {
        let n = lat.rank();
        if coset.len() != n {
            return Err(Error::Shape(format!("coset of length {} for rank {n}", coset.len())));
        }
        let (q, mu) = ldl(lat)?;
        let reduced: Vec<BigRational> = coset.iter().map(frac).collect();
        let denom = reduced
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let denom_i = denom
            .to_i64()
            .ok_or_else(|| Error::Unsupported("coset denominator too large".into()))?;
        let offset = reduced
            .iter()
            .map(|c| (c * BigRational::from_integer(denom.clone())).to_integer().to_i64().expect("fits"))
            .collect();
        Ok(Self {
            n,
            q: q.iter().map(rat_to_f64).collect(),
            mu: mu.iter().map(|r| r.iter().map(rat_to_f64).collect()).collect(),
            center: reduced.iter().map(rat_to_f64).collect(),
            gram: lat.gram_i64()?,
            denom: denom_i,
            offset,
        })
    }

    fn exact_norm_num(&self, v: &[i64]) -> i128 {
        let mut acc = 0i128;
        for i in 0..self.n {
            if v[i] == 0 {
                continue;
            }
            let mut row = 0i128;
            for j in 0..self.n {
                row += self.gram[i][j] as i128 * v[j] as i128;
            }
            acc += v[i] as i128 * row;
        }
        acc
    }

    /// Integer-shift range at level `i` given `s_i` and the remaining budget.
    fn range(&self, i: usize, s: f64, budget: f64) -> (i64, i64) {
        let r = (budget.max(0.0) / self.q[i]).sqrt();
        let slack = 1e-7 * (1.0 + r + s.abs());
        let lo = (-s - r - self.center[i] - slack).ceil() as i64;
        let hi = (-s + r - self.center[i] + slack).floor() as i64;
        (lo, hi)
    }

    /// Depth-first enumeration with the outermost coordinate fixed.
    fn run_stripe(&self, top: i64, bound: f64, exact_bound: &BigRational, cap: usize) -> Result<Vec<(i128, Vec<i64>)>> {
        let n = self.n;
        let mut out = Vec::new();
        let mut x = vec![0f64; n];
        let mut shifts = vec![0i64; n];
        let mut budget = vec![0f64; n + 1];
        let mut hi = vec![0i64; n];
        let i0 = n - 1;
        shifts[i0] = top;
        x[i0] = self.center[i0] + top as f64;
        let t = x[i0];
        budget[i0] = bound - self.q[i0] * t * t;
        if budget[i0] < -1e-7 * (1.0 + bound) {
            return Ok(out);
        }
        let exact_num = exact_bound * BigRational::from_integer(BigInt::from(self.denom * self.denom));
        let limit = exact_num.floor().to_integer().to_i128().unwrap_or(i128::MAX);
        if n == 1 {
            self.emit(&shifts, limit, &mut out);
            return Ok(out);
        }
        // level i works on coordinate i, with budget[i+1] remaining
        let mut i = n - 2;
        let s_of = |x: &[f64], i: usize| -> f64 { (i + 1..n).map(|j| self.mu[i][j] * x[j]).sum() };
        let (lo, h) = self.range(i, s_of(&x, i), budget[i + 1]);
        shifts[i] = lo - 1;
        hi[i] = h;
        loop {
            shifts[i] += 1;
            if shifts[i] > hi[i] {
                if i == n - 2 {
                    break;
                }
                i += 1;
                continue;
            }
            x[i] = self.center[i] + shifts[i] as f64;
            let s = s_of(&x, i);
            let y = x[i] + s;
            budget[i] = budget[i + 1] - self.q[i] * y * y;
            if budget[i] < -1e-7 * (1.0 + bound) {
                continue;
            }
            if i == 0 {
                self.emit(&shifts, limit, &mut out);
                if out.len() > cap {
                    return Err(Error::BudgetExceeded(format!("more than {cap} vectors")));
                }
                continue;
            }
            i -= 1;
            let (lo, h) = self.range(i, s_of(&x, i), budget[i + 1]);
            shifts[i] = lo - 1;
            hi[i] = h;
        }
        Ok(out)
    }

    fn emit(&self, shifts: &[i64], limit: i128, out: &mut Vec<(i128, Vec<i64>)>) {
        let v: Vec<i64> = shifts
            .iter()
            .zip(&self.offset)
            .map(|(s, o)| s * self.denom + o)
            .collect();
        let num = self.exact_norm_num(&v);
        if num <= limit {
            out.push((num, v));
        }
    }

    fn top_range(&self, bound: f64) -> (i64, i64) {
        self.range(self.n - 1, 0.0, bound)
    }
}

/// Every `x ∈ coset + L` with `(x, x) ≤ maxnorm`.
pub fn short_vectors(lat: &GramLattice, coset: &[BigRational], maxnorm: &BigRational) -> Result<ShortVectorList> {
    short_vectors_budget(lat, coset, maxnorm, DEFAULT_BUDGET)
}

pub fn short_vectors_budget(
    lat: &GramLattice,
    coset: &[BigRational],
    maxnorm: &BigRational,
    cap: usize,
) -> Result<ShortVectorList> {
    let search = Search::new(lat, coset)?;
    let bound = rat_to_f64(maxnorm);
    let mut by_norm: BTreeMap<BigRational, Vec<Vec<i64>>> = BTreeMap::new();
    if maxnorm.is_negative() {
        return Ok(ShortVectorList { denom: search.denom as u64, by_norm });
    }
    let (lo, hi) = search.top_range(bound);
    let stripes: Vec<Vec<(i128, Vec<i64>)>> = (lo..=hi)
        .into_par_iter()
        .map(|top| search.run_stripe(top, bound, maxnorm, cap))
        .collect::<Result<_>>()?;
    let total: usize = stripes.iter().map(Vec::len).sum();
    if total > cap {
        return Err(Error::BudgetExceeded(format!("{total} vectors exceed {cap}")));
    }
    let d2 = BigInt::from(search.denom) * BigInt::from(search.denom);
    for (num, v) in stripes.into_iter().flatten() {
        by_norm
            .entry(BigRational::new(BigInt::from(num), d2.clone()))
            .or_default()
            .push(v);
    }
    for vs in by_norm.values_mut() {
        vs.sort();
    }
    Ok(ShortVectorList {
        denom: search.denom as u64,
        by_norm,
    })
}

/// Truncated `Σ c_n q^{n/denom}` with every stored exponent `< prec`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeries {
    pub denom: u64,
    pub prec: u64,
    pub coeffs: BTreeMap<u64, BigInt>,
}

impl QSeries {
    pub fn coefficient(&self, num: u64) -> BigInt {
        self.coeffs.get(&num).cloned().unwrap_or_default()
    }

    /// Coefficient of `q^e` for a rational exponent.
    pub fn coefficient_at(&self, e: &BigRational) -> BigInt {
        let n = e * BigRational::from_integer(BigInt::from(self.denom));
        if !n.is_integer() || n.is_negative() {
            return BigInt::zero();
        }
        self.coefficient(n.to_integer().to_u64().unwrap_or(u64::MAX))
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(0)
    }

    /// Coefficients at integer exponents `0, 1, …, prec − 1`.
    pub fn integral_coefficients(&self) -> Vec<BigInt> {
        (0..self.prec).map(|k| self.coefficient(k * self.denom)).collect()
    }

    /// `Σ c_n e^{2πiτ n/denom}`.
    pub fn eval<T: Real>(&self, tau: Complex<T>) -> Complex<T> {
        let two_pi_i = Complex::new(T::zero(), T::lit(2.0) * T::PI());
        self.coeffs.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (n, c)| {
            let e = T::lit(*n as f64) / T::lit(self.denom as f64);
            acc + (two_pi_i * tau * e).exp() * T::lit(c.to_f64().unwrap_or(f64::NAN))
        })
    }

    /// Reexpresses the series over a finer exponent denominator.
    pub fn with_denom(&self, denom: u64) -> Result<Self> {
        if denom % self.denom != 0 {
            return Err(Error::Shape(format!("{denom} is not a multiple of {}", self.denom)));
        }
        let f = denom / self.denom;
        Ok(Self {
            denom,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|(n, c)| (n * f, c.clone())).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.denom != other.denom || self.prec != other.prec {
            return Err(Error::Shape("q-series with different denominators or precision".into()));
        }
        let mut coeffs = self.coeffs.clone();
        for (n, c) in &other.coeffs {
            *coeffs.entry(*n).or_default() += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Self { denom: self.denom, prec: self.prec, coeffs })
    }

    /// `{"denom": n, "prec": p, "coeffs": {"num": coeff, …}}`, numerators
    /// ascending.
    pub fn to_json(&self) -> String {
        let body: Vec<String> = self.coeffs.iter().map(|(n, c)| format!("\"{n}\":{c}")).collect();
        format!(
            "{{\"denom\":{},\"prec\":{},\"coeffs\":{{{}}}}}",
            self.denom,
            self.prec,
            body.join(",")
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            denom: u64,
            prec: u64,
            coeffs: BTreeMap<String, serde_json::Value>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut coeffs = BTreeMap::new();
        for (k, v) in doc.coeffs {
            let n: u64 = k.parse().map_err(|_| Error::Parse(format!("bad exponent {k}")))?;
            let c: BigInt = match v {
                serde_json::Value::Number(x) => x.to_string().parse(),
                serde_json::Value::String(x) => x.parse(),
                _ => return Err(Error::Parse("coefficient must be an integer".into())),
            }
            .map_err(|_| Error::Parse("coefficient must be an integer".into()))?;
            coeffs.insert(n, c);
        }
        Ok(Self { denom: doc.denom, prec: doc.prec, coeffs })
    }

    /// CSV rows `exponent,numerator,denom,coefficient`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["exponent", "numerator", "denom", "coefficient"])
            .map_err(|e| Error::Parse(e.to_string()))?;
        for (n, c) in &self.coeffs {
            let e = BigRational::new(BigInt::from(*n), BigInt::from(self.denom));
            w.write_record([e.to_string(), n.to_string(), self.denom.to_string(), c.to_string()])
                .map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn require_dual(lat: &GramLattice, coset: &[BigRational]) -> Result<()> {
    for row in lat.gram() {
        let s = row
            .iter()
            .zip(coset)
            .fold(BigRational::zero(), |acc, (g, c)| acc + BigRational::from_integer(g.clone()) * c);
        if !s.is_integer() {
            return Err(Error::Shape("coset representative is not in the dual lattice".into()));
        }
    }
    Ok(())
}

/// `Θ_{L,δ} = Σ_{x∈δ} q^{(x,x)/2}` up to (excluding) `q^prec`, with exponent
/// denominator equal to the lattice level.
pub fn theta_coset(lat: &GramLattice, coset: &[BigRational], prec: u64) -> Result<QSeries> {
    if !lat.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    if !lat.is_even() {
        return Err(Error::MalformedGram("theta series need an even lattice".into()));
    }
    require_dual(lat, coset)?;
    let level = lat
        .level()
        .to_u64()
        .ok_or_else(|| Error::Unsupported("level too large".into()))?;
    let maxnorm = BigRational::from_integer(BigInt::from(2 * prec));
    let list = short_vectors(lat, coset, &maxnorm)?;
    let mut coeffs = BTreeMap::new();
    for (norm, vs) in &list.by_norm {
        let e = norm * BigRational::new(BigInt::from(level), BigInt::from(2));
        if !e.is_integer() {
            return Err(Error::Shape(format!("norm {norm} is off the level grid")));
        }
        let num = e.to_integer().to_u64().expect("nonnegative");
        if num < prec * level {
            coeffs.insert(num, BigInt::from(vs.len()));
        }
    }
    Ok(QSeries { denom: level, prec, coeffs })
}

/// Theta series of `L∨` summed directly over the dual lattice, with the
/// same exponent denominator as [`theta_coset`].
pub fn theta_dual(lat: &GramLattice, prec: u64) -> Result<QSeries> {
    let level = lat.level().to_u64().ok_or_else(|| Error::Unsupported("level too large".into()))?;
    let (dual, det) = integral_dual(lat)?;
    // Q∨(y) = Q_int(y)/det; exponent Q∨/2 = n/level
    let maxnorm = BigRational::from_integer(BigInt::from(2 * prec) * &det);
    let list = short_vectors(&dual, &vec![BigRational::zero(); lat.rank()], &maxnorm)?;
    let mut coeffs = BTreeMap::new();
    for (norm, vs) in &list.by_norm {
        let e = norm * BigRational::new(BigInt::from(level), BigInt::from(2) * &det);
        if !e.is_integer() {
            return Err(Error::Shape("dual norm off the level grid".into()));
        }
        let num = e.to_integer().to_u64().expect("nonnegative");
        if num < prec * level {
            coeffs.insert(num, BigInt::from(vs.len()));
        }
    }
    Ok(QSeries { denom: level, prec, coeffs })
}

/// `det(G)·G⁻¹` as an integral lattice, together with `det(G)`.
pub fn integral_dual(lat: &GramLattice) -> Result<(GramLattice, BigInt)> {
    let det = lat.determinant().abs();
    let inv = lat.dual_gram();
    let scale = BigRational::from_integer(det.clone());
    let gram: Vec<Vec<BigInt>> = inv
        .iter()
        .map(|r| r.iter().map(|x| (x * &scale).to_integer()).collect())
        .collect();
    Ok((GramLattice::new(gram, None)?, det))
}

/// Norm radius `R` such that the Gaussian tail beyond `R` is at most `eps`
/// for the weight `e^{−π v Q}`.
pub fn tail_radius(pivots: &[f64], v: f64, eps: f64) -> f64 {
    let mut best = f64::INFINITY;
    for k in 1..100 {
        let theta = k as f64 / 100.0;
        let log_c: f64 = pivots
            .iter()
            .map(|q| (1.0 + (1.0 / (v * (1.0 - theta) * q)).sqrt()).ln())
            .sum();
        let r = (log_c - eps.ln()) / (std::f64::consts::PI * v * theta);
        best = best.min(r);
    }
    best.max(0.0)
}

/// The bound itself, for a given radius, minimised over the same grid.
pub fn tail_bound(pivots: &[f64], v: f64, radius: f64) -> f64 {
    (1..100)
        .map(|k| {
            let theta = k as f64 / 100.0;
            let c: f64 = pivots.iter().map(|q| 1.0 + (1.0 / (v * (1.0 - theta) * q)).sqrt()).product();
            (-std::f64::consts::PI * v * theta * radius).exp() * c
        })
        .fold(f64::INFINITY, f64::min)
}

/// `Σ_{x ∈ coset+L} e^{−π v Q(x)/scale}` and its certified tail bound.
fn gaussian_sum(lat: &GramLattice, coset: &[BigRational], v: f64, scale: f64, eps: f64) -> Result<(f64, f64)> {
    let (q, _) = ldl(lat)?;
    let pivots: Vec<f64> = q.iter().map(|x| rat_to_f64(x) / scale).collect();
    let r = tail_radius(&pivots, v, eps);
    let bound = BigRational::from_float(r * scale).ok_or_else(|| Error::BudgetExceeded("radius".into()))?;
    let list = short_vectors(lat, coset, &bound)?;
    let mut sum = 0.0;
    // sum small terms first
    for (norm, vs) in list.by_norm.iter().rev() {
        sum += vs.len() as f64 * (-std::f64::consts::PI * v * rat_to_f64(norm) / scale).exp();
    }
    Ok((sum, tail_bound(&pivots, v, r)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericTheta {
    pub re: f64,
    pub im: f64,
    pub tail_bound: f64,
    pub radius: f64,
    pub terms: usize,
}

/// `Σ_{x ∈ coset+L} e^{π i τ (x,x)}` with a certified tail `≤ 1e−12`.
pub fn theta_numeric<T: Real>(lat: &GramLattice, coset: &[BigRational], tau: Complex<T>) -> Result<(Complex<T>, NumericTheta)> {
    if tau.im <= T::zero() {
        return Err(Error::NotInUpperHalfSpace(format!("Im τ = {}", tau.im)));
    }
    let (q, _) = ldl(lat)?;
    let pivots: Vec<f64> = q.iter().map(rat_to_f64).collect();
    let v = tau.im.to_f64_lossy();
    let eps = 1e-13;
    let r = tail_radius(&pivots, v, eps);
    let bound = BigRational::from_float(r).ok_or_else(|| Error::BudgetExceeded("radius".into()))?;
    let list = short_vectors(lat, coset, &bound)?;
    let pi_i_tau = Complex::new(T::zero(), T::PI()) * tau;
    let mut sum = Complex::new(T::zero(), T::zero());
    for (norm, vs) in list.by_norm.iter().rev() {
        let n = T::lit(rat_to_f64(norm));
        sum = sum + (pi_i_tau * n).exp() * T::lit(vs.len() as f64);
    }
    let tb = tail_bound(&pivots, v, r);
    if tb > 1e-12 {
        return Err(Error::BudgetExceeded(format!("tail bound {tb:e}")));
    }
    let s64 = (sum.re.to_f64_lossy(), sum.im.to_f64_lossy());
    Ok((
        sum,
        NumericTheta {
            re: s64.0,
            im: s64.1,
            tail_bound: tb,
            radius: r,
            terms: list.count(),
        },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoissonReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tail_bound: f64,
}

/// Compares `Σ_L e^{−π t Q}` with `det^{−1/2} t^{−r/2} Σ_{L∨} e^{−π Q∨/t}`.
pub fn poisson_check(lat: &GramLattice, t: f64) -> Result<PoissonReport> {
    if !lat.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let r = lat.rank();
    let zero = vec![BigRational::zero(); r];
    let eps = 1e-14;
    let (lhs, tail_l) = gaussian_sum(lat, &zero, t, 1.0, eps)?;
    let (dual, det) = integral_dual(lat)?;
    let detf = det.to_f64().unwrap_or(f64::NAN);
    let (dsum, tail_r) = gaussian_sum(&dual, &zero, 1.0 / t, detf, eps)?;
    let factor = detf.powf(-0.5) * t.powf(-(r as f64) / 2.0);
    let rhs = factor * dsum;
    Ok(PoissonReport {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        tail_bound: tail_l + factor * tail_r,
    })
}

/// `|θ(−1/τ) − τ^{r/2}·θ(τ)|` for an even unimodular lattice (`r ≡ 0 mod 8`).
pub fn s_transform_residual(lat: &GramLattice, tau: Complex<f64>) -> Result<f64> {
    if !lat.determinant().abs().is_one() || !lat.is_even() {
        return Err(Error::Unsupported("S-transform check needs an even unimodular lattice".into()));
    }
    let zero = vec![BigRational::zero(); lat.rank()];
    let (a, _) = theta_numeric(lat, &zero, -tau.inv())?;
    let (b, _) = theta_numeric(lat, &zero, tau)?;
    let w = tau.powi(lat.rank() as i32 / 2);
    Ok((a - w * b).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn zero(n: usize) -> Vec<BigRational> {
        vec![BigRational::zero(); n]
    }

    fn a1() -> GramLattice {
        GramLattice::from_rows(&[vec![2]]).unwrap()
    }

    #[test]
    fn rank_one_short_vectors() {
        let l = short_vectors(&a1(), &zero(1), &rat(2, 1)).unwrap();
        assert_eq!(l.count(), 3);
        assert_eq!(l.count_with_norm(&rat(2, 1)), 2);
        let z2 = GramLattice::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        let l = short_vectors(&z2, &zero(2), &rat(1, 1)).unwrap();
        assert_eq!(l.count_with_norm(&rat(1, 1)), 4);
    }

    #[test]
    fn e8_is_even_unimodular() {
        let e = e8();
        assert!(e.is_even());
        assert_eq!(e.determinant(), BigInt::one());
        assert!(e.is_positive_definite());
    }

    #[test]
    fn rank_one_theta_series() {
        let t = theta_coset(&a1(), &zero(1), 10).unwrap();
        assert_eq!(t.denom, 4);
        let want = [(0u64, 1), (4, 2), (16, 2), (36, 2)];
        for (n, c) in want {
            assert_eq!(t.coefficient(n), BigInt::from(c), "q^{}/4", n);
        }
        assert_eq!(t.coeffs.len(), 4);
        let h = theta_coset(&a1(), &[rat(1, 2)], 3).unwrap();
        assert_eq!(h.constant_term(), BigInt::zero());
        assert_eq!(h.coefficient_at(&rat(1, 4)), BigInt::from(2));
        assert_eq!(h.coefficient_at(&rat(9, 4)), BigInt::from(2));
        assert_eq!(h.coeffs.len(), 2);
    }

    #[test]
    fn e8_series_head() {
        let t = theta_coset(&e8(), &zero(8), 3).unwrap();
        assert_eq!(t.integral_coefficients(), vec![BigInt::from(1), BigInt::from(240), BigInt::from(2160)]);
    }

    #[test]
    fn numeric_matches_series_and_is_periodic() {
        let lat = GramLattice::from_rows(&[vec![2, 1], vec![1, 4]]).unwrap();
        let c = zero(2);
        let tau = Complex::new(0.0, 2.0);
        let (num, info) = theta_numeric(&lat, &c, tau).unwrap();
        assert!(info.tail_bound < 1e-12);
        let series = theta_coset(&lat, &c, 12).unwrap();
        assert!((series.eval(tau) - num).norm() < 1e-10);
        let level = lat.level().to_f64().unwrap();
        let tau = Complex::new(0.17, 0.6);
        let (a, _) = theta_numeric(&lat, &c, tau).unwrap();
        let (b, _) = theta_numeric(&lat, &c, tau + level).unwrap();
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn e8_modularity() {
        let r = s_transform_residual(&e8(), Complex::new(1.0 / 3.0, 1.0)).unwrap();
        assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn poisson_examples() {
        let z = GramLattice::from_rows(&[vec![1]]).unwrap();
        assert!(poisson_check(&z, 1.0).unwrap().residual < 1e-12);
        assert!(poisson_check(&a1(), 0.7).unwrap().residual < 1e-10);
        assert!(poisson_check(&a1().rescale(3), 1.3).unwrap().residual < 1e-10);
    }

    #[test]
    fn serialisation() {
        let t = theta_coset(&a1(), &zero(1), 3).unwrap();
        assert_eq!(t.to_json(), r#"{"denom":4,"prec":3,"coeffs":{"0":1,"4":2}}"#);
        assert_eq!(QSeries::from_json(&t.to_json()).unwrap(), t);
        let csv = t.to_csv().unwrap();
        assert!(csv.starts_with("exponent,numerator,denom,coefficient\n0,0,4,1\n1,4,4,2\n"));
    }

    #[test]
    fn coset_sum_rule_small() {
        let lat = GramLattice::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let mut total: Option<QSeries> = None;
        for c in lat.coset_representatives(64).unwrap() {
            let t = theta_coset(&lat, &c, 6).unwrap();
            total = Some(match total {
                None => t,
                Some(acc) => acc.add(&t).unwrap(),
            });
        }
        assert_eq!(total.unwrap(), theta_dual(&lat, 6).unwrap());
    }

    #[test]
    fn indefinite_rejected() {
        let u = GramLattice::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(short_vectors(&u, &zero(2), &rat(2, 1)), Err(Error::NotPositiveDefinite));
        assert!(matches!(
            short_vectors_budget(&e8(), &zero(8), &rat(4, 1), 100),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
