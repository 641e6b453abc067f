//! Elements of `ℚ(μ_{p^∞})` written in the power basis of roots of unity.
//!
//! `e(r) = e^{2πi r}` for `r ∈ ℤ[1/p] / ℤ`. A term `e(a/p^k)` (lowest
//! terms, `k ≥ 1`) is a basis element when `a < (p−1)·p^{k−1}`; otherwise
//! the cyclotomic relation rewrites it as minus the sum of the `p−1`
//! conjugates `e((b + j·p^{k−1})/p^k)`, `j < p−1`, `b = a mod p^{k−1}`.
//! The rule is the same at every level, so the normal form is canonical.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{frac, ord_int, p_pow, rat_to_f64};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclotomicScalar {
    p: u64,
    terms: BTreeMap<BigRational, BigRational>,
}

/// `{x}_p`: the representative of `x mod ℤ_p` in `ℤ[1/p] ∩ [0, 1)`.
pub fn p_fractional_part(p: u64, x: &BigRational) -> BigRational {
    let pb = BigInt::from(p);
    let den = x.denom().clone();
    let k = ord_int(p, &den).unwrap_or(0);
    if k == 0 {
        return BigRational::zero();
    }
    let pk = num_traits::pow(pb, k as usize);
    let m = &den / &pk;
    // x = n / (p^k m); find c with c ≡ n·m^{-1} (mod p^k)
    let inv = m.extended_gcd(&pk).x.mod_floor(&pk);
    let c = (x.numer() * inv).mod_floor(&pk);
    BigRational::new(c, pk)
}

impl CyclotomicScalar {
    pub fn zero(p: u64) -> Self {
        Self { p, terms: BTreeMap::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::rational(p, BigRational::one())
    }

    pub fn rational(p: u64, q: BigRational) -> Self {
        let mut s = Self::zero(p);
        s.add_term(BigRational::zero(), q);
        s
    }

    /// `e(r)` for `r` with `p`-power denominator (reduced mod 1).
    pub fn root(p: u64, r: &BigRational) -> Self {
        let mut s = Self::zero(p);
        s.add_term(frac(r), BigRational::one());
        s
    }

    /// `ψ_p(x) = e^{−2πi {x}_p}`.
    pub fn psi(p: u64, x: &BigRational) -> Self {
        Self::root(p, &frac(&-p_fractional_part(p, x)))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &BTreeMap<BigRational, BigRational> {
        &self.terms
    }

    fn level(&self, r: &BigRational) -> usize {
        ord_int(self.p, r.denom()).unwrap_or(0) as usize
    }

    fn add_term(&mut self, r: BigRational, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let k = self.level(&r);
        if k >= 1 {
            let pk1 = num_traits::pow(BigInt::from(self.p), k - 1);
            let a = r.numer().clone();
            let bound = &pk1 * BigInt::from(self.p - 1);
            if a >= bound {
                let b = a.mod_floor(&pk1);
                let pk = &pk1 * BigInt::from(self.p);
                for j in 0..self.p - 1 {
                    let e = BigRational::new(&b + &pk1 * BigInt::from(j), pk.clone());
                    self.add_term(e, -c.clone());
                }
                return;
            }
        }
        let slot = self.terms.entry(r.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&r);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if it lies in `ℚ`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BigRational::zero()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let mut out = self.clone();
        for (r, c) in &other.terms {
            out.add_term(r.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut out = Self::zero(self.p);
        if q.is_zero() {
            return out;
        }
        for (r, c) in &self.terms {
            out.terms.insert(r.clone(), c * q);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let mut out = Self::zero(self.p);
        for (r, c) in &self.terms {
            for (s, d) in &other.terms {
                out.add_term(frac(&(r + s)), c * d);
            }
        }
        out
    }

    /// Numeric value under `e(r) ↦ e^{2πi r}`.
    pub fn to_complex(&self) -> Complex<f64> {
        self.terms.iter().fold(Complex::new(0.0, 0.0), |acc, (r, c)| {
            let t = 2.0 * std::f64::consts::PI * rat_to_f64(r);
            acc + Complex::new(t.cos(), t.sin()) * rat_to_f64(c)
        })
    }
}

impl fmt::Display for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, c)| if r.is_zero() { c.to_string() } else { format!("{c}·e({r})") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `x ∈ p^k ℤ_p`.
pub fn in_ball(p: u64, x: &BigRational, k: i64) -> bool {
    if x.is_zero() {
        return true;
    }
    crate::arith::ord_rat(p, x).expect("nonzero") >= k
}

/// `ord_p(x)` with `None` for zero, re-exported for the submodules.
pub fn ord(p: u64, x: &BigRational) -> Option<i64> {
    crate::arith::ord_rat(p, x)
}

pub(crate) fn abs_p(p: u64, x: &BigRational) -> BigRational {
    match ord(p, x) {
        None => BigRational::zero(),
        Some(k) => p_pow(p, -k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn full_root_sums_vanish() {
        for p in [2u64, 3, 5, 7] {
            let mut s = CyclotomicScalar::zero(p);
            for j in 0..p as i64 {
                s = s.add(&CyclotomicScalar::root(p, &rat(j, p as i64)));
            }
            assert!(s.is_zero(), "p={p}");
            // level two: sum over a coset of μ_p inside μ_{p²}
            let mut t = CyclotomicScalar::zero(p);
            let p2 = (p * p) as i64;
            for j in 0..p as i64 {
                t = t.add(&CyclotomicScalar::root(p, &rat(1 + j * p as i64, p2)));
            }
            assert!(t.is_zero(), "p={p}");
        }
    }

    #[test]
    fn normal_form_is_canonical_and_numeric() {
        let p = 5;
        let a = CyclotomicScalar::root(p, &rat(4, 5));
        let b = CyclotomicScalar::root(p, &rat(1, 5))
            .add(&CyclotomicScalar::root(p, &rat(2, 5)))
            .add(&CyclotomicScalar::root(p, &rat(3, 5)))
            .add(&CyclotomicScalar::one(p))
            .neg();
        assert_eq!(a, b);
        assert!((a.to_complex() - b.to_complex()).norm() < 1e-12);
        let x = CyclotomicScalar::root(p, &rat(7, 25)).mul(&CyclotomicScalar::root(p, &rat(18, 25)));
        assert_eq!(x, CyclotomicScalar::one(p));
    }

    #[test]
    fn psi_conventions() {
        assert_eq!(CyclotomicScalar::psi(3, &rat(5, 1)), CyclotomicScalar::one(3));
        let v = CyclotomicScalar::psi(3, &rat(1, 3)).to_complex();
        let t = -2.0 * std::f64::consts::PI / 3.0;
        assert!((v - Complex::new(t.cos(), t.sin())).norm() < 1e-12);
        // 1/6 ≡ 1/6 − ... : {1/6}_3 = 2/3 since 1/6 − 2/3 = −1/2 ∈ ℤ_3
        assert_eq!(p_fractional_part(3, &rat(1, 6)), rat(2, 3));
        assert_eq!(p_fractional_part(5, &rat(3, 7)), rat(0, 1));
    }
}
