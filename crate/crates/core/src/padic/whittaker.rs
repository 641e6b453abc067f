//! Newform Whittaker values on the torus and the factored local zeta integral.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::scalar::ord;
use crate::arith::{p_pow, rat_to_f64};
use crate::{Error, Result};

/// `coeff · Π α_i^{e_i} · p^{h/2}` with `coeff` a `p`-adic unit (or zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub p: u64,
    pub coeff: BigRational,
    pub alpha: Vec<u32>,
    pub half_p: i64,
}

impl Monomial {
    pub fn zero(p: u64) -> Self {
        Self { p, coeff: BigRational::zero(), alpha: Vec::new(), half_p: 0 }
    }

    pub fn new(p: u64, coeff: BigRational, alpha: Vec<u32>, half_p: i64) -> Self {
        Self { p, coeff, alpha, half_p }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.coeff.is_zero() {
            return Self::zero(self.p);
        }
        let k = ord(self.p, &self.coeff).unwrap();
        self.coeff *= p_pow(self.p, -k);
        self.half_p += 2 * k;
        while self.alpha.last() == Some(&0) {
            self.alpha.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let n = self.alpha.len().max(other.alpha.len());
        let alpha = (0..n)
            .map(|i| self.alpha.get(i).copied().unwrap_or(0) + other.alpha.get(i).copied().unwrap_or(0))
            .collect();
        Self::new(self.p, &self.coeff * &other.coeff, alpha, self.half_p + other.half_p)
    }

    /// Moves the first `α` exponent to slot `i`.
    pub fn in_slot(&self, i: usize) -> Self {
        let mut alpha = vec![0; i + 1];
        alpha[i] = self.alpha.first().copied().unwrap_or(0);
        Self::new(self.p, self.coeff.clone(), alpha, self.half_p)
    }

    /// Exact value when every `α_i` is rational and the power of `p` is integral.
    pub fn at_rational(&self, alphas: &[BigRational]) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.half_p % 2 != 0 {
            return None;
        }
        let mut v = &self.coeff * p_pow(self.p, self.half_p / 2);
        for (i, &e) in self.alpha.iter().enumerate() {
            v *= alphas.get(i)?.pow(e as i32);
        }
        Some(v)
    }

    pub fn eval(&self, alphas: &[f64]) -> f64 {
        let mut v = rat_to_f64(&self.coeff) * (self.p as f64).powf(self.half_p as f64 / 2.0);
        for (i, &e) in self.alpha.iter().enumerate() {
            v *= alphas[i].powi(e as i32);
        }
        v
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if !self.coeff.is_one() || (self.alpha.is_empty() && self.half_p == 0) {
            parts.push(self.coeff.to_string());
        }
        match self.half_p {
            0 => {}
            h if h % 2 == 0 => parts.push(format!("{}^({})", self.p, h / 2)),
            h => parts.push(format!("{}^({}/2)", self.p, h)),
        }
        let names = ["α", "β", "γ", "δ"];
        let one_slot = self.alpha.len() == 1;
        for (i, &e) in self.alpha.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = if one_slot { names[0].to_string() } else { format!("α{}", i + 1) };
            parts.push(if e == 1 { name } else { format!("{name}^{e}") });
        }
        write!(f, "{}", parts.join("·"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum AlphaValue {
    Symbolic,
    Rational(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WhittakerNewform {
    pub p: u64,
    pub conductor: u32,
    pub alpha: AlphaValue,
}

impl WhittakerNewform {
    pub fn new(p: u64, conductor: u32) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if conductor == 0 {
            return Err(Error::Unsupported("conductor must be at least 1".into()));
        }
        Ok(Self { p, conductor, alpha: AlphaValue::Symbolic })
    }

    pub fn with_alpha(mut self, alpha: &BigRational) -> Self {
        self.alpha = AlphaValue::Rational(alpha.to_string());
        self
    }
}

/// `W⁰(diag(t, 1))`: 0 for `ord t < 0`, 1 for `ord t = 0`, `p^{−m/2}α^m` for `ord t = m > 0`.
pub fn whittaker_value(w: &WhittakerNewform, t: &BigRational) -> Result<Monomial> {
    let m = ord(w.p, t).ok_or_else(|| Error::Zero("t".into()))?;
    Ok(whittaker_at_order(w.p, m))
}

pub fn whittaker_at_order(p: u64, m: i64) -> Monomial {
    match m {
        m if m < 0 => Monomial::zero(p),
        0 => Monomial::new(p, BigRational::one(), Vec::new(), 0),
        m => Monomial::new(p, BigRational::one(), vec![m as u32], -m),
    }
}

/// `∫ W₁⁰(diag(t,1)) W₂⁰(diag(t,1)) |t| d×t = 1/(1 − α₁α₂p^{−2})`, with
/// `ℤ_p^×` of volume 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaFactor {
    pub p: u64,
}

pub fn zeta_factor(w1: &WhittakerNewform, w2: &WhittakerNewform) -> Result<ZetaFactor> {
    if w1.p != w2.p {
        return Err(Error::Unsupported("newforms at different primes".into()));
    }
    if w1.conductor == 0 || w2.conductor == 0 {
        return Err(Error::Unsupported("conductor must be at least 1".into()));
    }
    Ok(ZetaFactor { p: w1.p })
}

impl ZetaFactor {
    /// The `t ∈ p^m ℤ_p^×` contribution, assembled from the Whittaker values.
    pub fn series_term(&self, m: i64) -> Monomial {
        let w = whittaker_at_order(self.p, m);
        let abs_t = Monomial::new(self.p, p_pow(self.p, -m), Vec::new(), 0);
        w.in_slot(0).mul(&w.in_slot(1)).mul(&abs_t)
    }

    /// Numerator of the closed form; a nonzero constant, so the factor never vanishes.
    pub fn numerator(&self) -> BigRational {
        BigRational::one()
    }

    pub fn nonvanishing(&self) -> bool {
        !self.numerator().is_zero()
    }

    pub fn exact(&self, a1: &BigRational, a2: &BigRational) -> Result<BigRational> {
        let den = BigRational::one() - a1 * a2 * p_pow(self.p, -2);
        if den.is_zero() {
            return Err(Error::Pole(format!("α₁α₂ = {}²", self.p)));
        }
        Ok(self.numerator() / den)
    }

    pub fn eval(&self, a1: f64, a2: f64) -> Result<f64> {
        let p2 = (self.p * self.p) as f64;
        let prod = a1 * a2;
        if (prod - p2).abs() <= 1e-12 * p2 {
            return Err(Error::Pole(format!("α₁α₂ = {}²", self.p)));
        }
        if prod.abs() >= p2 {
            return Err(Error::Unsupported(format!("|α₁α₂| = {} is outside |α₁α₂| < {p2}", prod.abs())));
        }
        Ok(1.0 / (1.0 - prod / p2))
    }

    /// `Σ_{m ≤ m_max}` of [`Self::series_term`] at numeric `α`s.
    pub fn truncated(&self, a1: f64, a2: f64, m_max: i64) -> f64 {
        (0..=m_max).map(|m| self.series_term(m).eval(&[a1, a2])).sum()
    }

    pub fn truncated_exact(&self, a1: &BigRational, a2: &BigRational, m_max: i64) -> BigRational {
        (0..=m_max)
            .map(|m| self.series_term(m).at_rational(&[a1.clone(), a2.clone()]).expect("integral p-power"))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Exact remainder `Σ_{m > m_max} r^m = r^{m_max+1}/(1 − r)` for rational `α`s.
    pub fn tail_exact(&self, a1: &BigRational, a2: &BigRational, m_max: i64) -> Result<BigRational> {
        let r = a1 * a2 * p_pow(self.p, -2);
        if r.abs() >= BigRational::one() {
            return Err(Error::Unsupported("series diverges".into()));
        }
        Ok(r.pow((m_max + 1) as i32) / (BigRational::one() - r))
    }
}

impl fmt::Display for ZetaFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/(1 − α1·α2·{}^(-2))", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    #[test]
    fn value_table() {
        let p = 5;
        let w = WhittakerNewform::new(p, 1).unwrap();
        assert!(whittaker_value(&w, &rat(1, 5)).unwrap().is_zero());
        assert_eq!(whittaker_value(&w, &rat(3, 7)).unwrap().to_string(), "1");
        let v = whittaker_value(&w, &rat_int(50)).unwrap();
        assert_eq!(v, Monomial::new(p, rat(1, 5), vec![2], 0));
        assert_eq!(v.to_string(), "5^(-1)·α^2");
        assert_eq!(whittaker_value(&w, &rat_int(5)).unwrap().to_string(), "5^(-1/2)·α");
        assert!(whittaker_value(&w, &rat_int(0)).is_err());
        assert!(WhittakerNewform::new(5, 0).is_err());
    }

    #[test]
    fn multiplicative_in_m() {
        let p = 3;
        let step = Monomial::new(p, BigRational::one(), vec![1], -1);
        for m in 1..10 {
            assert_eq!(whittaker_at_order(p, m + 1), whittaker_at_order(p, m).mul(&step));
        }
    }

    #[test]
    fn zeta_examples() {
        let w = WhittakerNewform::new(2, 1).unwrap();
        let z = zeta_factor(&w, &w).unwrap();
        assert_eq!(z.exact(&rat_int(0), &rat_int(7)).unwrap(), rat_int(1));
        assert_eq!(z.exact(&rat_int(1), &rat_int(1)).unwrap(), rat(4, 3));
        assert!(matches!(z.exact(&rat_int(2), &rat_int(2)), Err(Error::Pole(_))));
        assert!(matches!(z.eval(2.0, 2.0), Err(Error::Pole(_))));
        let m = 30;
        let (a1, a2) = (rat_int(1), rat_int(1));
        assert_eq!(z.truncated_exact(&a1, &a2, m) + z.tail_exact(&a1, &a2, m).unwrap(), rat(4, 3));
        for (a1, a2) in [(1.3, -1.1), (0.7, 2.0), (-1.4, 1.4)] {
            assert!((z.truncated(a1, a2, 40) - z.eval(a1, a2).unwrap()).abs() < 1e-12);
        }
        assert!(z.nonvanishing());
    }
}
