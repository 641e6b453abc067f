//! Local Siegel–Weil sections on `GL₂(ℚ_p)`, the induced section `φ⁰`, the
//! intertwining integral and the translate-support probe.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use super::scalar::{abs_p, in_ball, ord, CyclotomicScalar};
use super::schwartz::{fourier_transform, phi_level, Coset, Polarization, SchwartzFunction};
use crate::arith::{ext_gcd, is_prime, ord_u64, p_pow, rat_int};
use crate::{Error, Result};

pub type Mat2Q = [[BigRational; 2]; 2];

pub fn m2(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Mat2Q {
    [[a, b], [c, d]]
}

pub fn m2i(a: i64, b: i64, c: i64, d: i64) -> Mat2Q {
    m2(rat_int(a), rat_int(b), rat_int(c), rat_int(d))
}

pub fn mul(x: &Mat2Q, y: &Mat2Q) -> Mat2Q {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn det(x: &Mat2Q) -> BigRational {
    &x[0][0] * &x[1][1] - &x[0][1] * &x[1][0]
}

pub fn inverse(x: &Mat2Q) -> Option<Mat2Q> {
    let d = det(x);
    if d.is_zero() {
        return None;
    }
    Some(m2(&x[1][1] / &d, -&x[0][1] / &d, -&x[1][0] / &d, &x[0][0] / &d))
}

pub fn lower(u: BigRational) -> Mat2Q {
    m2(BigRational::one(), BigRational::zero(), u, BigRational::one())
}

pub fn upper(u: BigRational) -> Mat2Q {
    m2(BigRational::one(), u, BigRational::zero(), BigRational::one())
}

pub fn weyl() -> Mat2Q {
    m2i(0, 1, -1, 0)
}

fn integral(p: u64, x: &BigRational) -> bool {
    ord(p, x).map_or(true, |k| k >= 0)
}

fn in_ideal(p: u64, x: &BigRational, v: i64) -> bool {
    ord(p, x).map_or(true, |k| k >= v)
}

pub fn in_gl2_zp(p: u64, g: &Mat2Q) -> bool {
    g.iter().flatten().all(|x| integral(p, x)) && ord(p, &det(g)) == Some(0)
}

/// `x ≡ 1 (mod p^v ℤ_p)`.
fn congruent_one(p: u64, x: &BigRational, v: i64) -> bool {
    in_ideal(p, &(x - BigRational::one()), v)
}

/// Membership in `K₁(p^v) = {k ∈ GL₂(ℤ_p) : c ≡ 0, d ≡ 1 mod p^v}`.
pub fn in_k1(p: u64, v: i64, g: &Mat2Q) -> bool {
    in_gl2_zp(p, g) && in_ideal(p, &g[1][0], v) && congruent_one(p, &g[1][1], v)
}

/// Membership in `K₀(p^v) ∩ SL₂`-type condition: integral entries and `c ∈ p^vℤ_p`.
pub fn in_k0(p: u64, v: i64, g: &Mat2Q) -> bool {
    in_gl2_zp(p, g) && in_ideal(p, &g[1][0], v)
}

/// One set `{x ∈ ℚ_p : αx ∈ c + p^kℤ_p}`.
#[derive(Clone, Debug, PartialEq)]
enum LineSet {
    All,
    Empty,
    Ball(Coset),
}

fn preimage(p: u64, alpha: &BigRational, c: &Coset) -> LineSet {
    if alpha.is_zero() {
        return if c.center.is_zero() { LineSet::All } else { LineSet::Empty };
    }
    let a = ord(p, alpha).unwrap();
    LineSet::Ball(Coset::new(p, &(&c.center / alpha), c.depth - a))
}

fn meet(p: u64, s: LineSet, t: LineSet) -> Result<Option<Coset>> {
    Ok(match (s, t) {
        (LineSet::Empty, _) | (_, LineSet::Empty) => None,
        (LineSet::All, LineSet::All) => return Err(Error::NonInvertible("unbounded fibre".into())),
        (LineSet::All, LineSet::Ball(b)) | (LineSet::Ball(b), LineSet::All) => Some(b),
        (LineSet::Ball(b1), LineSet::Ball(b2)) => {
            let (fine, coarse) = if b1.depth >= b2.depth { (b1, b2) } else { (b2, b1) };
            coarse.contains(p, &fine.center).then_some(fine)
        }
    })
}

/// `∫_{ball} ψ(f·x) dx`.
fn character_integral(p: u64, ball: &Coset, f: &BigRational) -> CyclotomicScalar {
    if !in_ball(p, f, -ball.depth) {
        return CyclotomicScalar::zero(p);
    }
    CyclotomicScalar::psi(p, &(f * &ball.center)).scale(&p_pow(p, -ball.depth))
}

/// `|det g|^{−1} ∫∫ φ(g^{−1}(x y; 0 0)) dx dy` for `φ` on `M₂` in
/// coordinates `(x, y, z, w)`.
pub fn siegel_weil_section(phi: &SchwartzFunction, g: &Mat2Q) -> Result<CyclotomicScalar> {
    let p = phi.prime();
    if phi.dim() != 4 {
        return Err(Error::Shape("Schwartz function on M₂ expected".into()));
    }
    let gi = inverse(g).ok_or_else(|| Error::NonInvertible("g is singular".into()))?;
    let (alpha, gamma) = (&gi[0][0], &gi[1][0]);
    let mut total = CyclotomicScalar::zero(p);
    for t in phi.terms() {
        let k = t.cell.coords();
        let b = &t.freq;
        let Some(bx) = meet(p, preimage(p, alpha, &k[0]), preimage(p, gamma, &k[2]))? else {
            continue;
        };
        let Some(by) = meet(p, preimage(p, alpha, &k[1]), preimage(p, gamma, &k[3]))? else {
            continue;
        };
        let ix = character_integral(p, &bx, &(&b[0] * alpha + &b[2] * gamma));
        let iy = character_integral(p, &by, &(&b[1] * alpha + &b[3] * gamma));
        total = total.add(&t.coeff.mul(&ix).mul(&iy));
    }
    Ok(total.scale(&abs_p(p, &det(g)).recip()))
}

/// The normalized induced section `φ⁰_{N,p} ∈ I(1/2)` supported on
/// `B(ℚ_p)·K₁(N)_p`, with `φ⁰(bk) = |a/d|` for `b = (a *; 0 d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InducedSectionPhi0 {
    pub p: u64,
    pub v: i64,
}

/// `g = b·k` with `b` upper triangular and `k ∈ GL₂(ℤ_p)`.
pub fn iwasawa(p: u64, g: &Mat2Q) -> Result<(Mat2Q, Mat2Q)> {
    let (c, d) = (&g[1][0], &g[1][1]);
    let k = if c.is_zero() && d.is_zero() {
        return Err(Error::NonInvertible("zero bottom row".into()));
    } else if !d.is_zero() && (c.is_zero() || ord(p, c).unwrap() >= ord(p, d).unwrap()) {
        lower(c / d)
    } else {
        m2(BigRational::zero(), -BigRational::one(), BigRational::one(), d / c)
    };
    let b = mul(g, &inverse(&k).unwrap());
    debug_assert!(b[1][0].is_zero());
    Ok((b, k))
}

impl InducedSectionPhi0 {
    pub fn new(p: u64, n: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::Zero("level".into()));
        }
        Ok(Self { p, v: ord_u64(p, n) as i64 })
    }

    pub fn eval(&self, g: &Mat2Q) -> Result<BigRational> {
        let (b, k) = iwasawa(self.p, g)?;
        // bottom row of k is (c/d, 1) when ord c ≥ ord d, else (1, d/c) with
        // d/c ∈ pℤ_p, which no Borel factor moves into K₁(p^v) for v ≥ 1
        let member = if k[1][1].is_one() && !k[0][0].is_zero() {
            in_ideal(self.p, &k[1][0], self.v)
        } else {
            self.v == 0
        };
        if !member {
            return Ok(BigRational::zero());
        }
        Ok(abs_p(self.p, &(&b[0][0] / &b[1][1])))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SwProbe {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwReport {
    pub p: u64,
    pub n: u64,
    pub v: i64,
    pub probes: Vec<SwProbe>,
    pub k1_invariance: bool,
    pub pass: bool,
}

fn fmt_mat(g: &Mat2Q) -> String {
    format!("[[{},{}],[{},{}]]", g[0][0], g[0][1], g[1][0], g[1][1])
}

fn random_unit<R: Rng>(p: u64, rng: &mut R) -> BigRational {
    loop {
        let u: i64 = rng.gen_range(-40..=40);
        if u != 0 && u.rem_euclid(p as i64) != 0 {
            return rat_int(u);
        }
    }
}

fn random_k1<R: Rng>(p: u64, n: u64, rng: &mut R) -> Mat2Q {
    let n = n as i64;
    loop {
        let a: i64 = rng.gen_range(-30..=30);
        let b: i64 = rng.gen_range(-30..=30);
        let c = n * rng.gen_range(-5..=5);
        let d = 1 + n * rng.gen_range(-5..=5);
        if (a * d - b * c).rem_euclid(p as i64) != 0 {
            return m2i(a, b, c, d);
        }
    }
}

fn random_borel<R: Rng>(p: u64, rng: &mut R) -> Mat2Q {
    let a = random_unit(p, rng) * p_pow(p, rng.gen_range(-3..=3));
    let d = random_unit(p, rng) * p_pow(p, rng.gen_range(-3..=3));
    let b = rat_int(rng.gen_range(-20..=20)) * p_pow(p, rng.gen_range(-3..=3));
    m2(a, b, BigRational::zero(), d)
}

/// Left side `M[φ_{N,p} − p^{−1}φ_{N/p,p}](g)`.
pub fn sw_difference(p: u64, v: i64, g: &Mat2Q) -> Result<CyclotomicScalar> {
    let top = siegel_weil_section(&phi_level(p, v), g)?;
    let low = siegel_weil_section(&phi_level(p, v - 1), g)?;
    Ok(top.sub(&low.scale(&p_pow(p, -1))))
}

/// Checks `M[φ_{N,p} − p^{−1}φ_{N/p,p}] = (1 − p^{−1})φ⁰_{N,p}` on the lower
/// unipotent probes, random Borel translates, and `K₁(N)`-right translates.
pub fn verify_sw_identity<R: Rng>(p: u64, n: u64, translates: usize, rng: &mut R) -> Result<SwReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 || n % p != 0 {
        return Err(Error::PrimeDoesNotDivide { p, n });
    }
    let phi0 = InducedSectionPhi0::new(p, n)?;
    let v = phi0.v;
    let factor = BigRational::one() - p_pow(p, -1);
    let mut probes = Vec::new();
    let mut bases = Vec::new();
    for i in 0..=v + 2 {
        let g = lower(p_pow(p, i));
        bases.push(g.clone());
        let lhs = sw_difference(p, v, &g)?;
        let rhs = CyclotomicScalar::rational(p, &factor * phi0.eval(&g)?);
        probes.push(SwProbe { label: format!("i={i}"), equal: lhs == rhs, lhs: lhs.to_string(), rhs: rhs.to_string() });
    }
    bases.push(weyl());
    for t in 0..translates {
        let base = &bases[t % bases.len()];
        let g = mul(&random_borel(p, rng), base);
        let lhs = sw_difference(p, v, &g)?;
        let rhs = CyclotomicScalar::rational(p, &factor * phi0.eval(&g)?);
        probes.push(SwProbe { label: format!("b·{}", fmt_mat(base)), equal: lhs == rhs, lhs: lhs.to_string(), rhs: rhs.to_string() });
    }
    let mut k1_invariance = true;
    for t in 0..translates {
        let base = &bases[t % bases.len()];
        let k = random_k1(p, n, rng);
        k1_invariance &= sw_difference(p, v, &mul(base, &k))? == sw_difference(p, v, base)?;
    }
    let pass = k1_invariance && probes.iter().all(|x| x.equal);
    Ok(SwReport { p, n, v, probes, k1_invariance, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntertwiningReport {
    pub p: u64,
    pub n: u64,
    pub closed_form: BigRational,
    pub shells: Vec<(i64, BigRational)>,
    pub shell_sum: BigRational,
    pub tail: BigRational,
    pub agree: bool,
    pub weyl_value: BigRational,
    pub integral_part_vanishes: bool,
    pub factorization_holds: bool,
}

/// `∫_{ℚ_p} φ⁰_{N,p}(w·n(y)) dy`, as a closed-form geometric series and as a
/// shell-by-shell sum over `ℚ_p ∖ ℤ_p` with the exact tail.
pub fn intertwining_value(p: u64, n: u64, n_max: i64) -> Result<IntertwiningReport> {
    if n == 0 || n % p != 0 {
        return Err(Error::PrimeDoesNotDivide { p, n });
    }
    let phi0 = InducedSectionPhi0::new(p, n)?;
    let v = phi0.v;
    let closed_form = p_pow(p, -v);
    let w = weyl();
    let units: Vec<i64> = (1..p as i64).chain([p as i64 + 1, 2 * p as i64 - 1]).collect();
    let mut shells = Vec::new();
    let mut shell_sum = BigRational::zero();
    let mut factorization_holds = true;
    for s in 1..=n_max {
        let mut value: Option<BigRational> = None;
        for &u in &units {
            let y = rat_int(u) * p_pow(p, -s);
            let g = mul(&w, &upper(y.clone()));
            let direct = phi0.eval(&g)?;
            // w·n(y) = diag(−1/y, −y)·n(−y)·n⁻(1/y)
            let torus = m2(-y.recip(), BigRational::zero(), BigRational::zero(), -y.clone());
            let rebuilt = mul(&mul(&torus, &upper(-y.clone())), &lower(y.recip()));
            factorization_holds &= rebuilt == g;
            let via = abs_p(p, &y).pow(-2) * phi0.eval(&lower(y.recip()))?;
            factorization_holds &= via == direct;
            match &value {
                None => value = Some(direct),
                Some(prev) => {
                    if *prev != direct {
                        return Err(Error::Unsupported(format!("integrand not constant on shell {s}")));
                    }
                }
            }
        }
        let shell_volume = p_pow(p, s) * (BigRational::one() - p_pow(p, -1));
        let contrib = value.unwrap() * shell_volume;
        shell_sum += &contrib;
        shells.push((s, contrib));
    }
    // for s > n_max ≥ v each shell contributes (p − 1)p^{−s−1}
    let tail = if n_max >= v { p_pow(p, -n_max - 1) } else { p_pow(p, -v) };
    let mut integral_part_vanishes = true;
    for j in 0..=v + 2 {
        for &u in &units {
            let y = rat_int(u) * p_pow(p, j);
            integral_part_vanishes &= phi0.eval(&mul(&w, &upper(y)))?.is_zero();
        }
    }
    let weyl_value = phi0.eval(&w)?;
    let agree = &shell_sum + &tail == closed_form;
    Ok(IntertwiningReport {
        p,
        n,
        closed_form,
        shells,
        shell_sum,
        tail,
        agree,
        weyl_value,
        integral_part_vanishes,
        factorization_holds,
    })
}

/// `vol(K₁(p^v) ∩ SL₂(ℤ_p))` with `SL₂(ℤ_p)` of volume 1, in closed form
/// and, for small moduli, by counting `SL₂(ℤ/p^v)`.
pub fn k1_sl2_volume(p: u64, v: u32) -> (BigRational, Option<BigRational>) {
    let closed = (p_pow(p, 2 * v as i64) * (BigRational::one() - p_pow(p, -2))).recip();
    let q = p.pow(v);
    if v == 0 || q > 16 {
        return (closed, None);
    }
    let q = q as i64;
    let (mut sl2, mut k1) = (0i64, 0i64);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if (a * d - b * c).rem_euclid(q) == 1 {
                        sl2 += 1;
                        if c == 0 && d == 1 {
                            k1 += 1;
                        }
                    }
                }
            }
        }
    }
    (closed, Some(BigRational::new(BigInt::from(k1), BigInt::from(sl2))))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub h: String,
    pub value: String,
    pub in_k0: bool,
    pub in_k1: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SupportMatch {
    K0,
    K1,
    Both,
    Neither,
}

impl fmt::Display for SupportMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SupportMatch::K0 => "integral entries with c ∈ Nℤ_p (K₀-type); the d ≡ 1 congruence is not forced",
            SupportMatch::K1 => "K₁(N)_p",
            SupportMatch::Both => "K₀-type and K₁(N)_p agree on every probe",
            SupportMatch::Neither => "neither K₀-type nor K₁(N)_p",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportReport {
    pub p: u64,
    pub n: u64,
    pub rows: Vec<ProbeRow>,
    pub matches_k0: bool,
    pub matches_k1: bool,
    pub verdict: SupportMatch,
}

/// The probe vector `x₀ = (1, 0, 0, −1)` moved by `h⁻¹` on the
/// `⟨e₁, e₂⟩` factor, in coordinates `(z₁, w₁, z₂, w₂)`.
pub fn translated_probe(h: &Mat2Q) -> Result<Vec<BigRational>> {
    let hi = inverse(h).ok_or_else(|| Error::NonInvertible("h is singular".into()))?;
    let x0 = [[BigRational::one(), BigRational::zero()], [BigRational::zero(), -BigRational::one()]];
    let y = mul(&hi, &x0);
    Ok(vec![y[0][0].clone(), y[0][1].clone(), y[1][0].clone(), y[1][1].clone()])
}

/// `ω(h, 1)φ̂_{N,p}(x₀) = φ̂_{N,p}(h⁻¹x₀)` for `h ∈ SL₂(ℚ_p)`.
pub fn translate_value(hat: &SchwartzFunction, h: &Mat2Q) -> Result<CyclotomicScalar> {
    Ok(hat.eval(&translated_probe(h)?))
}

fn sl2_with_bottom(c: i64, d: i64) -> Option<Mat2Q> {
    let (g, x, y) = ext_gcd(d, c);
    // x·d + y·c = 1 gives a = x, b = −y
    (g == 1).then(|| m2i(x, -y, c, d))
}

/// Probe matrices in `SL₂(ℚ_p)`: unipotents, a non-integral translate, tori,
/// and bottom rows `(N, u)` with `u ≢ 1 (mod N)` separating `K₀` from `K₁`.
pub fn support_probes(p: u64, n: u64) -> Vec<Mat2Q> {
    let v = ord_u64(p, n) as i64;
    let mut out = vec![m2i(1, 0, 0, 1), upper(rat_int(1)), upper(p_pow(p, -1)), weyl()];
    for j in 0..=v + 1 {
        out.push(lower(p_pow(p, j)));
    }
    out.push(m2(p_pow(p, 1), BigRational::zero(), BigRational::zero(), p_pow(p, -1)));
    let nn = n as i64;
    let pk = p.pow(v as u32) as i64;
    for u in 2..(2 * pk + 3) {
        if u.gcd(&(p as i64)) == 1 {
            out.push(m2(rat_int(u), BigRational::zero(), BigRational::zero(), BigRational::new(1.into(), u.into())));
            if let Some(h) = sl2_with_bottom(nn, u) {
                out.push(h);
            }
        }
    }
    if let Some(h) = sl2_with_bottom(nn, -1) {
        out.push(h);
    }
    out
}

pub fn support_of_weil_translate(p: u64, n: u64) -> Result<SupportReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 || n % p != 0 {
        return Err(Error::PrimeDoesNotDivide { p, n });
    }
    let v = ord_u64(p, n) as i64;
    let hat = fourier_transform(&phi_level(p, v), &Polarization::m2_first_row())?;
    let mut rows = Vec::new();
    let (mut matches_k0, mut matches_k1) = (true, true);
    for h in support_probes(p, n) {
        let value = translate_value(&hat, &h)?;
        let inside = value == CyclotomicScalar::one(p);
        if !inside && !value.is_zero() {
            return Err(Error::Unsupported(format!("translate is not an indicator at {}", fmt_mat(&h))));
        }
        let (k0, k1) = (in_k0(p, v, &h), in_k1(p, v, &h));
        matches_k0 &= inside == k0;
        matches_k1 &= inside == k1;
        rows.push(ProbeRow { h: fmt_mat(&h), value: value.to_string(), in_k0: k0, in_k1: k1 });
    }
    let verdict = match (matches_k0, matches_k1) {
        (true, true) => SupportMatch::Both,
        (true, false) => SupportMatch::K0,
        (false, true) => SupportMatch::K1,
        (false, false) => SupportMatch::Neither,
    };
    Ok(SupportReport { p, n, rows, matches_k0, matches_k1, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn section_values_on_lower_probes() {
        for (p, v) in [(5u64, 1i64), (2, 3), (3, 2), (7, 1)] {
            for i in 0..=v + 2 {
                let got = siegel_weil_section(&phi_level(p, v), &lower(p_pow(p, i))).unwrap();
                let want = if i <= v { p_pow(p, i - v) } else { rat_int(1) };
                assert_eq!(got.as_rational(), Some(want), "p={p} v={v} i={i}");
            }
        }
        let one = siegel_weil_section(&phi_level(5, 0), &m2i(1, 0, 0, 1)).unwrap();
        assert_eq!(one.as_rational(), Some(rat_int(1)));
    }

    #[test]
    fn identity_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = verify_sw_identity(5, 5, 10, &mut rng).unwrap();
        assert!(r.pass);
        assert_eq!(r.probes[0].lhs, "0");
        assert_eq!(r.probes[1].lhs, "4/5");
        let r = verify_sw_identity(2, 8, 10, &mut rng).unwrap();
        assert!(r.pass);
        let lhs: Vec<&str> = r.probes[..4].iter().map(|x| x.lhs.as_str()).collect();
        assert_eq!(lhs, ["0", "0", "0", "1/2"]);
        assert!(matches!(verify_sw_identity(3, 5, 1, &mut rng), Err(Error::PrimeDoesNotDivide { .. })));
    }

    #[test]
    fn intertwining_examples() {
        let r = intertwining_value(5, 5, 12).unwrap();
        assert_eq!(r.closed_form, rat(1, 5));
        assert!(r.agree && r.factorization_holds && r.integral_part_vanishes);
        assert!(r.weyl_value.is_zero());
        let r = intertwining_value(3, 9, 1).unwrap();
        assert_eq!(r.closed_form, rat(1, 9));
        assert!(r.agree);
    }

    #[test]
    fn k1_volume_counts() {
        for (p, v) in [(2u64, 1u32), (2, 2), (3, 1), (2, 3), (3, 2)] {
            let (closed, counted) = k1_sl2_volume(p, v);
            if let Some(c) = counted {
                assert_eq!(closed, c, "p={p} v={v}");
            }
        }
    }

    #[test]
    fn iwasawa_reconstructs() {
        let p = 3;
        for g in [m2i(1, 2, 3, 4), m2i(0, 1, -1, 0), m2i(5, 7, 9, 27), m2i(2, 0, 1, 0)] {
            let (b, k) = iwasawa(p, &g).unwrap();
            assert_eq!(mul(&b, &k), g);
            assert!(b[1][0].is_zero() && in_gl2_zp(p, &k));
        }
    }

    #[test]
    fn support_probe_flags_k0() {
        let r = support_of_weil_translate(3, 3).unwrap();
        assert_eq!(r.verdict, SupportMatch::K0);
        let hat = fourier_transform(&phi_level(5, 1), &Polarization::m2_first_row()).unwrap();
        assert_eq!(translate_value(&hat, &m2i(1, 0, 0, 1)).unwrap(), CyclotomicScalar::one(5));
        assert!(translate_value(&hat, &lower(rat_int(1))).unwrap().is_zero());
        assert_eq!(translate_value(&hat, &upper(rat_int(1))).unwrap(), CyclotomicScalar::one(5));
        // at N = 2 the two conditions coincide
        assert_eq!(support_of_weil_translate(2, 2).unwrap().verdict, SupportMatch::Both);
    }
}
