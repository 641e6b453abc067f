//! Locally constant compactly supported functions on `ℚ_p^n`, stored as
//! finite combinations of box indicators, each optionally twisted by an
//! additive character, with cyclotomic coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{in_ball, ord, p_fractional_part, CyclotomicScalar};
use crate::arith::p_pow;
use crate::{Error, Result};

/// Upper bound on the number of cells produced by [`SchwartzFunction::normalized`].
pub const REFINEMENT_BUDGET: usize = 1 << 20;

/// Canonical representative of `x mod p^k ℤ_p` in `ℤ[1/p] ∩ [0, p^k)`.
pub fn reduce_mod(p: u64, x: &BigRational, k: i64) -> BigRational {
    let scaled = x * p_pow(p, -k);
    p_fractional_part(p, &scaled) * p_pow(p, k)
}

/// The coset `center + p^depth ℤ_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coset {
    pub center: BigRational,
    pub depth: i64,
}

impl Coset {
    pub fn new(p: u64, center: &BigRational, depth: i64) -> Self {
        Self { center: reduce_mod(p, center, depth), depth }
    }

    pub fn contains(&self, p: u64, x: &BigRational) -> bool {
        reduce_mod(p, x, self.depth) == self.center
    }

    fn intersect(&self, p: u64, other: &Coset) -> Option<Coset> {
        let (fine, coarse) = if self.depth >= other.depth { (self, other) } else { (other, self) };
        coarse.contains(p, &fine.center).then(|| fine.clone())
    }

    fn refine(&self, p: u64, depth: i64) -> Vec<Coset> {
        assert!(depth >= self.depth);
        let count = p.pow((depth - self.depth) as u32);
        let step = p_pow(p, self.depth);
        (0..count)
            .map(|j| Coset::new(p, &(&self.center + &step * BigRational::from_integer(BigInt::from(j))), depth))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PadicBox {
    p: u64,
    coords: Vec<Coset>,
}

impl PadicBox {
    pub fn new(p: u64, coords: &[(BigRational, i64)]) -> Self {
        Self { p, coords: coords.iter().map(|(c, k)| Coset::new(p, c, *k)).collect() }
    }

    /// `Π p^{k_i} ℤ_p`.
    pub fn lattice(p: u64, depths: &[i64]) -> Self {
        Self { p, coords: depths.iter().map(|&k| Coset { center: BigRational::zero(), depth: k }).collect() }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coset] {
        &self.coords
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        x.len() == self.dim() && self.coords.iter().zip(x).all(|(c, xi)| c.contains(self.p, xi))
    }

    pub fn volume(&self) -> BigRational {
        p_pow(self.p, -self.coords.iter().map(|c| c.depth).sum::<i64>())
    }

    pub fn intersect(&self, other: &PadicBox) -> Option<PadicBox> {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.intersect(self.p, b))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { p: self.p, coords })
    }

    pub fn negate(&self) -> Self {
        Self { p: self.p, coords: self.coords.iter().map(|c| Coset::new(self.p, &-c.center.clone(), c.depth)).collect() }
    }

    fn refine(&self, depths: &[i64]) -> Vec<PadicBox> {
        let mut out = vec![Vec::new()];
        for (c, &k) in self.coords.iter().zip(depths) {
            let pieces = c.refine(self.p, k);
            out = out
                .into_iter()
                .flat_map(|pre| {
                    pieces.iter().map(move |piece| {
                        let mut v = pre.clone();
                        v.push(piece.clone());
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(|coords| Self { p: self.p, coords }).collect()
    }
}

/// `coeff · ψ(⟨freq, x⟩) · 1_cell(x)`; plain box indicators have zero frequency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: CyclotomicScalar,
    pub freq: Vec<BigRational>,
    pub cell: PadicBox,
}

impl Term {
    fn character_at(&self, x: &[BigRational]) -> CyclotomicScalar {
        let t = self.freq.iter().zip(x).fold(BigRational::zero(), |acc, (b, xi)| acc + b * xi);
        CyclotomicScalar::psi(self.cell.p, &t)
    }

    /// `∫ ψ(⟨freq, x⟩) 1_cell(x) dx`.
    fn integral(&self) -> CyclotomicScalar {
        let p = self.cell.p;
        let mut out = self.coeff.clone();
        for (b, c) in self.freq.iter().zip(&self.cell.coords) {
            if !in_ball(p, b, -c.depth) {
                return CyclotomicScalar::zero(p);
            }
            out = out.mul(&CyclotomicScalar::psi(p, &(b * &c.center))).scale(&p_pow(p, -c.depth));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SchwartzFunction {
    p: u64,
    dim: usize,
    terms: Vec<Term>,
}

impl SchwartzFunction {
    pub fn zero(p: u64, dim: usize) -> Self {
        Self { p, dim, terms: Vec::new() }
    }

    pub fn indicator(b: PadicBox) -> Self {
        let mut f = Self::zero(b.p, b.dim());
        f.push(CyclotomicScalar::one(b.p), b);
        f
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn push(&mut self, c: CyclotomicScalar, b: PadicBox) {
        self.push_modulated(c, vec![BigRational::zero(); self.dim], b);
    }

    pub fn push_modulated(&mut self, c: CyclotomicScalar, freq: Vec<BigRational>, b: PadicBox) {
        assert_eq!(b.dim(), self.dim);
        assert_eq!(freq.len(), self.dim);
        if !c.is_zero() {
            self.terms.push(Term { coeff: c, freq, cell: b });
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn scale(&self, c: &CyclotomicScalar) -> Self {
        let mut out = Self::zero(self.p, self.dim);
        for t in &self.terms {
            out.push_modulated(t.coeff.mul(c), t.freq.clone(), t.cell.clone());
        }
        out
    }

    pub fn eval(&self, x: &[BigRational]) -> CyclotomicScalar {
        self.terms
            .iter()
            .filter(|t| t.cell.contains(x))
            .fold(CyclotomicScalar::zero(self.p), |acc, t| acc.add(&t.coeff.mul(&t.character_at(x))))
    }

    /// `∫ φ` for the self-dual measure (`ℤ_p` has volume 1).
    pub fn integral(&self) -> CyclotomicScalar {
        self.terms.iter().fold(CyclotomicScalar::zero(self.p), |acc, t| acc.add(&t.integral()))
    }

    /// `x ↦ φ(−x)`.
    pub fn reflect(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff.clone(),
                freq: t.freq.iter().map(|b| -b.clone()).collect(),
                cell: t.cell.negate(),
            })
            .collect();
        Self { p: self.p, dim: self.dim, terms }
    }

    /// Depth at which a term's character is constant on cells.
    fn resolution(&self, t: &Term, i: usize) -> i64 {
        let k = t.cell.coords[i].depth;
        match ord(self.p, &t.freq[i]) {
            Some(m) => k.max(-m),
            None => k,
        }
    }

    /// Rewrites the function as a combination of plain, pairwise disjoint
    /// boxes of a common depth per coordinate, with merged coefficients in
    /// sorted order; two functions are equal iff their normal forms agree.
    pub fn normalized(&self) -> Result<Self> {
        if self.terms.is_empty() {
            return Ok(self.clone());
        }
        let depths: Vec<i64> = (0..self.dim)
            .map(|i| self.terms.iter().map(|t| self.resolution(t, i)).max().unwrap())
            .collect();
        let mut cells = 0usize;
        for t in &self.terms {
            let n: u64 = t.cell.coords.iter().zip(&depths).map(|(c, k)| self.p.pow((k - c.depth) as u32)).product();
            cells = cells.saturating_add(n as usize);
        }
        if cells > REFINEMENT_BUDGET {
            return Err(Error::BudgetExceeded(format!("{cells} cells to normalize")));
        }
        let mut acc: BTreeMap<PadicBox, CyclotomicScalar> = BTreeMap::new();
        for t in &self.terms {
            for cell in t.cell.refine(&depths) {
                let centers: Vec<BigRational> = cell.coords.iter().map(|c| c.center.clone()).collect();
                let value = t.coeff.mul(&t.character_at(&centers));
                let slot = acc.entry(cell).or_insert_with(|| CyclotomicScalar::zero(self.p));
                *slot = slot.add(&value);
            }
        }
        let mut out = Self::zero(self.p, self.dim);
        for (b, c) in acc {
            out.push(c, b);
        }
        Ok(out)
    }

    pub fn same_function(&self, other: &Self) -> Result<bool> {
        if self.p != other.p || self.dim != other.dim {
            return Ok(false);
        }
        let diff = self.add(&other.scale(&CyclotomicScalar::rational(self.p, -BigRational::one())));
        Ok(diff.normalized()?.terms.is_empty())
    }
}

/// One output coordinate of a partial Fourier transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Integrate source coordinate `src` against `ψ(sign·z·y)`.
    Dual { src: usize, sign: i8 },
    /// Copy source coordinate `src`.
    Pass { src: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization {
    pub slots: Vec<Slot>,
}

impl Polarization {
    /// Transform in every coordinate with kernel `ψ(x·y)`.
    pub fn full(n: usize) -> Self {
        Self { slots: (0..n).map(|src| Slot::Dual { src, sign: 1 }).collect() }
    }

    /// On `M₂ = {(x, y; z, w)}`: `(z₁, w₁, z₂, w₂)` with kernel `ψ(x·w₁ − y·z₁)`.
    pub fn m2_first_row() -> Self {
        Self {
            slots: vec![
                Slot::Dual { src: 1, sign: -1 },
                Slot::Dual { src: 0, sign: 1 },
                Slot::Pass { src: 2 },
                Slot::Pass { src: 3 },
            ],
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.slots.len() != dim {
            return Err(Error::Polarization(format!("{} slots for dimension {dim}", self.slots.len())));
        }
        let mut seen = vec![false; dim];
        for s in &self.slots {
            let (src, sign) = match *s {
                Slot::Dual { src, sign } => (src, sign),
                Slot::Pass { src } => (src, 1),
            };
            if sign != 1 && sign != -1 {
                return Err(Error::Polarization(format!("sign {sign}")));
            }
            if src >= dim || seen[src] {
                return Err(Error::Polarization(format!("source coordinate {src} unpaired or reused")));
            }
            seen[src] = true;
        }
        Ok(())
    }
}

/// Partial Fourier transform. Coordinate-wise, `ψ(bz)·1_{a+p^kℤ_p}(z)`
/// against `ψ(s·z·y)` becomes `p^{−k}ψ(ab)·ψ(s·a·y)·1_{−sb+p^{−k}ℤ_p}(y)`,
/// so each term maps to a single term.
pub fn fourier_transform(phi: &SchwartzFunction, pol: &Polarization) -> Result<SchwartzFunction> {
    pol.validate(phi.dim)?;
    let p = phi.p;
    let mut out = SchwartzFunction::zero(p, phi.dim);
    for t in &phi.terms {
        let mut coeff = t.coeff.clone();
        let mut freq = Vec::with_capacity(phi.dim);
        let mut coords = Vec::with_capacity(phi.dim);
        for slot in &pol.slots {
            match *slot {
                Slot::Pass { src } => {
                    freq.push(t.freq[src].clone());
                    coords.push(t.cell.coords[src].clone());
                }
                Slot::Dual { src, sign } => {
                    let (a, b, k) = (&t.cell.coords[src].center, &t.freq[src], t.cell.coords[src].depth);
                    let s = BigRational::from_integer(BigInt::from(sign));
                    coeff = coeff.mul(&CyclotomicScalar::psi(p, &(a * b))).scale(&p_pow(p, -k));
                    freq.push(&s * a);
                    coords.push(Coset::new(p, &(-(&s * b)), -k));
                }
            }
        }
        out.push_modulated(coeff, freq, PadicBox { p, coords });
    }
    Ok(out)
}

/// `|ν|^{−mn/2}·φ∘g^{−1}` for a monomial matrix `g` acting on coordinates.
pub fn weil_scaling(
    phi: &SchwartzFunction,
    g: &[Vec<BigRational>],
    nu: &BigRational,
    m: u32,
    n: u32,
) -> Result<SchwartzFunction> {
    let p = phi.p;
    let dim = phi.dim;
    if g.len() != dim || g.iter().any(|r| r.len() != dim) {
        return Err(Error::Shape(format!("expected a {dim}×{dim} matrix")));
    }
    let nu_ord = ord(p, nu).ok_or_else(|| Error::NonInvertible("similitude factor is zero".into()))?;
    let twice = nu_ord * (m * n) as i64;
    if twice % 2 != 0 {
        return Err(Error::Unsupported("half-integral power of p in the normalizing factor".into()));
    }
    // row i of g has a single nonzero entry λ_i in column σ(i)
    let mut perm = Vec::with_capacity(dim);
    for row in g {
        let nz: Vec<usize> = (0..dim).filter(|&j| !row[j].is_zero()).collect();
        match nz.len() {
            0 => return Err(Error::NonInvertible("zero row".into())),
            1 => perm.push((nz[0], row[nz[0]].clone())),
            _ => return Err(Error::Unsupported("only monomial actions preserve boxes".into())),
        }
    }
    let mut cols: Vec<usize> = perm.iter().map(|(j, _)| *j).collect();
    cols.sort_unstable();
    cols.dedup();
    if cols.len() != dim {
        return Err(Error::NonInvertible("repeated column".into()));
    }
    let factor = CyclotomicScalar::rational(p, p_pow(p, twice / 2));
    let mut out = SchwartzFunction::zero(p, dim);
    for t in &phi.terms {
        let coords = perm
            .iter()
            .map(|(j, lam)| {
                let src = &t.cell.coords[*j];
                Coset::new(p, &(lam * &src.center), src.depth + ord(p, lam).unwrap())
            })
            .collect();
        let freq = perm.iter().map(|(j, lam)| &t.freq[*j] / lam).collect();
        out.push_modulated(t.coeff.mul(&factor), freq, PadicBox { p, coords });
    }
    Ok(out)
}

/// `φ_{N,p}`: indicator of `(ℤ_p ℤ_p; Nℤ_p ℤ_p)` in coordinates `(x, y, z, w)`.
pub fn phi_level(p: u64, v: i64) -> SchwartzFunction {
    SchwartzFunction::indicator(PadicBox::lattice(p, &[0, 0, v, 0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    #[test]
    fn reduction_is_canonical() {
        assert_eq!(reduce_mod(5, &rat(7, 1), 1), rat(2, 1));
        assert_eq!(reduce_mod(5, &rat(-1, 1), 2), rat(24, 1));
        assert_eq!(reduce_mod(3, &rat(7, 9), 0), rat(7, 9));
        assert_eq!(reduce_mod(3, &rat(7, 9), -1), rat(1, 9));
        assert_eq!(reduce_mod(3, &rat(1, 2), 1), rat(2, 1));
    }

    #[test]
    fn unramified_indicator_is_self_dual() {
        for p in [2, 3, 5] {
            let phi = SchwartzFunction::indicator(PadicBox::lattice(p, &[0]));
            let hat = fourier_transform(&phi, &Polarization::full(1)).unwrap();
            assert!(hat.same_function(&phi).unwrap());
        }
    }

    #[test]
    fn level_indicator_transform() {
        for (p, v) in [(5u64, 1i64), (2, 3), (3, 2)] {
            let hat = fourier_transform(&phi_level(p, v), &Polarization::m2_first_row()).unwrap();
            let expect = SchwartzFunction::indicator(PadicBox::lattice(p, &[0, 0, v, 0]));
            assert!(hat.same_function(&expect).unwrap());
        }
    }

    #[test]
    fn shifted_coset_transform_is_a_character() {
        let p = 3;
        let phi = SchwartzFunction::indicator(PadicBox::new(p, &[(rat_int(1), 2)]));
        let hat = fourier_transform(&phi, &Polarization::full(1)).unwrap();
        for j in 0..9 {
            let y = rat(j, 9);
            let want = CyclotomicScalar::psi(p, &y).scale(&rat(1, 9));
            assert_eq!(hat.eval(&[y]), want);
        }
        assert!(hat.eval(&[rat(1, 27)]).is_zero());
        let back = fourier_transform(&hat, &Polarization::full(1)).unwrap();
        assert!(back.same_function(&phi.reflect()).unwrap());
    }

    #[test]
    fn malformed_polarization_is_rejected() {
        let phi = phi_level(5, 1);
        let bad = Polarization { slots: vec![Slot::Pass { src: 0 }, Slot::Pass { src: 0 }, Slot::Pass { src: 2 }, Slot::Pass { src: 3 }] };
        assert!(matches!(fourier_transform(&phi, &bad), Err(Error::Polarization(_))));
        assert!(fourier_transform(&phi, &Polarization::full(3)).is_err());
    }

    #[test]
    fn scaling_by_p_deepens_boxes() {
        let p = 7;
        let phi = SchwartzFunction::indicator(PadicBox::new(p, &[(rat_int(3), 1), (rat_int(0), 0)]));
        let id = vec![vec![rat_int(1), rat_int(0)], vec![rat_int(0), rat_int(1)]];
        assert!(weil_scaling(&phi, &id, &rat_int(1), 2, 1).unwrap().same_function(&phi).unwrap());
        let pg = vec![vec![rat_int(7), rat_int(0)], vec![rat_int(0), rat_int(7)]];
        let scaled = weil_scaling(&phi, &pg, &rat_int(1), 2, 1).unwrap();
        let b = &scaled.terms()[0].cell;
        assert_eq!(b.coords()[0], Coset { center: rat_int(21), depth: 2 });
        assert_eq!(b.coords()[1].depth, 1);
        // |ν|^{-1} with m = 2, n = 1 and ν = p
        let s = weil_scaling(&phi, &id, &rat_int(7), 2, 1).unwrap();
        assert_eq!(s.terms()[0].coeff, CyclotomicScalar::rational(p, rat_int(7)));
        assert!(weil_scaling(&phi, &id, &rat_int(7), 1, 1).is_err());
        let sing = vec![vec![rat_int(1), rat_int(0)], vec![rat_int(0), rat_int(0)]];
        assert!(matches!(weil_scaling(&phi, &sing, &rat_int(1), 2, 1), Err(Error::NonInvertible(_))));
    }
}
