//! The graded symbol ring: formal rational combinations of symbols
//! `[U]_n` (a rational subspace `U` with `dim U ≤ n`) with product
//! `[U₁]_{n₁}·[U₂]_{n₂} = [U₁+U₂]_{n₁+n₂}`, or `0` past the cutoff `m`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::isometry::IsometryMap;
use crate::linalg::int::{self, IntMatrix};
use crate::linalg::{format_rational, Rational};

/// A grade together with a subspace of `ℚᵈ`, stored as the Hermite basis
/// of the saturated lattice `U ∩ ℤᵈ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceSymbol {
    grade: usize,
    ambient: usize,
    basis: IntMatrix,
}

impl SubspaceSymbol {
    /// `[span(vectors)]_grade` in `ℚ^ambient`.
    pub fn new(grade: usize, vectors: &[Vec<i64>], ambient: usize) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!("vector of length {} in ambient dimension {ambient}", v.len())));
        }
        let basis = int::saturate(vectors, ambient);
        if basis.len() > grade {
            return Err(Error::SubspaceTooLarge { dim: basis.len(), grade });
        }
        Ok(SubspaceSymbol { grade, ambient, basis })
    }

    /// `[0]_grade`.
    pub fn zero_subspace(grade: usize, ambient: usize) -> Self {
        SubspaceSymbol { grade, ambient, basis: Vec::new() }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `[U₁+U₂]_{n₁+n₂}` without the cutoff check.
    fn join(&self, other: &SubspaceSymbol) -> SubspaceSymbol {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        SubspaceSymbol { grade: self.grade + other.grade, ambient: self.ambient, basis: int::saturate(&rows, self.ambient) }
    }

    /// `[gU]_n` for `g` acting on coordinate columns.
    pub fn image(&self, g: &IsometryMap) -> SubspaceSymbol {
        let rows: IntMatrix = self.basis.iter().map(|b| g.apply(b)).collect();
        SubspaceSymbol { grade: self.grade, ambient: self.ambient, basis: int::saturate(&rows, self.ambient) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleRingElement {
    cutoff: usize,
    terms: BTreeMap<SubspaceSymbol, Rational>,
}

impl CycleRingElement {
    pub fn zero(cutoff: usize) -> Self {
        CycleRingElement { cutoff, terms: BTreeMap::new() }
    }

    /// `1♮ = [0]_0`.
    pub fn one(cutoff: usize, ambient: usize) -> Self {
        Self::from_symbol(cutoff, SubspaceSymbol::zero_subspace(0, ambient)).expect("grade 0 fits")
    }

    /// `c♮ = [0]_1`.
    pub fn c(cutoff: usize, ambient: usize) -> Result<Self> {
        Self::from_symbol(cutoff, SubspaceSymbol::zero_subspace(1, ambient))
    }

    pub fn from_symbol(cutoff: usize, sym: SubspaceSymbol) -> Result<Self> {
        let mut z = Self::zero(cutoff);
        z.add_term(sym, Rational::one())?;
        Ok(z)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SubspaceSymbol, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, sym: SubspaceSymbol, coeff: Rational) -> Result<()> {
        if sym.grade > self.cutoff {
            return Err(Error::GradeAboveCutoff { grade: sym.grade, cutoff: self.cutoff });
        }
        let e = self.terms.entry(sym).or_insert_with(Rational::zero);
        *e += coeff;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    fn check_cutoff(&self, other: &CycleRingElement) -> Result<()> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch(self.cutoff, other.cutoff));
        }
        Ok(())
    }

    pub fn add(&self, other: &CycleRingElement) -> Result<CycleRingElement> {
        self.check_cutoff(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, a: &Rational) -> CycleRingElement {
        if a.is_zero() {
            return Self::zero(self.cutoff);
        }
        CycleRingElement { cutoff: self.cutoff, terms: self.terms.iter().map(|(s, c)| (s.clone(), c * a)).collect() }
    }

    pub fn sub(&self, other: &CycleRingElement) -> Result<CycleRingElement> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Grades carrying nonzero coefficients.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|s| s.grade).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// The single grade of a nonzero homogeneous element.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        match self.grades().as_slice() {
            [g] => Some(*g),
            _ => None,
        }
    }

    /// Bilinear product with the cutoff.
    pub fn mul(&self, other: &CycleRingElement) -> Result<CycleRingElement> {
        self.check_cutoff(other)?;
        let mut out = Self::zero(self.cutoff);
        for (s1, c1) in &self.terms {
            for (s2, c2) in &other.terms {
                if s1.grade + s2.grade > self.cutoff {
                    continue;
                }
                out.add_term(s1.join(s2), c1 * c2)?;
            }
        }
        Ok(out)
    }

    /// Sum of the coefficients in grade `m`.
    pub fn degree(&self) -> Rational {
        self.grade_sum(self.cutoff)
    }

    pub fn grade_sum(&self, grade: usize) -> Rational {
        self.terms.iter().filter(|(s, _)| s.grade == grade).map(|(_, c)| c.clone()).sum()
    }

    /// `deg(z₁·z₂)`.
    pub fn pair(&self, other: &CycleRingElement) -> Result<Rational> {
        Ok(self.mul(other)?.degree())
    }

    /// Image in `ℚ[c]/(c^{m+1})`: `[U]_n ↦ cⁿ`.
    pub fn reduce_to_truncated(&self) -> TruncatedPoly {
        let mut coeffs = vec![Rational::zero(); self.cutoff + 1];
        for (s, c) in &self.terms {
            coeffs[s.grade] += c;
        }
        TruncatedPoly { coeffs }
    }

    /// Applies `g` to every subspace.
    pub fn image(&self, g: &IsometryMap) -> CycleRingElement {
        let mut out = Self::zero(self.cutoff);
        for (s, c) in &self.terms {
            out.add_term(s.image(g), c.clone()).expect("grades are preserved");
        }
        out
    }

    /// True when `g·z = z` for every `g` in `gens`.
    pub fn is_invariant(&self, gens: &[IsometryMap]) -> bool {
        gens.iter().all(|g| &self.image(g) == self)
    }
}

impl fmt::Display for CycleRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let coeff = match format_rational(c).as_str() {
                "1" => String::new(),
                "-1" => "-".into(),
                other => format!("{other}·"),
            };
            write!(f, "{coeff}{:?}_{}", s.basis, s.grade)?;
        }
        Ok(())
    }
}

/// `Σ aₙ cⁿ` in `ℚ[c]/(c^{m+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPoly {
    coeffs: Vec<Rational>,
}

impl TruncatedPoly {
    pub fn zero(cutoff: usize) -> Self {
        TruncatedPoly { coeffs: vec![Rational::zero(); cutoff + 1] }
    }

    /// `a·cⁿ`, or zero when `n > m`.
    pub fn monomial(cutoff: usize, n: usize, a: Rational) -> Self {
        let mut p = Self::zero(cutoff);
        if n <= cutoff {
            p.coeffs[n] = a;
        }
        p
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated polynomial has at least the constant term");
        TruncatedPoly { coeffs }
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mul(&self, other: &TruncatedPoly) -> Result<TruncatedPoly> {
        if self.cutoff() != other.cutoff() {
            return Err(Error::CutoffMismatch(self.cutoff(), other.cutoff()));
        }
        let m = self.cutoff();
        let mut out = Self::zero(m);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(m + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if n == 0 {
                format_rational(a)
            } else if a.is_one() {
                String::new()
            } else if *a == -Rational::one() {
                "-".into()
            } else {
                format_rational(a)
            };
            match n {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}c")?,
                _ => write!(f, "{coeff}c^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `Z_n(U)_Γ = Σ_{γ ∈ Γ/Γ_U} [γU]_n` for the group generated by `gens`.
/// Fails with `ResourceLimit` once the orbit exceeds `max_orbit`.
pub fn orbit_sum(
    cutoff: usize,
    sym: &SubspaceSymbol,
    gens: &[IsometryMap],
    max_orbit: usize,
) -> Result<CycleRingElement> {
    let orbit = subspace_orbit(sym, gens, max_orbit)?;
    let mut out = CycleRingElement::zero(cutoff);
    for s in orbit {
        out.add_term(s, Rational::one())?;
    }
    Ok(out)
}

/// The orbit of a symbol, in sorted order.
pub fn subspace_orbit(sym: &SubspaceSymbol, gens: &[IsometryMap], max_orbit: usize) -> Result<Vec<SubspaceSymbol>> {
    let mut seen: HashSet<SubspaceSymbol> = HashSet::from([sym.clone()]);
    let mut stack = vec![sym.clone()];
    while let Some(s) = stack.pop() {
        for g in gens {
            let t = s.image(g);
            if !seen.contains(&t) {
                if seen.len() >= max_orbit {
                    return Err(Error::ResourceLimit(format!("subspace orbit exceeds {max_orbit} elements")));
                }
                seen.insert(t.clone());
                stack.push(t);
            }
        }
    }
    let mut out: Vec<SubspaceSymbol> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Right side of the orbit-sum product formula, computed from an explicit
/// list of group elements: one pair `(γ₁U₁, γ₂U₂)` per `Γ`-orbit on
/// `Γ/Γ_{U₁} × Γ/Γ_{U₂}`, contributing `Σ_{γ ∈ Γ/(Γ_A ∩ Γ_B)} [γ(A+B)]`.
/// The inner sum is `[Γ_W : Γ_A ∩ Γ_B]·Z_{n₁+n₂}(W)_Γ` with `W = A + B`.
pub fn orbit_product_by_double_cosets(
    cutoff: usize,
    u1: &SubspaceSymbol,
    u2: &SubspaceSymbol,
    group: &[IsometryMap],
) -> Result<CycleRingElement> {
    let orbit = |s: &SubspaceSymbol| -> Vec<SubspaceSymbol> {
        let mut v: Vec<SubspaceSymbol> = group.iter().map(|g| s.image(g)).collect();
        v.sort();
        v.dedup();
        v
    };
    let (o1, o2) = (orbit(u1), orbit(u2));
    let mut covered: HashSet<(SubspaceSymbol, SubspaceSymbol)> = HashSet::new();
    let mut out = CycleRingElement::zero(cutoff);
    for a in &o1 {
        for b in &o2 {
            if covered.contains(&(a.clone(), b.clone())) {
                continue;
            }
            // the orbit of the pair, with the images of A + B it produces
            let mut pair_orbit: HashSet<(SubspaceSymbol, SubspaceSymbol)> = HashSet::new();
            for g in group {
                pair_orbit.insert((a.image(g), b.image(g)));
            }
            if a.grade + b.grade <= cutoff {
                for (x, y) in &pair_orbit {
                    out.add_term(x.join(y), Rational::one())?;
                }
            }
            covered.extend(pair_orbit);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::group_closure;
    use crate::linalg::rat;

    fn sym(grade: usize, rows: &[&[i64]]) -> SubspaceSymbol {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        SubspaceSymbol::new(grade, &v, 3).unwrap()
    }

    fn el(cutoff: usize, s: SubspaceSymbol) -> CycleRingElement {
        CycleRingElement::from_symbol(cutoff, s).unwrap()
    }

    fn permutations3() -> Vec<IsometryMap> {
        let swap = IsometryMap::new(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        let cycle = IsometryMap::new(vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        vec![swap, cycle]
    }

    #[test]
    fn canonical_symbols() {
        assert_eq!(sym(1, &[&[2, 4, 0]]), sym(1, &[&[-1, -2, 0]]));
        assert_eq!(sym(2, &[&[1, 0, 0], &[0, 1, 0]]), sym(2, &[&[1, 1, 0], &[1, -1, 0]]));
        assert!(matches!(SubspaceSymbol::new(0, &[vec![1, 0, 0]], 3), Err(Error::SubspaceTooLarge { .. })));
    }

    #[test]
    fn unit_and_cutoff() {
        let m = 3;
        let z = el(m, sym(2, &[&[1, 2, 3]]));
        assert_eq!(CycleRingElement::one(m, 3).mul(&z).unwrap(), z);
        let top = el(m, sym(m, &[&[1, 0, 0]]));
        assert!(CycleRingElement::c(m, 3).unwrap().mul(&top).unwrap().is_zero());
        let u = el(m, sym(1, &[&[0, 1, 0]]));
        assert_eq!(u.mul(&u).unwrap(), el(m, sym(2, &[&[0, 1, 0]])));
    }

    #[test]
    fn degree_and_pairing() {
        let m = 2;
        assert_eq!(el(m, sym(2, &[&[1, 0, 0]])).degree(), rat(1));
        assert_eq!(el(m, sym(1, &[&[1, 0, 0]])).degree(), rat(0));
        let z = el(m, sym(2, &[&[1, 0, 0]])).scale(&rat(3)).sub(&el(m, sym(2, &[&[0, 1, 0]])).scale(&rat(3))).unwrap();
        assert_eq!(z.degree(), rat(0));
        let w = el(m, sym(1, &[&[1, 1, 0]]));
        let diff = el(m, sym(1, &[&[0, 0, 1]])).sub(&el(m, sym(1, &[&[1, 0, 0]]))).unwrap();
        assert_eq!(w.pair(&diff).unwrap(), rat(0));
        assert_eq!(w.pair(&el(m, sym(1, &[&[0, 0, 1]]))).unwrap(), rat(1));
        assert_eq!(CycleRingElement::one(m, 3).pair(&w).unwrap(), rat(0));
    }

    #[test]
    fn reduction_examples() {
        let m = 3;
        let z = el(m, sym(1, &[&[1, 0, 0]])).scale(&rat(2)).add(&el(m, sym(3, &[&[0, 1, 0], &[0, 0, 1]]))).unwrap();
        assert_eq!(z.reduce_to_truncated().to_string(), "2c + c^3");
        let r = el(m, sym(2, &[&[1, 0, 0]])).sub(&el(m, sym(2, &[&[0, 1, 0]]))).unwrap();
        assert_eq!(r.reduce_to_truncated(), TruncatedPoly::zero(m));
    }

    #[test]
    fn orbit_sums_under_permutations() {
        let z = orbit_sum(3, &sym(1, &[&[1, 0, 0]]), &permutations3(), 100).unwrap();
        let expect = el(3, sym(1, &[&[1, 0, 0]]))
            .add(&el(3, sym(1, &[&[0, 1, 0]])))
            .unwrap()
            .add(&el(3, sym(1, &[&[0, 0, 1]])))
            .unwrap();
        assert_eq!(z, expect);
        let trivial = orbit_sum(3, &sym(1, &[&[1, 2, 3]]), &[], 100).unwrap();
        assert_eq!(trivial, el(3, sym(1, &[&[1, 2, 3]])));
        let minus = IsometryMap::new(vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]);
        assert_eq!(orbit_sum(3, &sym(1, &[&[1, 2, 3]]), &[minus], 100).unwrap(), trivial);
    }

    #[test]
    fn orbit_product_formula_on_permutations() {
        let gens = permutations3();
        let group = group_closure(&gens, 3, 100).unwrap();
        assert_eq!(group.len(), 6);
        let m = 3;
        let cases = [
            (sym(1, &[&[1, 0, 0]]), sym(1, &[&[0, 1, 0]])),
            (sym(1, &[&[1, 0, 0]]), sym(1, &[&[1, 0, 0]])),
            (sym(1, &[&[1, 1, 0]]), sym(2, &[&[0, 0, 1]])),
            (sym(1, &[&[1, 2, 0]]), sym(1, &[&[1, -1, 1]])),
        ];
        for (u1, u2) in cases {
            let lhs = orbit_sum(m, &u1, &gens, 100).unwrap().mul(&orbit_sum(m, &u2, &gens, 100).unwrap()).unwrap();
            let rhs = orbit_product_by_double_cosets(m, &u1, &u2, &group).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
