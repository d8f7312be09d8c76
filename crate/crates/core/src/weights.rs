//! Weight functions on `n`-tuples of lattice vectors: either a constant
//! multiple of the indicator of `Lⁿ`, or a finitely supported table on
//! residues `(L/NL)ⁿ` of a base lattice.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{GramTarget, Lattice};
use crate::linalg::{rat, Rational};

/// Tables larger than this are refused when lifting to a finer modulus.
pub const MAX_TABLE_ENTRIES: usize = 1 << 20;

/// Residues of the `n` components mod `N`, each reduced into `0..N`.
pub type Residue = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunction {
    n: usize,
    kind: Kind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    /// `c` times the indicator of `Lⁿ`; the trivial weight is `c = 1`.
    Constant(Rational),
    /// `entries` is keyed by the residues of the components flagged in
    /// `constrained`; the weight does not depend on the other components.
    Table { base: Lattice, modulus: i64, constrained: Vec<bool>, entries: BTreeMap<Residue, Rational> },
}

impl WeightFunction {
    pub fn trivial(n: usize) -> Self {
        WeightFunction { n, kind: Kind::Constant(rat(1)) }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        WeightFunction { n, kind: Kind::Constant(c) }
    }

    /// The value of a constant weight.
    pub fn constant_value(&self) -> Option<&Rational> {
        match &self.kind {
            Kind::Constant(c) => Some(c),
            Kind::Table { .. } => None,
        }
    }

    /// A table weight. Residues are reduced mod `modulus`; zero values are
    /// dropped and repeated residues add up.
    pub fn from_entries(
        base: &Lattice,
        n: usize,
        modulus: i64,
        entries: impl IntoIterator<Item = (Residue, Rational)>,
    ) -> Result<Self> {
        Self::from_partial_entries(base, n, modulus, &[], entries)
    }

    /// A table weight ignoring the components listed in `free`; residues
    /// cover the remaining components in order.
    pub fn from_partial_entries(
        base: &Lattice,
        n: usize,
        modulus: i64,
        free: &[usize],
        entries: impl IntoIterator<Item = (Residue, Rational)>,
    ) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::Parse(format!("modulus must be positive, got {modulus}")));
        }
        if let Some(i) = free.iter().find(|&&i| i >= n) {
            return Err(Error::DimensionMismatch(format!("free component {i} of a weight on {n}-tuples")));
        }
        let constrained: Vec<bool> = (0..n).map(|i| !free.contains(&i)).collect();
        let k = constrained.iter().filter(|c| **c).count();
        let mut table: BTreeMap<Residue, Rational> = BTreeMap::new();
        for (res, value) in entries {
            if res.len() != k || res.iter().any(|r| r.len() != base.rank()) {
                return Err(Error::DimensionMismatch(format!(
                    "residue must be {k} vectors of length {}",
                    base.rank()
                )));
            }
            let key: Residue = res.iter().map(|r| r.iter().map(|x| x.rem_euclid(modulus)).collect()).collect();
            *table.entry(key).or_insert_with(Rational::zero) += value;
        }
        table.retain(|_, v| !v.is_zero());
        Ok(WeightFunction { n, kind: Kind::Table { base: base.clone(), modulus, constrained, entries: table } })
    }

    /// Indicator of the coset `residue + N·Lⁿ`.
    pub fn coset_indicator(base: &Lattice, modulus: i64, residue: Residue) -> Result<Self> {
        let n = residue.len();
        Self::from_entries(base, n, modulus, [(residue, rat(1))])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_trivial(&self) -> bool {
        matches!(&self.kind, Kind::Constant(c) if c.is_one())
    }

    /// `1` for the trivial weight.
    pub fn modulus(&self) -> i64 {
        match &self.kind {
            Kind::Constant(_) => 1,
            Kind::Table { modulus, .. } => *modulus,
        }
    }

    pub fn base(&self) -> Option<&Lattice> {
        match &self.kind {
            Kind::Constant(_) => None,
            Kind::Table { base, .. } => Some(base),
        }
    }

    /// Indices of the components the weight ignores; all of them for a
    /// constant weight.
    pub fn free_components(&self) -> Vec<usize> {
        let mask = self.mask();
        (0..self.n).filter(|&i| !mask[i]).collect()
    }

    fn mask(&self) -> Vec<bool> {
        match &self.kind {
            Kind::Constant(_) => vec![false; self.n],
            Kind::Table { constrained, .. } => constrained.clone(),
        }
    }

    /// Table entries in residue order, listing only the residues of the
    /// constrained components; empty for constant weights.
    pub fn entries(&self) -> Vec<(Residue, Rational)> {
        match &self.kind {
            Kind::Constant(_) => Vec::new(),
            Kind::Table { entries, .. } => entries.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    pub fn evaluate(&self, x: &[&[i64]]) -> Rational {
        match &self.kind {
            Kind::Constant(c) => c.clone(),
            Kind::Table { modulus, constrained, entries, .. } => {
                let key: Residue = x
                    .iter()
                    .zip(constrained)
                    .filter(|(_, c)| **c)
                    .map(|(v, _)| v.iter().map(|c| c.rem_euclid(*modulus)).collect())
                    .collect();
                entries.get(&key).cloned().unwrap_or_else(Rational::zero)
            }
        }
    }

    /// `φ(0, …, 0)`.
    pub fn at_zero(&self, rank: usize) -> Rational {
        let zero = vec![0i64; rank];
        let x: Vec<&[i64]> = (0..self.n).map(|_| zero.as_slice()).collect();
        self.evaluate(&x)
    }

    /// The same function as a table modulo a multiple `N` of the current
    /// modulus, keyed by the components flagged in `mask` (a superset of
    /// the constrained ones).
    fn table_at(&self, base: &Lattice, modulus: i64, mask: &[bool]) -> Result<BTreeMap<Residue, Rational>> {
        let rank = base.rank();
        let own = self.mask();
        let (old_mod, old): (i64, Vec<(Residue, Rational)>) = match &self.kind {
            Kind::Constant(c) => (1, vec![(Vec::new(), c.clone())]),
            Kind::Table { modulus, entries, .. } => (*modulus, entries.iter().map(|(k, v)| (k.clone(), v.clone())).collect()),
        };
        debug_assert_eq!(modulus % old_mod, 0);
        let step = modulus / old_mod;
        let kept = own.iter().filter(|c| **c).count();
        let added = mask.iter().zip(&own).filter(|(m, o)| **m && !**o).count();
        let per_entry = (step as u128)
            .checked_pow((rank * kept) as u32)
            .and_then(|a| (modulus as u128).checked_pow((rank * added) as u32).and_then(|b| a.checked_mul(b)))
            .unwrap_or(u128::MAX);
        if per_entry.saturating_mul(old.len() as u128) > MAX_TABLE_ENTRIES as u128 {
            return Err(Error::ResourceLimit(format!(
                "lifting a weight to modulus {modulus} needs more than {MAX_TABLE_ENTRIES} table entries"
            )));
        }
        let mut out = BTreeMap::new();
        for (res, value) in old {
            // per flagged component: (residue, stride) with stride = old modulus, or 1 for a newly keyed one
            let mut comps = res.into_iter();
            let mut base_res: Vec<i64> = Vec::new();
            let mut strides: Vec<i64> = Vec::new();
            for (m, o) in mask.iter().zip(&own) {
                match (m, o) {
                    (true, true) => {
                        base_res.extend(comps.next().expect("one residue per constrained component"));
                        strides.extend(std::iter::repeat_n(old_mod, rank));
                    }
                    (true, false) => {
                        base_res.extend(std::iter::repeat_n(0, rank));
                        strides.extend(std::iter::repeat_n(1, rank));
                    }
                    (false, true) => unreachable!("mask must contain the constrained components"),
                    (false, false) => {}
                }
            }
            let mut offs = vec![0i64; base_res.len()];
            loop {
                let lifted: Vec<i64> = (0..offs.len()).map(|i| base_res[i] + offs[i] * strides[i]).collect();
                out.insert(lifted.chunks(rank.max(1)).map(<[i64]>::to_vec).collect(), value.clone());
                let mut i = 0;
                while i < offs.len() {
                    offs[i] += 1;
                    if offs[i] * strides[i] < modulus {
                        break;
                    }
                    offs[i] = 0;
                    i += 1;
                }
                if i == offs.len() {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// `(φ₁⊗φ₂)(x₁, x₂) = φ₁(x₁)·φ₂(x₂)`.
    pub fn tensor(&self, other: &WeightFunction) -> Result<WeightFunction> {
        let n = self.n + other.n;
        let base = match (self.base(), other.base()) {
            (None, None) => {
                let c = self.constant_value().expect("constant") * other.constant_value().expect("constant");
                return Ok(WeightFunction::constant(n, c));
            }
            (Some(a), Some(b)) if a.gram() != b.gram() => return Err(Error::BaseMismatch),
            (Some(a), _) | (None, Some(a)) => a.clone(),
        };
        let modulus = num_integer::lcm(self.modulus(), other.modulus());
        let (m1, m2) = (self.mask(), other.mask());
        let left = self.table_at(&base, modulus, &m1)?;
        let right = other.table_at(&base, modulus, &m2)?;
        let mut entries = BTreeMap::new();
        for (r1, v1) in &left {
            for (r2, v2) in &right {
                let mut key = r1.clone();
                key.extend(r2.iter().cloned());
                let v = v1 * v2;
                if !v.is_zero() {
                    entries.insert(key, v);
                }
            }
        }
        let constrained = m1.into_iter().chain(m2).collect();
        Ok(WeightFunction { n, kind: Kind::Table { base, modulus, constrained, entries } })
    }

    /// `a·φ₁ + b·φ₂`.
    pub fn linear_combination(a: &Rational, f1: &WeightFunction, b: &Rational, f2: &WeightFunction) -> Result<WeightFunction> {
        if f1.n != f2.n {
            return Err(Error::DimensionMismatch(format!("weights on {}- and {}-tuples", f1.n, f2.n)));
        }
        let base = match (f1.base(), f2.base()) {
            (Some(x), Some(y)) if x.gram() != y.gram() => return Err(Error::BaseMismatch),
            (Some(x), _) | (None, Some(x)) => x.clone(),
            (None, None) => {
                let c = a * f1.constant_value().expect("constant") + b * f2.constant_value().expect("constant");
                return Ok(WeightFunction::constant(f1.n, c));
            }
        };
        let modulus = num_integer::lcm(f1.modulus(), f2.modulus());
        let mask: Vec<bool> = f1.mask().iter().zip(f2.mask()).map(|(x, y)| *x || y).collect();
        let t1 = f1.table_at(&base, modulus, &mask)?;
        let t2 = f2.table_at(&base, modulus, &mask)?;
        let mut entries: BTreeMap<Residue, Rational> = BTreeMap::new();
        for (k, v) in t1.into_iter().map(|(k, v)| (k, a * v)).chain(t2.into_iter().map(|(k, v)| (k, b * v))) {
            *entries.entry(k).or_insert_with(Rational::zero) += v;
        }
        entries.retain(|_, v| !v.is_zero());
        Ok(WeightFunction { n: f1.n, kind: Kind::Table { base, modulus, constrained: mask, entries } })
    }
}

/// `Σ_{x : Q(x) = T} φ(x)` over tuples in `lattice`. A table weight may only
/// be evaluated on its own base lattice.
pub fn rep_number_weighted(lattice: &Lattice, t: &GramTarget, phi: &WeightFunction) -> Result<Rational> {
    if phi.n() != t.n() {
        return Err(Error::DimensionMismatch(format!("weight on {}-tuples, target of size {}", phi.n(), t.n())));
    }
    match phi.base() {
        None => {
            let c = phi.constant_value().expect("weights without a base are constant");
            Ok(c * Rational::from_integer(lattice.rep_number(t).into()))
        }
        Some(base) if base.gram() != lattice.gram() => Err(Error::UnsupportedWeightTransport),
        Some(_) => {
            let mut total = Rational::zero();
            lattice.for_each_gram_tuple(t, |x| total += phi.evaluate(x));
            Ok(total)
        }
    }
}
