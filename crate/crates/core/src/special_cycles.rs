//! Genus-class functions valued in the symbol ring, special cycles, their
//! flat images, the total degree and inner product, genus averages of
//! representation numbers, and ranks of pairing matrices.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cycle_ring::{CycleRingElement, SubspaceSymbol};
use crate::error::{Error, Result};
use crate::genus::GenusData;
use crate::lattice::GramTarget;
use crate::linalg::{rat, Rational, RationalMatrix};
use crate::weights::{rep_number_weighted, WeightFunction};

/// Cutoff of the symbol ring attached to a genus of rank `r`: `r − 2`.
pub fn cutoff_of(genus: &GenusData) -> Result<usize> {
    genus
        .base
        .rank()
        .checked_sub(2)
        .ok_or_else(|| Error::DimensionMismatch("the symbol ring needs rank at least 2".into()))
}

fn same_genus(a: &Arc<GenusData>, b: &Arc<GenusData>) -> bool {
    Arc::ptr_eq(a, b)
        || (a.classes.len() == b.classes.len()
            && a.classes.iter().zip(&b.classes).all(|(x, y)| x.lattice.gram() == y.lattice.gram()))
}

/// One symbol-ring value per genus class.
#[derive(Clone, Debug)]
pub struct GenusClassFunction {
    genus: Arc<GenusData>,
    values: Vec<CycleRingElement>,
    /// Grade of a special cycle, kept so that a vanishing cycle still flattens.
    grade: Option<usize>,
}

impl GenusClassFunction {
    pub fn new(genus: Arc<GenusData>, values: Vec<CycleRingElement>) -> Result<Self> {
        let m = cutoff_of(&genus)?;
        if values.len() != genus.classes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} classes",
                values.len(),
                genus.classes.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| v.cutoff() != m) {
            return Err(Error::CutoffMismatch(v.cutoff(), m));
        }
        Ok(GenusClassFunction { genus, values, grade: None })
    }

    pub fn genus(&self) -> &Arc<GenusData> {
        &self.genus
    }

    pub fn values(&self) -> &[CycleRingElement] {
        &self.values
    }

    pub fn cutoff(&self) -> usize {
        self.values.first().map_or(0, CycleRingElement::cutoff)
    }

    /// True when each value is fixed by the generators of `O(L_j)`, and so
    /// in particular by `SO(L_j)`.
    pub fn is_invariant(&self) -> bool {
        self.values.iter().zip(&self.genus.classes).all(|(v, c)| v.is_invariant(&c.aut.generators))
    }

    /// Classwise symbol product.
    pub fn sharp_product(&self, other: &GenusClassFunction) -> Result<GenusClassFunction> {
        if !same_genus(&self.genus, &other.genus) {
            return Err(Error::GenusMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.mul(b)).collect::<Result<Vec<_>>>()?;
        let grade = match (self.grade, other.grade) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(GenusClassFunction { genus: self.genus.clone(), values, grade })
    }

    pub fn add(&self, other: &GenusClassFunction) -> Result<GenusClassFunction> {
        if !same_genus(&self.genus, &other.genus) {
            return Err(Error::GenusMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect::<Result<Vec<_>>>()?;
        let grade = if self.grade == other.grade { self.grade } else { None };
        Ok(GenusClassFunction { genus: self.genus.clone(), values, grade })
    }

    /// Per-class coefficient sums of a homogeneous class function.
    pub fn flat(&self) -> Result<ReducedClass> {
        let mut grade = self.grade;
        for v in &self.values {
            match (v.grades().as_slice(), grade) {
                ([], _) => {}
                ([g], None) => grade = Some(*g),
                ([g], Some(h)) if *g == h => {}
                _ => return Err(Error::NotHomogeneous),
            }
        }
        let grade = grade.ok_or(Error::NotHomogeneous)?;
        let rep = self.values.iter().map(|v| v.grade_sum(grade)).collect();
        ReducedClass::new(self.genus.clone(), grade, rep)
    }
}

/// `rep·cⁿ`: one rational per genus class.
#[derive(Clone, Debug)]
pub struct ReducedClass {
    genus: Arc<GenusData>,
    grade: usize,
    rep: Vec<Rational>,
}

impl ReducedClass {
    pub fn new(genus: Arc<GenusData>, grade: usize, rep: Vec<Rational>) -> Result<Self> {
        let m = cutoff_of(&genus)?;
        if grade > m {
            return Err(Error::GradeAboveCutoff { grade, cutoff: m });
        }
        if rep.len() != genus.classes.len() {
            return Err(Error::DimensionMismatch(format!("{} values for {} classes", rep.len(), genus.classes.len())));
        }
        Ok(ReducedClass { genus, grade, rep })
    }

    /// The class `value·cⁿ` on every genus class.
    pub fn constant(genus: Arc<GenusData>, grade: usize, value: Rational) -> Result<Self> {
        let k = genus.classes.len();
        Self::new(genus, grade, vec![value; k])
    }

    pub fn genus(&self) -> &Arc<GenusData> {
        &self.genus
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn rep(&self) -> &[Rational] {
        &self.rep
    }

    /// `Σ_j w_j·rep_j / Σ_j w_j` with `w_j = 1/|SO(L_j)|`.
    pub fn genus_average(&self) -> Rational {
        weighted_average(&self.genus, &self.rep)
    }

    /// `rep₁·rep₂` per class, with grades added.
    pub fn mul(&self, other: &ReducedClass) -> Result<ReducedClass> {
        if !same_genus(&self.genus, &other.genus) {
            return Err(Error::GenusMismatch);
        }
        let rep = self.rep.iter().zip(&other.rep).map(|(a, b)| a * b).collect();
        ReducedClass::new(self.genus.clone(), self.grade + other.grade, rep)
    }
}

fn weighted_average(genus: &GenusData, values: &[Rational]) -> Rational {
    let w = genus.weights();
    let total: Rational = w.iter().sum();
    let s: Rational = w.iter().zip(values).map(|(a, b)| a * b).sum();
    s / total
}

/// `2·Σ_j w_j·rep_j / Σ_j w_j` in the top grade, `0` otherwise.
pub fn deg_tot(z: &ReducedClass) -> Rational {
    let m = cutoff_of(&z.genus).expect("checked on construction");
    if z.grade != m {
        return Rational::zero();
    }
    rat(2) * z.genus_average()
}

/// `deg_tot(z₁·z₂)`: zero unless the grades add up to the cutoff.
pub fn inner_product(z1: &ReducedClass, z2: &ReducedClass) -> Result<Rational> {
    if !same_genus(&z1.genus, &z2.genus) {
        return Err(Error::GenusMismatch);
    }
    let m = cutoff_of(&z1.genus)?;
    if z1.grade + z2.grade != m {
        return Ok(Rational::zero());
    }
    let prod: Vec<Rational> = z1.rep.iter().zip(&z2.rep).map(|(a, b)| a * b).collect();
    Ok(rat(2) * weighted_average(&z1.genus, &prod))
}

/// Value at class `j`: `Σ_{x ∈ L_jⁿ, Q(x) = T} φ(x)·[span(x)]_n`.
pub fn special_cycle(genus: &Arc<GenusData>, t: &GramTarget, phi: &WeightFunction) -> Result<GenusClassFunction> {
    let m = cutoff_of(genus)?;
    let n = t.n();
    if n > m {
        return Err(Error::GradeAboveCutoff { grade: n, cutoff: m });
    }
    if phi.n() != n {
        return Err(Error::DimensionMismatch(format!("weight on {}-tuples, target of size {n}", phi.n())));
    }
    let mut values = Vec::with_capacity(genus.classes.len());
    for class in &genus.classes {
        let l = &class.lattice;
        if let Some(base) = phi.base() {
            if base.gram() != l.gram() {
                return Err(Error::UnsupportedWeightTransport);
            }
        }
        let rank = l.rank();
        let mut z = CycleRingElement::zero(m);
        let mut failure = None;
        l.for_each_gram_tuple(t, |x| {
            if failure.is_some() {
                return;
            }
            let w = phi.evaluate(x);
            if w.is_zero() {
                return;
            }
            let rows: Vec<Vec<i64>> = x.iter().map(|v| v.to_vec()).collect();
            let r = SubspaceSymbol::new(n, &rows, rank).and_then(|s| z.add_term(s, w));
            if let Err(e) = r {
                failure = Some(e);
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        values.push(z);
    }
    let mut f = GenusClassFunction::new(genus.clone(), values)?;
    f.grade = Some(n);
    Ok(f)
}

/// `flat(special_cycle(T, φ))` computed from representation numbers alone.
pub fn reduced_special_cycle(genus: &Arc<GenusData>, t: &GramTarget, phi: &WeightFunction) -> Result<ReducedClass> {
    let rep = genus
        .classes
        .iter()
        .map(|c| rep_number_weighted(&c.lattice, t, phi))
        .collect::<Result<Vec<_>>>()?;
    ReducedClass::new(genus.clone(), t.n(), rep)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinCoefficient {
    pub t: GramTarget,
    pub value: Rational,
}

/// Genus average of `rep(L_j, T, φ)` weighted by `1/|SO(L_j)|`.
pub fn eisenstein_coefficient(genus: &Arc<GenusData>, t: &GramTarget, phi: &WeightFunction) -> Result<EisensteinCoefficient> {
    let rep = genus
        .classes
        .iter()
        .map(|c| rep_number_weighted(&c.lattice, t, phi))
        .collect::<Result<Vec<_>>>()?;
    Ok(EisensteinCoefficient { t: t.clone(), value: weighted_average(genus, &rep) })
}

/// Generator of a special-cycle family: a Gram target with its weight.
pub type CycleGenerator = (GramTarget, WeightFunction);

/// Inner products between the flat special cycles of two families.
pub fn sc_pairing_matrix(
    genus: &Arc<GenusData>,
    left: &[CycleGenerator],
    right: &[CycleGenerator],
) -> Result<RationalMatrix> {
    let flats = |gens: &[CycleGenerator]| -> Result<Vec<ReducedClass>> {
        gens.iter().map(|(t, phi)| reduced_special_cycle(genus, t, phi)).collect()
    };
    let (l, r) = (flats(left)?, flats(right)?);
    let mut m = RationalMatrix::zeros(l.len(), r.len());
    for (i, a) in l.iter().enumerate() {
        for (j, b) in r.iter().enumerate() {
            m.set(i, j, inner_product(a, b)?);
        }
    }
    Ok(m)
}

/// Rank of a pairing matrix and a basis of its left kernel (combinations
/// of the row generators pairing to zero with every column generator),
/// by fraction-free elimination.
pub fn sc_radical_rank(m: &RationalMatrix) -> (usize, Vec<Vec<Rational>>) {
    let (rows, cols) = (m.rows(), m.cols());
    // work on the transpose: its right kernel is the left kernel of m
    let mut a: Vec<Vec<BigInt>> = (0..cols)
        .map(|j| {
            let den = (0..rows).fold(BigInt::one(), |acc, i| num_integer::lcm(acc, m.get(i, j).denom().clone()));
            (0..rows).map(|i| (m.get(i, j) * Rational::from_integer(den.clone())).to_integer()).collect()
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..rows {
        if r == cols {
            break;
        }
        let Some(p) = (r..cols).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..cols {
            for k in c + 1..rows {
                a[i][k] = (&a[r][c] * &a[i][k] - &a[i][c] * &a[r][k]) / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    let kernel = (0..rows)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); rows];
            v[free] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate().rev() {
                let s: Rational = (pc + 1..rows).map(|k| Rational::from_integer(a[i][k].clone()) * &v[k]).sum();
                v[pc] = -s / Rational::from_integer(a[i][pc].clone());
            }
            v
        })
        .collect();
    (rank, kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::genus::GenusData;
    use crate::isometry::SearchLimits;
    use crate::linalg::ratio;

    fn e8_genus() -> Arc<GenusData> {
        Arc::new(GenusData::single_class(&data::e8(), SearchLimits::default()).unwrap())
    }

    #[test]
    fn e8_root_cycle() {
        let g = e8_genus();
        let t = GramTarget::scalar(rat(1)).unwrap();
        let z = special_cycle(&g, &t, &WeightFunction::trivial(1)).unwrap();
        assert_eq!(z.values()[0].len(), 120);
        assert!(z.is_invariant());
        let flat = z.flat().unwrap();
        assert_eq!(flat.rep(), &[rat(240)]);
        assert_eq!(deg_tot(&ReducedClass::constant(g.clone(), 6, rat(1)).unwrap()), rat(2));
        let zero5 = reduced_special_cycle(&g, &GramTarget::zero(5), &WeightFunction::trivial(5)).unwrap();
        assert_eq!(inner_product(&flat, &zero5).unwrap(), rat(480));
        assert_eq!(eisenstein_coefficient(&g, &t, &WeightFunction::trivial(1)).unwrap().value, rat(240));
    }

    #[test]
    fn zero_target_gives_power_of_c() {
        let g = e8_genus();
        let e8 = data::e8();
        let phi = WeightFunction::from_entries(&e8, 2, 2, [(vec![vec![0; 8], vec![0; 8]], ratio(3, 2))]).unwrap();
        let z = special_cycle(&g, &GramTarget::zero(2), &phi).unwrap();
        let expect = CycleRingElement::c(6, 8).unwrap();
        let expect = expect.mul(&expect).unwrap().scale(&ratio(3, 2));
        assert_eq!(z.values()[0], expect);
    }

    #[test]
    fn radical_rank_basics() {
        let zero = RationalMatrix::zeros(2, 3);
        let (r, k) = sc_radical_rank(&zero);
        assert_eq!((r, k.len()), (0, 2));
        let id = RationalMatrix::identity(4);
        assert_eq!(sc_radical_rank(&id).0, 4);
        let m = RationalMatrix::from_rows(vec![
            vec![rat(1), rat(2), ratio(1, 2)],
            vec![rat(2), rat(4), rat(1)],
            vec![rat(0), rat(1), rat(3)],
        ])
        .unwrap();
        let (r, k) = sc_radical_rank(&m);
        assert_eq!(r, 2);
        assert_eq!(k.len(), 1);
        for j in 0..3 {
            let s: Rational = (0..3).map(|i| &k[0][i] * m.get(i, j)).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn e8_pairing_has_rank_one() {
        let g = e8_genus();
        let left: Vec<CycleGenerator> = [1, 2, 3]
            .iter()
            .map(|&q| (GramTarget::scalar(rat(q)).unwrap(), WeightFunction::trivial(1)))
            .collect();
        let right: Vec<CycleGenerator> = [0, 1]
            .iter()
            .map(|&q| {
                let t = GramTarget::scalar(rat(q)).unwrap().direct_sum(&GramTarget::zero(4));
                (t, WeightFunction::trivial(5))
            })
            .collect();
        let m = sc_pairing_matrix(&g, &left, &right).unwrap();
        assert_eq!(sc_radical_rank(&m).0, 1);
        assert_eq!(sc_pairing_matrix(&g, &[], &right).unwrap().rows(), 0);
    }
}
