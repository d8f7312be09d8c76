//! Truncated theta series of a genus: for every Gram target `T` with
//! `tr(2T)` up to a bound, the per-class weighted representation numbers
//! and their genus average.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::genus::GenusData;
use crate::lattice::{lll_gram, GramTarget, Lattice};
use crate::linalg::int::{self, IncrementalHnf, IntMatrix};
use crate::linalg::{rat, Rational, RationalMatrix};
use crate::special_cycles::reduced_special_cycle;
use crate::weights::WeightFunction;

/// Largest number of tuples visited while collecting targets.
pub const MAX_TUPLES: u64 = 20_000_000;
const CANONICAL_NODE_BUDGET: u64 = 2_000_000;

/// A representative of the `GL_n(ℤ)`-class of a Gram target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalTarget {
    pub target: GramTarget,
    /// False when the search fell back to an LLL-reduced form, which is not
    /// guaranteed to be unique.
    pub certified: bool,
}

/// Canonical form of `T` under `T ↦ UᵀTU`. The radical is split off as a
/// zero block at the end; the nondegenerate part is the lexicographically
/// smallest Gram matrix (off-diagonal entries in column order) among the
/// bases whose norms are the successive minima.
pub fn canonical_target(t: &GramTarget) -> CanonicalTarget {
    let n = t.n();
    let m = t.matrix();
    let den = m.denominator_lcm() * BigInt::from(2);
    let scaled = m.scale(&Rational::from_integer(den.clone()));
    let g = scaled.to_i64_rows().expect("target entries fit in i64");
    let w = split_radical(&g);
    let split = int::congruence(&g, &w);
    let r = n - int::integer_kernel(&g, n).len();
    let core: IntMatrix = split[..r].iter().map(|row| row[..r].to_vec()).collect();
    let (canon, certified) = if r == 0 { (Vec::new(), true) } else { canonical_definite(&core) };
    let mut full = vec![vec![0i64; n]; n];
    for i in 0..r {
        full[i][..r].copy_from_slice(&canon[i]);
    }
    let inv = Rational::new(BigInt::from(1), den);
    let matrix = RationalMatrix::from_i64_rows(&full).expect("square").scale(&inv);
    CanonicalTarget { target: GramTarget::new(matrix).expect("congruent to a PSD target"), certified }
}

/// Unimodular `W` whose last columns span the integral radical of `g`.
fn split_radical(g: &IntMatrix) -> IntMatrix {
    let n = g.len();
    let kernel = int::integer_kernel(g, n);
    let k = kernel.len();
    if k == 0 {
        return int::identity(n);
    }
    let (_, t) = int::echelon_with_transform(&int::transpose(&kernel), k);
    let t: IntMatrix = t.into_iter().map(|r| r.into_iter().map(|x| x as i64).collect()).collect();
    // t·K = [I; 0], so the first k columns of t⁻¹ are the kernel vectors
    let v = int::unimodular_inverse(&t).expect("echelon transform is unimodular");
    let order: Vec<usize> = (k..n).chain(0..k).collect();
    v.iter().map(|row| order.iter().map(|&j| row[j]).collect()).collect()
}

fn canonical_definite(g: &IntMatrix) -> (IntMatrix, bool) {
    let r = g.len();
    if r == 1 {
        return (g.clone(), true);
    }
    let lat = Lattice::from_i64_rows(g).expect("definite part");
    let (reduced, _) = lll_gram(g);
    let bound = (0..r).map(|i| reduced[i][i]).max().unwrap_or(0);
    let vecs = lat.short_vectors(bound);
    let mut hnf = IncrementalHnf::new(r);
    let mut minima = Vec::with_capacity(r);
    for (v, nrm) in &vecs {
        if hnf.rank() == r {
            break;
        }
        let before = hnf.rank();
        hnf.insert(v);
        if hnf.rank() > before {
            minima.push(*nrm);
        }
    }
    let levels: Vec<Vec<&Vec<i64>>> =
        minima.iter().map(|&nm| vecs.iter().filter(|(_, n)| *n == nm).map(|(v, _)| v).collect()).collect();
    let mut search = MinSearch { g, levels: &levels, best: None, chosen: Vec::new(), key: Vec::new(), nodes: 0 };
    search.run();
    match (search.best, search.nodes <= CANONICAL_NODE_BUDGET) {
        (Some((_, basis)), true) => (int::congruence(g, &int::transpose(&basis)), true),
        _ => (reduced, false),
    }
}

struct MinSearch<'a> {
    g: &'a IntMatrix,
    levels: &'a [Vec<&'a Vec<i64>>],
    best: Option<(Vec<i64>, IntMatrix)>,
    chosen: IntMatrix,
    key: Vec<i64>,
    nodes: u64,
}

impl MinSearch<'_> {
    fn run(&mut self) {
        let j = self.chosen.len();
        if j == self.levels.len() {
            if int::determinant(&self.chosen).abs() == 1
                && self.best.as_ref().is_none_or(|(k, _)| self.key < *k)
            {
                self.best = Some((self.key.clone(), self.chosen.clone()));
            }
            return;
        }
        self.nodes += 1;
        if self.nodes > CANONICAL_NODE_BUDGET {
            return;
        }
        for &v in &self.levels[j] {
            let col: Vec<i64> = self.chosen.iter().map(|b| int::bilinear(self.g, b, v)).collect();
            let len = self.key.len();
            self.key.extend_from_slice(&col);
            let worse = self.best.as_ref().is_some_and(|(k, _)| self.key.as_slice() > &k[..self.key.len()]);
            if !worse {
                self.chosen.push(v.clone());
                if int::is_primitive(&self.chosen, self.g.len()) {
                    self.run();
                }
                self.chosen.pop();
            }
            self.key.truncate(len);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientEntry {
    pub target: GramTarget,
    pub certified: bool,
    /// Weighted representation number per genus class.
    pub reps: Vec<Rational>,
    /// Genus average with weights `1/|SO(L_j)|`.
    pub average: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    pub n: usize,
    /// Bound on `tr(2T)`.
    pub bound: Rational,
    pub entries: Vec<CoefficientEntry>,
}

impl CoefficientTable {
    pub fn entry(&self, t: &GramTarget) -> Option<&CoefficientEntry> {
        self.entries.iter().find(|e| &e.target == t)
    }
}

fn trace2(t: &GramTarget) -> Rational {
    (0..t.n()).map(|i| t.matrix().get(i, i) * rat(2)).sum()
}

/// Targets with `tr(2T) ≤ bound`, one per `GL_n(ℤ)` class for constant
/// weights. A table weight is not invariant under change of basis of the
/// tuple, so targets are then kept as exact Gram matrices.
pub fn theta_expansion(genus: &Arc<GenusData>, n: usize, bound: &Rational, phi: &WeightFunction) -> Result<CoefficientTable> {
    if n == 0 {
        return Err(Error::DimensionMismatch("theta series need n ≥ 1".into()));
    }
    if phi.n() != n {
        return Err(Error::DimensionMismatch(format!("weight on {}-tuples, series of degree {n}", phi.n())));
    }
    let canonicalize = phi.base().is_none();
    let mut targets: BTreeSet<(Rational, GramTarget)> = BTreeSet::new();
    let mut flags: std::collections::BTreeMap<GramTarget, bool> = Default::default();
    let zero = GramTarget::zero(n);
    targets.insert((Rational::zero(), zero.clone()));
    flags.insert(zero, true);
    if *bound >= Rational::zero() {
        for class in &genus.classes {
            collect_targets(&class.lattice, n, bound, canonicalize, &mut targets, &mut flags)?;
        }
    }
    let mut entries = Vec::with_capacity(targets.len());
    for (_, t) in targets {
        let reduced = reduced_special_cycle_any_grade(genus, &t, phi)?;
        let average = reduced.1;
        entries.push(CoefficientEntry { certified: flags[&t], target: t, reps: reduced.0, average });
    }
    Ok(CoefficientTable { n, bound: bound.clone(), entries })
}

/// Per-class representation numbers and their average; unlike
/// [`reduced_special_cycle`] this does not require `n` to fit below the cutoff.
fn reduced_special_cycle_any_grade(genus: &Arc<GenusData>, t: &GramTarget, phi: &WeightFunction) -> Result<(Vec<Rational>, Rational)> {
    if genus.base.rank() >= 2 && t.n() + 2 <= genus.base.rank() {
        let r = reduced_special_cycle(genus, t, phi)?;
        let avg = r.genus_average();
        return Ok((r.rep().to_vec(), avg));
    }
    let reps = genus
        .classes
        .iter()
        .map(|c| crate::weights::rep_number_weighted(&c.lattice, t, phi))
        .collect::<Result<Vec<_>>>()?;
    let w = genus.weights();
    let total: Rational = w.iter().sum();
    let avg = w.iter().zip(&reps).map(|(a, b)| a * b).sum::<Rational>() / total;
    Ok((reps, avg))
}

fn collect_targets(
    l: &Lattice,
    n: usize,
    bound: &Rational,
    canonicalize: bool,
    targets: &mut BTreeSet<(Rational, GramTarget)>,
    flags: &mut std::collections::BTreeMap<GramTarget, bool>,
) -> Result<()> {
    let d = l.denominator();
    let int_bound = (bound * rat(d)).floor().to_integer().to_i64().unwrap_or(i64::MAX);
    let mut vecs: Vec<(Vec<i64>, i64)> = vec![(vec![0; l.rank()], 0)];
    vecs.extend(l.short_vectors(int_bound));
    let mut visited = 0u64;
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    let mut grams: BTreeSet<IntMatrix> = BTreeSet::new();
    fn rec(
        l: &Lattice,
        vecs: &[(Vec<i64>, i64)],
        n: usize,
        budget: i64,
        stack: &mut Vec<usize>,
        grams: &mut BTreeSet<IntMatrix>,
        visited: &mut u64,
    ) -> Result<()> {
        if stack.len() == n {
            *visited += 1;
            if *visited > MAX_TUPLES {
                return Err(Error::ResourceLimit(format!("more than {MAX_TUPLES} tuples below the trace bound")));
            }
            let g: IntMatrix = stack
                .iter()
                .map(|&i| stack.iter().map(|&j| int::bilinear(l.int_gram(), &vecs[i].0, &vecs[j].0)).collect())
                .collect();
            grams.insert(g);
            return Ok(());
        }
        for (i, (_, nrm)) in vecs.iter().enumerate() {
            if *nrm > budget {
                break;
            }
            stack.push(i);
            rec(l, vecs, n, budget - nrm, stack, grams, visited)?;
            stack.pop();
        }
        Ok(())
    }
    rec(l, &vecs, n, int_bound, &mut stack, &mut grams, &mut visited)?;
    let scale = Rational::new(BigInt::from(1), BigInt::from(2 * d));
    for g in grams {
        let t = GramTarget::new(RationalMatrix::from_i64_rows(&g)?.scale(&scale))?;
        let (t, certified) = if canonicalize {
            let c = canonical_target(&t);
            (c.target, c.certified)
        } else {
            (t, true)
        };
        let e = flags.entry(t.clone()).or_insert(true);
        *e &= certified;
        targets.insert((trace2(&t), t));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::isometry::SearchLimits;
    use crate::linalg::ratio;

    fn target(rows: &[&[i64]]) -> GramTarget {
        GramTarget::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn canonical_forms_of_equivalent_targets_agree() {
        let t = target(&[&[1, 0], &[0, 2]]);
        let u = [vec![1, 3], vec![1, 4]];
        let moved = GramTarget::new(t.matrix().congruence(&u).unwrap()).unwrap();
        let a = canonical_target(&t);
        let b = canonical_target(&moved);
        assert!(a.certified && b.certified);
        assert_eq!(a.target, b.target);
        let degenerate = target(&[&[1, 1], &[1, 1]]);
        assert_eq!(canonical_target(&degenerate).target, target(&[&[1, 0], &[0, 0]]));
    }

    #[test]
    fn hexagonal_and_square_differ() {
        let hex = GramTarget::new(
            RationalMatrix::from_rows(vec![vec![rat(1), ratio(1, 2)], vec![ratio(1, 2), rat(1)]]).unwrap(),
        )
        .unwrap();
        let hex2 = GramTarget::new(
            RationalMatrix::from_rows(vec![vec![rat(1), ratio(-1, 2)], vec![ratio(-1, 2), rat(1)]]).unwrap(),
        )
        .unwrap();
        assert_eq!(canonical_target(&hex).target, canonical_target(&hex2).target);
        assert_ne!(canonical_target(&hex).target, canonical_target(&target(&[&[1, 0], &[0, 1]])).target);
    }

    #[test]
    fn e8_theta_coefficients() {
        let g = Arc::new(GenusData::single_class(&data::e8(), SearchLimits::default()).unwrap());
        let table = theta_expansion(&g, 1, &rat(6), &WeightFunction::trivial(1)).unwrap();
        let reps: Vec<Rational> = table.entries.iter().map(|e| e.reps[0].clone()).collect();
        assert_eq!(reps, vec![rat(1), rat(240), rat(2160), rat(6720)]);
        let zero = theta_expansion(&g, 1, &rat(0), &WeightFunction::trivial(1)).unwrap();
        assert_eq!(zero.entries.len(), 1);
        assert_eq!(zero.entries[0].average, rat(1));
    }

    #[test]
    fn e8_degree_two_targets() {
        let g = Arc::new(GenusData::single_class(&data::e8(), SearchLimits::default()).unwrap());
        let table = theta_expansion(&g, 2, &rat(4), &WeightFunction::trivial(2)).unwrap();
        // 0, (1)⊕0, and the three classes of binary targets with unit diagonal
        assert_eq!(table.entries.len(), 5);
        let total: Rational = table.entries.iter().filter(|e| e.target.n() == 2).map(|e| e.reps[0].clone()).sum();
        assert!(total > Rational::zero());
        assert!(table.entries.iter().all(|e| e.certified));
    }
}
