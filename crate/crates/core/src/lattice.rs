//! Positive definite lattices, Gram targets, and exact enumeration of
//! vectors and tuples with prescribed Gram data.
//!
//! A [`Lattice`] stores the bilinear Gram matrix `(eᵢ, eⱼ)`; the quadratic
//! form is `Q(x) = ½(x, x)`. A [`GramTarget`] stores `T` with `Tᵢᵢ = Q(xᵢ)` and
//! `Tᵢⱼ = ½(xᵢ, xⱼ)`, so the bilinear Gram of a representing tuple is `2T`.
//!
//! Enumeration runs on the integral matrix `A = D·gram`, where `D` is the
//! least common denominator of the Gram entries. Branches are pruned with a
//! floating-point Fincke–Pohst bound widened by a small slack, and every
//! vector is confirmed in exact integer arithmetic before it is reported.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::int::{self, IntMatrix};
use crate::linalg::{cholesky_rational, rat, Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    gram: RationalMatrix,
    int_gram: IntMatrix,
    denom: i64,
}

impl Lattice {
    /// Checks symmetry and positive definiteness.
    pub fn new(gram: RationalMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if gram.rows() == 0 {
            return Err(Error::DimensionMismatch("lattice of rank 0".into()));
        }
        cholesky_rational(&gram)?;
        let denom = gram
            .denominator_lcm()
            .to_i64()
            .ok_or_else(|| Error::ResourceLimit("Gram denominators exceed i64".into()))?;
        let int_gram = gram
            .scale(&rat(denom))
            .to_i64_rows()
            .ok_or_else(|| Error::ResourceLimit("Gram entries exceed i64".into()))?;
        Ok(Lattice { gram, int_gram, denom })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(RationalMatrix::from_i64_rows(rows)?)
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    /// `D·gram`, integral.
    pub fn int_gram(&self) -> &IntMatrix {
        &self.int_gram
    }

    /// Least common denominator `D` of the Gram entries.
    pub fn denominator(&self) -> i64 {
        self.denom
    }

    pub fn determinant(&self) -> Rational {
        self.gram.determinant().expect("square")
    }

    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> Rational {
        Rational::new(BigInt::from(int::bilinear(&self.int_gram, x, y)), BigInt::from(self.denom))
    }

    /// `Q(x) = ½(x, x)`.
    pub fn q_value(&self, x: &[i64]) -> Rational {
        self.bilinear(x, x) / rat(2)
    }

    /// `D·(x, x)`.
    pub fn int_norm(&self, x: &[i64]) -> i64 {
        int::bilinear(&self.int_gram, x, x)
    }

    /// Paper-normalized Gram `T` of a tuple.
    pub fn gram_of(&self, tuple: &VectorTuple) -> GramTarget {
        let n = tuple.len();
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.bilinear(&tuple.0[i], &tuple.0[j]) / rat(2));
            }
        }
        GramTarget { matrix: m }
    }

    /// The lattice with Gram `Uᵀ·G·U`.
    pub fn transform(&self, u: &[Vec<i64>]) -> Result<Lattice> {
        Lattice::new(self.gram.congruence(u)?)
    }

    pub fn scaled(&self, s: &Rational) -> Result<Lattice> {
        Lattice::new(self.gram.scale(s))
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice::new(self.gram.block_diag(&other.gram)).expect("sum of positive definite forms")
    }

    /// True if the bilinear Gram is integral with even diagonal.
    pub fn is_even(&self) -> bool {
        self.denom == 1 && (0..self.rank()).all(|i| self.int_gram[i][i] % 2 == 0)
    }

    /// The scale `s` (either `D` or `2D`) making `s·gram` integral with even
    /// diagonal.
    pub fn even_scale(&self) -> i64 {
        if (0..self.rank()).all(|i| self.int_gram[i][i] % 2 == 0) {
            self.denom
        } else {
            2 * self.denom
        }
    }

    fn float_cholesky(&self) -> Vec<Vec<f64>> {
        let n = self.rank();
        let mut q: Vec<Vec<f64>> =
            self.int_gram.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        for i in 0..n {
            for j in i + 1..n {
                q[j][i] = q[i][j];
                q[i][j] /= q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    q[k][l] -= q[k][i] * q[i][l];
                }
            }
        }
        q
    }

    /// Visits every `x` with `D·(x, x) ≤ bound`, passing the exact value
    /// `D·(x, x)`. The zero vector is included. Visiting order is
    /// lexicographic on the reversed coordinates.
    pub fn for_each_short_vector(&self, bound: i64, mut f: impl FnMut(&[i64], i64)) {
        if bound < 0 {
            return;
        }
        let n = self.rank();
        let q = self.float_cholesky();
        let slack = 1e-6 * (1.0 + bound as f64);
        let mut x = vec![0i64; n];
        self.fp_recurse(n - 1, bound as f64 + slack, slack, bound, &q, &mut x, &mut f);
    }

    #[allow(clippy::too_many_arguments)]
    fn fp_recurse(
        &self,
        i: usize,
        remaining: f64,
        slack: f64,
        bound: i64,
        q: &[Vec<f64>],
        x: &mut Vec<i64>,
        f: &mut impl FnMut(&[i64], i64),
    ) {
        let n = x.len();
        let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
        let half = (remaining.max(0.0) / q[i][i]).sqrt() + 1e-9;
        let lo = (center - half).ceil() as i64;
        let hi = (center + half).floor() as i64;
        for xi in lo..=hi {
            let t = xi as f64 - center;
            let rest = remaining - q[i][i] * t * t;
            if rest < -slack {
                continue;
            }
            x[i] = xi;
            if i == 0 {
                let exact = self.int_norm(x);
                if exact <= bound {
                    f(x, exact);
                }
            } else {
                self.fp_recurse(i - 1, rest, slack, bound, q, x, f);
            }
        }
        x[i] = 0;
    }

    /// Integer units `D·(x, x)` corresponding to `Q(x) = q`, when integral.
    pub fn int_norm_for_q(&self, q: &Rational) -> Option<i64> {
        let v = q * rat(2 * self.denom);
        if v.is_integer() {
            v.numer().to_i64()
        } else {
            None
        }
    }

    /// All `x ∈ L` with `Q(x) = q`, each once. `q = 0` yields exactly `{0}`.
    pub fn enumerate_norm_vectors(&self, q: &Rational) -> Vec<Vec<i64>> {
        if q.is_zero() {
            return vec![vec![0; self.rank()]];
        }
        let Some(target) = self.int_norm_for_q(q).filter(|_| q.is_positive()) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        self.for_each_short_vector(target, |x, nrm| {
            if nrm == target {
                out.push(x.to_vec());
            }
        });
        out.sort();
        out
    }

    /// Counting path of [`Self::enumerate_norm_vectors`].
    pub fn count_norm_vectors(&self, q: &Rational) -> u64 {
        if q.is_zero() {
            return 1;
        }
        let Some(target) = self.int_norm_for_q(q).filter(|_| q.is_positive()) else {
            return 0;
        };
        let mut count = 0u64;
        self.for_each_short_vector(target, |_, nrm| {
            if nrm == target {
                count += 1;
            }
        });
        count
    }

    /// Counts of vectors by `D·(x, x)` for all values up to `bound`.
    pub fn norm_histogram(&self, bound: i64) -> BTreeMap<i64, u64> {
        let mut h = BTreeMap::new();
        self.for_each_short_vector(bound, |_, nrm| *h.entry(nrm).or_insert(0) += 1);
        h
    }

    /// All nonzero vectors with `D·(x, x) ≤ bound`, sorted by norm then coordinates.
    pub fn short_vectors(&self, bound: i64) -> Vec<(Vec<i64>, i64)> {
        let mut out = Vec::new();
        self.for_each_short_vector(bound, |x, nrm| {
            if nrm > 0 {
                out.push((x.to_vec(), nrm));
            }
        });
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        out
    }

    /// Tuples `x` with `Q(x) = T`, in canonical (sorted) order.
    pub fn enumerate_gram_tuples(&self, t: &GramTarget) -> Vec<VectorTuple> {
        let mut out = Vec::new();
        if let Some(plan) = TuplePlan::new(self, t) {
            plan.walk(&mut |tuple: &[usize]| {
                out.push(VectorTuple(tuple.iter().enumerate().map(|(k, &c)| plan.vector(k, c).to_vec()).collect()));
            });
        }
        out.sort();
        out
    }

    /// Calls `f` on every tuple `x` with `Q(x) = T`.
    pub fn for_each_gram_tuple(&self, t: &GramTarget, mut f: impl FnMut(&[&[i64]])) {
        if let Some(plan) = TuplePlan::new(self, t) {
            let mut buf: Vec<&[i64]> = Vec::with_capacity(t.n());
            plan.walk(&mut |tuple: &[usize]| {
                buf.clear();
                buf.extend(tuple.iter().enumerate().map(|(k, &c)| plan.vector(k, c)));
                f(&buf);
            });
        }
    }

    /// `|enumerate_gram_tuples(T)|` without materializing tuples.
    pub fn rep_number(&self, t: &GramTarget) -> u64 {
        if t.n() == 1 {
            return self.count_norm_vectors(t.matrix.get(0, 0));
        }
        match TuplePlan::new(self, t) {
            Some(plan) => plan.count(),
            None => 0,
        }
    }

    /// LLL-reduces the basis (δ = 0.99). Returns the reduced lattice and the
    /// unimodular `U` whose columns are the new basis vectors.
    pub fn lll(&self) -> (Lattice, IntMatrix) {
        let (g, u) = lll_gram(&self.int_gram);
        let gram = RationalMatrix::from_i64_rows(&g)
            .expect("rectangular")
            .scale(&Rational::new(BigInt::one(), BigInt::from(self.denom)));
        (Lattice { gram, int_gram: g, denom: self.denom }, u)
    }
}

/// Candidate vectors at one norm and their images under `A`.
type Candidates = std::rc::Rc<(Vec<Vec<i64>>, Vec<Vec<i64>>)>;

/// Candidate lists and pairing targets for tuple enumeration.
struct TuplePlan {
    n: usize,
    /// Pairing targets `D·(xᵢ, xⱼ)`.
    target: IntMatrix,
    /// Per level: candidate vectors and their images under `A`.
    cands: Vec<Candidates>,
}

impl TuplePlan {
    fn new(l: &Lattice, t: &GramTarget) -> Option<TuplePlan> {
        let n = t.n();
        let scale = rat(2 * l.denom);
        let mut target = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = t.matrix.get(i, j) * &scale;
                if !v.is_integer() {
                    return None;
                }
                target[i][j] = v.numer().to_i64()?;
            }
        }
        let mut cache: BTreeMap<i64, Candidates> = BTreeMap::new();
        let mut cands = Vec::with_capacity(n);
        for i in 0..n {
            let norm = target[i][i];
            let entry = cache
                .entry(norm)
                .or_insert_with(|| {
                    let vs = if norm == 0 {
                        vec![vec![0; l.rank()]]
                    } else {
                        let mut v = Vec::new();
                        l.for_each_short_vector(norm, |x, nrm| {
                            if nrm == norm {
                                v.push(x.to_vec());
                            }
                        });
                        v.sort();
                        v
                    };
                    let duals = vs.iter().map(|x| int::mat_vec(&l.int_gram, x)).collect();
                    std::rc::Rc::new((vs, duals))
                })
                .clone();
            cands.push(entry);
        }
        Some(TuplePlan { n, target, cands })
    }

    fn vector(&self, level: usize, idx: usize) -> &[i64] {
        &self.cands[level].0[idx]
    }

    fn fits(&self, level: usize, idx: usize, chosen: &[usize]) -> bool {
        let v = &self.cands[level].0[idx];
        chosen.iter().enumerate().all(|(j, &c)| int::dot(v, &self.cands[j].1[c]) == self.target[j][level])
    }

    fn walk(&self, f: &mut impl FnMut(&[usize])) {
        let mut chosen = Vec::with_capacity(self.n);
        self.walk_rec(&mut chosen, f);
    }

    fn walk_rec(&self, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        let level = chosen.len();
        if level == self.n {
            f(chosen);
            return;
        }
        for idx in 0..self.cands[level].0.len() {
            if self.fits(level, idx, chosen) {
                chosen.push(idx);
                self.walk_rec(chosen, f);
                chosen.pop();
            }
        }
    }

    fn count(&self) -> u64 {
        let mut chosen = Vec::with_capacity(self.n);
        self.count_rec(&mut chosen)
    }

    fn count_rec(&self, chosen: &mut Vec<usize>) -> u64 {
        let level = chosen.len();
        let last = level + 1 == self.n;
        let mut total = 0;
        for idx in 0..self.cands[level].0.len() {
            if self.fits(level, idx, chosen) {
                if last {
                    total += 1;
                } else {
                    chosen.push(idx);
                    total += self.count_rec(chosen);
                    chosen.pop();
                }
            }
        }
        total
    }
}

/// LLL on an integral positive definite Gram matrix. Gram–Schmidt data is
/// recomputed in floating point from the exact Gram at every step; the
/// returned Gram is exactly `Uᵀ·G·U`.
pub fn lll_gram(gram: &[Vec<i64>]) -> (IntMatrix, IntMatrix) {
    let n = gram.len();
    let mut g: IntMatrix = gram.to_vec();
    let mut u = int::identity(n);
    let delta = 0.99;
    let gs = |g: &IntMatrix| -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut mu = vec![vec![0.0; n]; n];
        let mut b = vec![0.0; n];
        for i in 0..n {
            for j in 0..i {
                let mut s = g[i][j] as f64;
                for k in 0..j {
                    s -= mu[j][k] * mu[i][k] * b[k];
                }
                mu[i][j] = s / b[j];
            }
            let mut s = g[i][i] as f64;
            for k in 0..i {
                s -= mu[i][k] * mu[i][k] * b[k];
            }
            b[i] = s;
        }
        (mu, b)
    };
    // b_k -= r·b_j, applied to the Gram as a congruence and to U's columns
    let reduce = |g: &mut IntMatrix, u: &mut IntMatrix, k: usize, j: usize, r: i64| {
        for c in 0..n {
            g[k][c] -= r * g[j][c];
        }
        for row in g.iter_mut() {
            row[k] -= r * row[j];
        }
        for row in u.iter_mut() {
            row[k] -= r * row[j];
        }
    };
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        assert!(guard < 1_000_000, "LLL failed to converge");
        let (mut mu, _) = gs(&g);
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r != 0.0 {
                reduce(&mut g, &mut u, k, j, r as i64);
                for i in 0..j {
                    mu[k][i] -= r * mu[j][i];
                }
                mu[k][j] -= r;
            }
        }
        let (mu, b) = gs(&g);
        if b[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            k += 1;
        } else {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            for row in u.iter_mut() {
                row.swap(k, k - 1);
            }
            k = k.saturating_sub(1).max(1);
        }
    }
    (g, u)
}

/// Symmetric positive semidefinite `T` with `T_ii = Q(x_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GramTarget {
    matrix: RationalMatrix,
}

impl GramTarget {
    pub fn new(matrix: RationalMatrix) -> Result<Self> {
        if !matrix.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if matrix.rows() == 0 {
            return Err(Error::DimensionMismatch("Gram target of size 0".into()));
        }
        if !matrix.is_positive_semidefinite() {
            return Err(Error::NotPositiveSemidefinite);
        }
        Ok(GramTarget { matrix })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(RationalMatrix::from_i64_rows(rows)?)
    }

    /// The 1×1 target `(q)`.
    pub fn scalar(q: Rational) -> Result<Self> {
        Self::new(RationalMatrix::from_rows(vec![vec![q]])?)
    }

    pub fn zero(n: usize) -> Self {
        GramTarget { matrix: RationalMatrix::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `T ⊕ T'`.
    pub fn direct_sum(&self, other: &GramTarget) -> GramTarget {
        GramTarget { matrix: self.matrix.block_diag(&other.matrix) }
    }

    /// `[[T₁, B], [Bᵀ, T₂]]`, or `None` when not positive semidefinite.
    pub fn block(t1: &GramTarget, b: &RationalMatrix, t2: &GramTarget) -> Option<GramTarget> {
        let (n1, n2) = (t1.n(), t2.n());
        assert_eq!((b.rows(), b.cols()), (n1, n2), "off-diagonal block shape");
        let mut m = t1.matrix.block_diag(&t2.matrix);
        for i in 0..n1 {
            for j in 0..n2 {
                m.set(i, n1 + j, b.get(i, j).clone());
                m.set(n1 + j, i, b.get(i, j).clone());
            }
        }
        GramTarget::new(m).ok()
    }

    /// All positive semidefinite block completions `[[T₁, B], [Bᵀ, T₂]]`
    /// whose entries lie in the value set of `½(x, y)` on `L`, i.e. the
    /// grid `(1/2D)·ℤ`, bounded entrywise by Cauchy–Schwarz.
    pub fn block_completions(lattice: &Lattice, t1: &GramTarget, t2: &GramTarget) -> Vec<GramTarget> {
        let (n1, n2) = (t1.n(), t2.n());
        let step = 2 * lattice.denominator();
        // |B_ij| ≤ sqrt(T1_ii · T2_jj); grid entries k/step
        let mut ranges = Vec::with_capacity(n1 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                let prod = t1.matrix.get(i, i) * t2.matrix.get(j, j) * rat(step * step);
                ranges.push(isqrt_floor(&prod));
            }
        }
        let mut out = Vec::new();
        let mut ks = vec![0i64; n1 * n2];
        fn rec(
            pos: usize,
            ks: &mut Vec<i64>,
            ranges: &[i64],
            f: &mut impl FnMut(&[i64]),
        ) {
            if pos == ks.len() {
                f(ks);
                return;
            }
            for k in -ranges[pos]..=ranges[pos] {
                ks[pos] = k;
                rec(pos + 1, ks, ranges, f);
            }
        }
        rec(0, &mut ks, &ranges, &mut |ks: &[i64]| {
            let mut b = RationalMatrix::zeros(n1, n2);
            for i in 0..n1 {
                for j in 0..n2 {
                    b.set(i, j, Rational::new(BigInt::from(ks[i * n2 + j]), BigInt::from(step)));
                }
            }
            if let Some(t) = GramTarget::block(t1, &b, t2) {
                out.push(t);
            }
        });
        out
    }
}

/// `⌊√r⌋` for a nonnegative rational.
pub fn isqrt_floor(r: &Rational) -> i64 {
    let fl = r.floor().to_integer();
    let mut s = fl.sqrt();
    // s² ≤ ⌊r⌋ ≤ r; ensure (s+1)² > r
    while Rational::from_integer((&s + 1u32) * (&s + 1u32)) <= *r {
        s += 1u32;
    }
    s.to_i64().expect("small")
}

/// An ordered tuple of lattice vectors in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorTuple(pub Vec<Vec<i64>>);

impl VectorTuple {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[Vec<i64>] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::linalg::ratio;

    #[test]
    fn unit_vectors_of_cubic_lattice() {
        let i3 = data::identity(3);
        assert_eq!(i3.enumerate_norm_vectors(&ratio(1, 2)).len(), 6);
        assert_eq!(i3.enumerate_norm_vectors(&rat(0)), vec![vec![0, 0, 0]]);
        assert!(i3.enumerate_norm_vectors(&ratio(1, 3)).is_empty());
    }

    #[test]
    fn e8_roots() {
        let e8 = data::e8();
        let roots = e8.enumerate_norm_vectors(&rat(1));
        assert_eq!(roots.len(), 240);
        assert!(roots.iter().all(|r| e8.q_value(r) == rat(1)));
        assert_eq!(e8.enumerate_norm_vectors(&rat(0)), vec![vec![0; 8]]);
    }

    #[test]
    fn zero_target_gives_zero_tuple() {
        let e8 = data::e8();
        for n in 1..4 {
            let t = GramTarget::zero(n);
            assert_eq!(e8.rep_number(&t), 1);
            assert_eq!(e8.enumerate_gram_tuples(&t), vec![VectorTuple(vec![vec![0; 8]; n])]);
        }
    }

    #[test]
    fn orthogonal_unit_pairs_in_i3() {
        let i3 = data::identity(3);
        let t = GramTarget::new(
            RationalMatrix::from_rows(vec![vec![ratio(1, 2), rat(0)], vec![rat(0), ratio(1, 2)]]).unwrap(),
        )
        .unwrap();
        let tuples = i3.enumerate_gram_tuples(&t);
        assert_eq!(tuples.len(), 24);
        assert_eq!(i3.rep_number(&t), 24);
        for tup in &tuples {
            assert_eq!(i3.gram_of(tup), t);
        }
    }

    #[test]
    fn non_psd_target_rejected() {
        assert!(matches!(
            GramTarget::from_i64_rows(&[vec![1, 2], vec![2, 1]]),
            Err(Error::NotPositiveSemidefinite)
        ));
    }

    #[test]
    fn lll_preserves_the_form() {
        let g = data::d16_plus_gram();
        let (red, u) = lll_gram(&g);
        assert_eq!(int::congruence(&g, &u), red);
        assert_eq!(int::determinant(&u).abs(), 1);
        assert!((0..16).all(|i| red[i][i] <= 4));
    }

    #[test]
    fn block_completions_for_e8_roots() {
        let e8 = data::e8();
        let one = GramTarget::scalar(rat(1)).unwrap();
        let blocks = GramTarget::block_completions(&e8, &one, &one);
        // b ∈ {-1, -1/2, 0, 1/2, 1}
        assert_eq!(blocks.len(), 5);
    }

    #[test]
    fn isqrt() {
        assert_eq!(isqrt_floor(&rat(16)), 4);
        assert_eq!(isqrt_floor(&rat(15)), 3);
        assert_eq!(isqrt_floor(&ratio(9, 4)), 1);
        assert_eq!(isqrt_floor(&rat(0)), 0);
    }
}
