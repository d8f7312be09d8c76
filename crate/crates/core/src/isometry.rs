//! Lattice isometry testing and automorphism group orders.
//!
//! Both problems reduce to one backtracking search: choose a ℤ-basis
//! `b₀,…,b_{n-1}` of short vectors of the source lattice and look for images
//! among the vectors of matching norm in the target such that all pairings
//! agree. A map that preserves the Gram matrix of a ℤ-basis and sends it into
//! the target is an isometry onto it, so no further check is needed at the
//! leaves. Domains of unassigned levels are filtered after every assignment
//! (forward checking) and the next level is the one with the fewest
//! remaining candidates.
//!
//! Group orders come from the stabilizer chain `G = G₀ ⊇ G₁ ⊇ … ⊇ Gₙ = 1`
//! with `Gᵢ` fixing `b₀,…,b_{i-1}`: `|Gᵢ| = |Gᵢ·bᵢ|·|G_{i+1}|`. Orbits are
//! grown from generators found so far; a candidate outside the current orbit
//! triggers one search, which either yields a new generator or rules out
//! the candidate together with its whole orbit.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::int::{self, IncrementalHnf, IntMatrix};
use crate::linalg::{rat, Rational};

pub const NODE_BUDGET_ENV: &str = "CYCLERING_NODE_BUDGET";
const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub node_budget: u64,
}

impl SearchLimits {
    /// Reads `CYCLERING_NODE_BUDGET`, falling back to the default budget.
    pub fn from_env() -> Self {
        let node_budget = std::env::var(NODE_BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_NODE_BUDGET);
        SearchLimits { node_budget }
    }
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { node_budget: DEFAULT_NODE_BUDGET }
    }
}

/// Integer matrix `U` acting on coordinate columns. As a witness of
/// `is_isometric(L₁, L₂)` it satisfies `Uᵀ·G₁·U = G₂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsometryMap {
    matrix: IntMatrix,
}

impl IsometryMap {
    pub fn new(matrix: IntMatrix) -> Self {
        IsometryMap { matrix }
    }

    pub fn identity(n: usize) -> Self {
        IsometryMap { matrix: int::identity(n) }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn det(&self) -> i128 {
        int::determinant(&self.matrix)
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        int::mat_vec(&self.matrix, v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &IsometryMap) -> IsometryMap {
        IsometryMap { matrix: int::mat_mul(&self.matrix, &other.matrix) }
    }

    /// Exact check of `Uᵀ·G₁·U = G₂`.
    pub fn is_isometry(&self, from_target: &Lattice, source: &Lattice) -> bool {
        from_target.gram().congruence(&self.matrix).map(|g| &g == source.gram()).unwrap_or(false)
    }

    pub fn is_automorphism_of(&self, l: &Lattice) -> bool {
        self.is_isometry(l, l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutGroupInfo {
    pub order_o: u128,
    pub order_so: u128,
    pub generators: Vec<IsometryMap>,
}

/// Invariants compared before any isometry search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeInvariants {
    pub rank: usize,
    pub determinant: Rational,
    /// Vector counts by `(x, x)`, for norms up to the bound.
    pub norm_counts: Vec<(Rational, u64)>,
    /// For each norm level: rank and (if full) index of the sublattice
    /// spanned by the vectors of at most that norm.
    pub span_indices: Vec<(Rational, usize, Option<u128>)>,
}

/// Computes invariants from the vectors with `(x, x) ≤ bound`.
pub fn lattice_invariants(l: &Lattice, bound: &Rational) -> LatticeInvariants {
    let d = l.denominator();
    let int_bound = (bound * rat(d)).floor().to_integer().to_i64().unwrap_or(i64::MAX);
    let vecs = l.short_vectors(int_bound);
    let as_norm = |x: i64| Rational::new(BigInt::from(x), BigInt::from(d));
    let mut norm_counts: Vec<(Rational, u64)> = Vec::new();
    let mut span_indices = Vec::new();
    let mut hnf = IncrementalHnf::new(l.rank());
    let mut i = 0;
    while i < vecs.len() {
        let nrm = vecs[i].1;
        let mut j = i;
        while j < vecs.len() && vecs[j].1 == nrm {
            if hnf.index() != Some(1) {
                hnf.insert(&vecs[j].0);
            }
            j += 1;
        }
        norm_counts.push((as_norm(nrm), (j - i) as u64));
        span_indices.push((as_norm(nrm), hnf.rank(), hnf.index()));
        i = j;
    }
    LatticeInvariants { rank: l.rank(), determinant: l.determinant(), norm_counts, span_indices }
}

/// A ℤ-basis made of short vectors, each prefix spanning a primitive
/// sublattice. Vectors are taken greedily by increasing norm.
pub fn short_basis(l: &Lattice) -> IntMatrix {
    let n = l.rank();
    let (red, u) = l.lll();
    let max_diag = (0..n).map(|i| red.int_gram()[i][i]).max().unwrap_or(0);
    let vecs = l.short_vectors(max_diag);
    let mut chosen: IntMatrix = Vec::new();
    let mut sat: IntMatrix = Vec::new();
    for (v, _) in &vecs {
        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            continue;
        }
        if in_lattice(&sat, v) {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(v.clone());
        let s = int::saturate(&trial, n);
        if s == int::hnf(&trial, n) {
            chosen = trial;
            sat = s;
            if chosen.len() == n {
                return chosen;
            }
        }
    }
    // the reduced basis is always a valid fallback
    let mut cols = int::transpose(&u);
    cols.sort_by_key(|c| l.int_norm(c));
    cols
}

fn in_lattice(hnf_rows: &[Vec<i64>], v: &[i64]) -> bool {
    let mut w: Vec<i64> = v.to_vec();
    for row in hnf_rows {
        let c = row.iter().position(|&x| x != 0).expect("nonzero HNF row");
        if w[c] % row[c] != 0 {
            return false;
        }
        let q = w[c] / row[c];
        if q != 0 {
            for k in 0..w.len() {
                w[k] -= q * row[k];
            }
        }
    }
    w.iter().all(|&x| x == 0)
}

/// Vectors of the target lattice that can serve as images.
struct Candidates {
    vecs: Vec<Vec<i64>>,
    duals: Vec<Vec<i64>>,
    norms: Vec<i64>,
    index: HashMap<Vec<i64>, u32>,
}

impl Candidates {
    fn new(target_int_gram: &IntMatrix, vecs: Vec<Vec<i64>>) -> Self {
        let duals: Vec<Vec<i64>> = vecs.iter().map(|v| int::mat_vec(target_int_gram, v)).collect();
        let norms = vecs.iter().zip(&duals).map(|(v, d)| int::dot(v, d)).collect();
        let index = vecs.iter().enumerate().map(|(i, v)| (v.clone(), i as u32)).collect();
        Candidates { vecs, duals, norms, index }
    }
}

struct Searcher<'a> {
    cands: &'a Candidates,
    /// Gram of the source basis in the same integer units as the candidates.
    pattern: &'a IntMatrix,
    root_domains: Vec<Vec<u32>>,
    nodes: u64,
    budget: u64,
}

impl<'a> Searcher<'a> {
    fn new(cands: &'a Candidates, pattern: &'a IntMatrix, budget: u64) -> Self {
        let root_domains = (0..pattern.len())
            .map(|l| {
                (0..cands.vecs.len() as u32).filter(|&c| cands.norms[c as usize] == pattern[l][l]).collect()
            })
            .collect();
        Searcher { cands, pattern, root_domains, nodes: 0, budget }
    }

    fn pairs(&self, a: u32, b: u32) -> i64 {
        int::dot(&self.cands.vecs[a as usize], &self.cands.duals[b as usize])
    }

    /// Candidates for `level` consistent with the fixed images `prefix`.
    fn consistent(&self, level: usize, prefix: &[u32]) -> Vec<u32> {
        self.root_domains[level]
            .iter()
            .copied()
            .filter(|&c| prefix.iter().enumerate().all(|(j, &p)| self.pairs(c, p) == self.pattern[j][level]))
            .collect()
    }

    /// Completes `prefix` (images of `b₀…b_{k-1}`) to a full assignment.
    fn extend(&mut self, prefix: &[u32]) -> Result<Option<Vec<u32>>> {
        let n = self.pattern.len();
        for (i, &p) in prefix.iter().enumerate() {
            if self.cands.norms[p as usize] != self.pattern[i][i]
                || (0..i).any(|j| self.pairs(p, prefix[j]) != self.pattern[j][i])
            {
                return Ok(None);
            }
        }
        let mut assign: Vec<Option<u32>> = vec![None; n];
        for (i, &p) in prefix.iter().enumerate() {
            assign[i] = Some(p);
        }
        let mut domains: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (l, dom) in domains.iter_mut().enumerate().skip(prefix.len()) {
            *dom = self.consistent(l, prefix);
            if dom.is_empty() {
                return Ok(None);
            }
        }
        if self.dfs(&mut assign, &domains)? {
            Ok(Some(assign.into_iter().map(|a| a.expect("complete")).collect()))
        } else {
            Ok(None)
        }
    }

    fn dfs(&mut self, assign: &mut Vec<Option<u32>>, domains: &[Vec<u32>]) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::ResourceLimit(format!(
                "isometry backtracking exceeded {} nodes (set {NODE_BUDGET_ENV} to raise)",
                self.budget
            )));
        }
        let next = (0..assign.len())
            .filter(|&l| assign[l].is_none())
            .min_by_key(|&l| (domains[l].len(), l));
        let Some(level) = next else { return Ok(true) };
        for &c in &domains[level] {
            let mut child: Vec<Vec<u32>> = vec![Vec::new(); assign.len()];
            let mut dead = false;
            for m in 0..assign.len() {
                if assign[m].is_some() || m == level {
                    continue;
                }
                let target = self.pattern[level][m];
                let filtered: Vec<u32> =
                    domains[m].iter().copied().filter(|&s| s != c && self.pairs(s, c) == target).collect();
                if filtered.is_empty() {
                    dead = true;
                    break;
                }
                child[m] = filtered;
            }
            if dead {
                continue;
            }
            assign[level] = Some(c);
            if self.dfs(assign, &child)? {
                return Ok(true);
            }
            assign[level] = None;
        }
        Ok(false)
    }
}

/// Scales both lattices by the common denominator so that their Gram
/// matrices are integral in the same units.
fn common_units(a: &Lattice, b: &Lattice) -> (Lattice, Lattice) {
    let d = num_integer::lcm(a.denominator(), b.denominator());
    (
        a.scaled(&rat(d)).expect("positive scaling"),
        b.scaled(&rat(d)).expect("positive scaling"),
    )
}

fn columns_to_matrix(cols: &[Vec<i64>]) -> IntMatrix {
    int::transpose(cols)
}

/// Searches for `U` with `Uᵀ·G₁·U = G₂`. Quick invariants (rank,
/// determinant, norm counts, short-vector span indices) are compared first.
pub fn is_isometric(l1: &Lattice, l2: &Lattice) -> Result<Option<IsometryMap>> {
    is_isometric_with(l1, l2, SearchLimits::from_env())
}

pub fn is_isometric_with(l1: &Lattice, l2: &Lattice, limits: SearchLimits) -> Result<Option<IsometryMap>> {
    if l1.rank() != l2.rank() || l1.determinant() != l2.determinant() {
        return Ok(None);
    }
    if l1.gram() == l2.gram() {
        return Ok(Some(IsometryMap::identity(l1.rank())));
    }
    let (a, b) = common_units(l1, l2);
    let basis2 = short_basis(&b);
    let basis1 = short_basis(&a);
    let bound_b = basis2.iter().map(|v| b.int_norm(v)).max().unwrap_or(0);
    let bound_a = basis1.iter().map(|v| a.int_norm(v)).max().unwrap_or(0);
    let bound = bound_a.max(bound_b);
    if lattice_invariants(&a, &rat(bound)) != lattice_invariants(&b, &rat(bound)) {
        return Ok(None);
    }
    let pattern = int::congruence(b.int_gram(), &columns_to_matrix(&basis2));
    let norms: HashSet<i64> = (0..pattern.len()).map(|i| pattern[i][i]).collect();
    let max_norm = norms.iter().copied().max().unwrap_or(0);
    let vecs: Vec<Vec<i64>> = a
        .short_vectors(max_norm)
        .into_iter()
        .filter(|(_, nrm)| norms.contains(nrm))
        .map(|(v, _)| v)
        .collect();
    let cands = Candidates::new(a.int_gram(), vecs);
    let mut searcher = Searcher::new(&cands, &pattern, limits.node_budget);
    let Some(images) = searcher.extend(&[])? else { return Ok(None) };
    let v: Vec<Vec<i64>> = images.iter().map(|&i| cands.vecs[i as usize].clone()).collect();
    let p_inv = int::unimodular_inverse(&columns_to_matrix(&basis2)).expect("short basis is a ℤ-basis");
    let u = IsometryMap::new(int::mat_mul(&columns_to_matrix(&v), &p_inv));
    debug_assert!(u.is_isometry(l1, l2));
    Ok(Some(u))
}

/// Orders of `O(L)` and `SO(L)` with a generating set of `O(L)`.
pub fn automorphism_info(l: &Lattice) -> Result<AutGroupInfo> {
    automorphism_info_with(l, SearchLimits::from_env())
}

pub fn automorphism_info_with(l: &Lattice, limits: SearchLimits) -> Result<AutGroupInfo> {
    let n = l.rank();
    let basis = short_basis(l);
    let p = columns_to_matrix(&basis);
    let p_inv = int::unimodular_inverse(&p).expect("short basis is a ℤ-basis");
    let pattern = int::congruence(l.int_gram(), &p);
    let norms: HashSet<i64> = (0..n).map(|i| pattern[i][i]).collect();
    let max_norm = norms.iter().copied().max().unwrap_or(0);
    let vecs: Vec<Vec<i64>> = l
        .short_vectors(max_norm)
        .into_iter()
        .filter(|(_, nrm)| norms.contains(nrm))
        .map(|(v, _)| v)
        .collect();
    let cands = Candidates::new(l.int_gram(), vecs);
    let basis_idx: Vec<u32> = basis.iter().map(|b| cands.index[b]).collect();
    let mut searcher = Searcher::new(&cands, &pattern, limits.node_budget);
    let mut gens: Vec<IsometryMap> = Vec::new();
    let mut order: u128 = 1;
    for level in (0..n).rev() {
        let prefix = &basis_idx[..level];
        let level_cands = searcher.consistent(level, prefix);
        let mut orbit = orbit_of(&cands, &gens, basis_idx[level]);
        let mut excluded: HashSet<u32> = HashSet::new();
        for &s in &level_cands {
            if orbit.contains(&s) || excluded.contains(&s) {
                continue;
            }
            let mut trial = prefix.to_vec();
            trial.push(s);
            match searcher.extend(&trial)? {
                Some(images) => {
                    let v: Vec<Vec<i64>> = images.iter().map(|&i| cands.vecs[i as usize].clone()).collect();
                    let g = IsometryMap::new(int::mat_mul(&columns_to_matrix(&v), &p_inv));
                    debug_assert!(g.is_automorphism_of(l));
                    gens.push(g);
                    orbit = orbit_of(&cands, &gens, basis_idx[level]);
                }
                None => excluded.extend(orbit_of(&cands, &gens, s)),
            }
        }
        order = order
            .checked_mul(orbit.len() as u128)
            .ok_or_else(|| Error::ResourceLimit("group order overflows u128".into()))?;
    }
    let has_reflection = gens.iter().any(|g| g.det() < 0);
    let order_so = if has_reflection { order / 2 } else { order };
    Ok(AutGroupInfo { order_o: order, order_so, generators: gens })
}

fn orbit_of(cands: &Candidates, gens: &[IsometryMap], start: u32) -> HashSet<u32> {
    let mut seen = HashSet::from([start]);
    let mut frontier = vec![start];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.apply(&cands.vecs[x as usize]);
            let idx = *cands.index.get(&y).expect("automorphisms permute candidates");
            if seen.insert(idx) {
                frontier.push(idx);
            }
        }
    }
    seen
}

/// All elements of the group generated by `gens`, or `ResourceLimit` past `limit`.
pub fn group_closure(gens: &[IsometryMap], dim: usize, limit: usize) -> Result<Vec<IsometryMap>> {
    let id = IsometryMap::identity(dim);
    let mut seen: HashSet<IsometryMap> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.compose(&x);
            if !seen.contains(&y) {
                if seen.len() >= limit {
                    return Err(Error::ResourceLimit(format!("group closure exceeds {limit} elements")));
                }
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<IsometryMap> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}
