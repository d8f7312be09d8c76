//! Self-checking suites with exact witnesses for every failed check.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::cycle_ring::{orbit_product_by_double_cosets, orbit_sum, CycleRingElement, SubspaceSymbol, TruncatedPoly};
use crate::data;
use crate::error::{Error, Result};
use crate::genus::{enumerate_genus, local_invariants, GenusData};
use crate::isometry::{group_closure, is_isometric, IsometryMap, SearchLimits};
use crate::json::rational_to_json;
use crate::lattice::GramTarget;
use crate::linalg::{rat, ratio, Rational};
use crate::special_cycles::{
    cutoff_of, deg_tot, eisenstein_coefficient, inner_product, reduced_special_cycle, sc_pairing_matrix,
    sc_radical_rank, special_cycle, ReducedClass,
};
use crate::weights::WeightFunction;

pub const SUITES: &[&str] = &["product-formula", "truncation-hom", "siegel-e8", "genus16", "radical", "orbit-sum"];

/// Number of random samples in the truncation suite.
pub const TRUNCATION_SAMPLES: usize = 1000;
const SEED: u64 = 0x5eed_c1c1e;

/// Mass `Σ 1/|SO(L_j)|` of the even unimodular genus in rank 16.
pub fn rank16_mass() -> Rational {
    Rational::new(691.into(), "138833590757621760000".parse().expect("literal"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str) -> Self {
        Report { suite: suite.to_string(), checks: Vec::new() }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Records `left == right` with both sides as the detail.
    pub fn check_eq<T: PartialEq + std::fmt::Display>(&mut self, name: impl Into<String>, left: &T, right: &T) {
        self.check(name, left == right, format!("{left} vs {right}"));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name, "passed": c.passed, "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn run_suite(name: &str) -> Result<Report> {
    match name {
        "product-formula" => product_formula(&e8_genus()?),
        "truncation-hom" => Ok(truncation_hom(TRUNCATION_SAMPLES, SEED)),
        "siegel-e8" => {
            let g = e8_genus()?;
            let mut r = eisenstein_consistency(&g)?;
            r.extend(normalizations(&g)?);
            r.suite = name.into();
            Ok(r)
        }
        "genus16" => {
            let g = Arc::new(enumerate_genus(&data::e8e8(), 3)?);
            let mut r = rank16_genus(&g)?;
            r.extend(theta_agreement(&g)?);
            r.extend(eisenstein_consistency(&g)?);
            r.extend(normalizations(&g)?);
            let other = enumerate_genus(&data::d16_plus(), 3)?;
            r.check_eq("seed-independent mass", &other.mass, &g.mass);
            r.suite = name.into();
            Ok(r)
        }
        "radical" => radical(&e8_genus()?),
        "orbit-sum" => orbit_sum_lemma(),
        _ => Err(Error::UnknownSuite(name.to_string())),
    }
}

pub fn e8_genus() -> Result<Arc<GenusData>> {
    Ok(Arc::new(GenusData::single_class(&data::e8(), SearchLimits::from_env())?))
}

fn one_target() -> GramTarget {
    GramTarget::scalar(rat(1)).expect("positive")
}

/// Residue mod 2 of a root of the base lattice, for coset weights.
fn root_residue(genus: &GenusData) -> Vec<i64> {
    let base = &genus.base;
    let q = Rational::one();
    let v = base.enumerate_norm_vectors(&q).into_iter().next().unwrap_or_else(|| vec![0; base.rank()]);
    v.iter().map(|x| x.rem_euclid(2)).collect()
}

/// Product formula on the first class: `rep(T₁,φ₁)·rep(T₂,φ₂) = Σ_B rep([[T₁,B],[Bᵀ,T₂]], φ₁⊗φ₂)`,
/// for trivial and coset weights, plus the termwise identity of sharp classes.
pub fn product_formula(genus: &Arc<GenusData>) -> Result<Report> {
    let mut r = Report::new("product-formula");
    let t = one_target();
    let base = &genus.base;
    let res = root_residue(genus);
    let coset = WeightFunction::coset_indicator(base, 2, vec![res.clone()])?;
    let zero_coset = WeightFunction::coset_indicator(base, 2, vec![vec![0; base.rank()]])?;
    let weights = [
        ("trivial", WeightFunction::trivial(1), WeightFunction::trivial(1)),
        ("coset", coset.clone(), WeightFunction::trivial(1)),
        ("coset-coset", coset.clone(), coset),
        ("coset-zero", WeightFunction::trivial(1), zero_coset),
    ];
    let completions = GramTarget::block_completions(base, &t, &t);
    for (label, p1, p2) in &weights {
        let p12 = p1.tensor(p2)?;
        for (j, class) in genus.classes.iter().enumerate() {
            let l = &class.lattice;
            if p12.base().is_some_and(|b| b.gram() != l.gram()) {
                continue;
            }
            let lhs = crate::weights::rep_number_weighted(l, &t, p1)? * crate::weights::rep_number_weighted(l, &t, p2)?;
            let mut rhs = Rational::zero();
            for b in &completions {
                rhs += crate::weights::rep_number_weighted(l, b, &p12)?;
            }
            r.check_eq(format!("rep product {label} class {j}"), &lhs, &rhs);
        }
    }
    for (label, p1, p2) in [&weights[0], &weights[2]] {
        let sharp = special_cycle(genus, &t, p1)?.sharp_product(&special_cycle(genus, &t, p2)?)?;
        let p12 = p1.tensor(p2)?;
        let mut sum: Option<crate::special_cycles::GenusClassFunction> = None;
        for b in &completions {
            let z = special_cycle(genus, b, &p12)?;
            sum = Some(match sum {
                None => z,
                Some(s) => s.add(&z)?,
            });
        }
        let sum = sum.expect("B = 0 is always a completion");
        for (j, (a, b)) in sharp.values().iter().zip(sum.values()).enumerate() {
            r.check(format!("sharp product termwise {label} class {j}"), a == b, ring_detail(a, b));
        }
    }
    let plain = special_cycle(genus, &t, &WeightFunction::trivial(1))?;
    let flat = plain.flat()?;
    r.check_eq("flat of z((1)) on the first class", &flat.rep()[0], &rat(base.count_norm_vectors(&rat(1)) as i64));
    r.check("sharp class is invariant", plain.is_invariant(), "checked on O-generators");
    Ok(r)
}

fn random_symbol(rng: &mut StdRng, grade: usize, ambient: usize) -> SubspaceSymbol {
    let k = rng.gen_range(0..=grade.min(ambient).min(3));
    let rows: Vec<Vec<i64>> = (0..k).map(|_| (0..ambient).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    SubspaceSymbol::new(grade, &rows, ambient).expect("dimension at most the grade")
}

fn random_coeff(rng: &mut StdRng) -> Rational {
    ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn random_element(rng: &mut StdRng, cutoff: usize, ambient: usize) -> CycleRingElement {
    let mut z = CycleRingElement::zero(cutoff);
    for _ in 0..rng.gen_range(0..=4) {
        let grade = rng.gen_range(0..=cutoff);
        let s = random_symbol(rng, grade, ambient);
        z.add_term(s, random_coeff(rng)).expect("grade within cutoff");
    }
    z
}

/// An element with the same truncated image as `z` built from fresh symbols.
fn relift(rng: &mut StdRng, p: &TruncatedPoly, ambient: usize) -> CycleRingElement {
    let mut z = CycleRingElement::zero(p.cutoff());
    for (n, a) in p.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let extra = random_coeff(rng);
        let s1 = random_symbol(rng, n, ambient);
        let s2 = random_symbol(rng, n, ambient);
        z.add_term(s1, a + &extra).expect("grade within cutoff");
        z.add_term(s2, -extra).expect("grade within cutoff");
    }
    z
}

/// Random elements with cutoff ≤ 8 in ambient rank ≤ 6: reduction is a ring
/// homomorphism, pairings see only the reduction, and `[U]_n ↦ cⁿ`.
pub fn truncation_hom(samples: usize, seed: u64) -> Report {
    let mut r = Report::new("truncation-hom");
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut hom_fail, mut pair_fail, mut mono_fail) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..samples {
        let cutoff = rng.gen_range(1..=8);
        let ambient = rng.gen_range(1..=6);
        let z1 = random_element(&mut rng, cutoff, ambient);
        let z2 = random_element(&mut rng, cutoff, ambient);
        let w = random_element(&mut rng, cutoff, ambient);
        let (p1, p2) = (z1.reduce_to_truncated(), z2.reduce_to_truncated());
        let lhs = z1.mul(&z2).expect("same cutoff").reduce_to_truncated();
        let rhs = p1.mul(&p2).expect("same cutoff");
        if lhs != rhs && hom_fail.len() < 3 {
            hom_fail.push(format!("sample {i}: ({z1})·({z2}) reduces to {lhs}, product of reductions {rhs}"));
        }
        let other = relift(&mut rng, &p1, ambient);
        let (a, b) = (z1.pair(&w).expect("same cutoff"), other.pair(&w).expect("same cutoff"));
        if (a != b || other.reduce_to_truncated() != p1) && pair_fail.len() < 3 {
            pair_fail.push(format!("sample {i}: ⟨{z1}, {w}⟩ = {a} but ⟨{other}, {w}⟩ = {b}"));
        }
        let n = rng.gen_range(0..=cutoff);
        let s = random_symbol(&mut rng, n, ambient);
        let img = CycleRingElement::from_symbol(cutoff, s.clone()).expect("grade within cutoff").reduce_to_truncated();
        if img != TruncatedPoly::monomial(cutoff, n, Rational::one()) && mono_fail.len() < 3 {
            mono_fail.push(format!("sample {i}: [{:?}]_{n} ↦ {img}", s.basis()));
        }
    }
    let summary = |f: &[String]| if f.is_empty() { format!("{samples} samples") } else { f.join("; ") };
    r.check("reduce(z1·z2) = reduce(z1)·reduce(z2)", hom_fail.is_empty(), summary(&hom_fail));
    r.check("pair(z, w) depends on reduce(z) only", pair_fail.is_empty(), summary(&pair_fail));
    r.check("[U]_n reduces to c^n", mono_fail.is_empty(), summary(&mono_fail));
    r
}

/// `⟨z(T₁)♭, z(T₂ ⊕ 0)♭⟩ = 2·Σ_B A([[T₁,B],[Bᵀ,T₂]])` for `T₁ = T₂ = (1)`;
/// the zero padding lifts `z(T₂)` to the complementary grade without
/// changing its representation numbers.
pub fn eisenstein_consistency(genus: &Arc<GenusData>) -> Result<Report> {
    let mut r = Report::new("eisenstein");
    let m = cutoff_of(genus)?;
    let t = one_target();
    let triv = WeightFunction::trivial(1);
    let a1 = eisenstein_coefficient(genus, &t, &triv)?.value;
    r.check_eq("A((1)) equals the number of roots", &a1, &rat(genus.base.count_norm_vectors(&rat(1)) as i64));
    let zero = eisenstein_coefficient(genus, &GramTarget::zero(2), &WeightFunction::trivial(2))?.value;
    r.check_eq("A(0) = 1", &zero, &Rational::one());
    let z1 = reduced_special_cycle(genus, &t, &triv)?;
    let padded = t.direct_sum(&GramTarget::zero(m - 2));
    let z2 = reduced_special_cycle(genus, &padded, &WeightFunction::trivial(m - 1))?;
    let shown = |z: &ReducedClass| z.rep().iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    r.check_eq("padding keeps representation numbers", &shown(&z2), &shown(&z1));
    let lhs = inner_product(&z1, &z2)?;
    let mut sum = Rational::zero();
    for b in GramTarget::block_completions(&genus.base, &t, &t) {
        sum += eisenstein_coefficient(genus, &b, &WeightFunction::trivial(2))?.value;
    }
    r.check_eq("inner product = 2·Σ_B A(block)", &lhs, &(rat(2) * sum));
    r.check_eq("non-complementary grades pair to 0", &inner_product(&z1, &z1)?, &Rational::zero());
    Ok(r)
}

/// `deg_tot(c^m) = 2` and `z(0, φ)♭ = φ(0)·cⁿ` for coset weights on the base.
pub fn normalizations(genus: &Arc<GenusData>) -> Result<Report> {
    let mut r = Report::new("normalizations");
    let m = cutoff_of(genus)?;
    let top = ReducedClass::constant(genus.clone(), m, Rational::one())?;
    r.check_eq("deg_tot(c^m) = 2", &deg_tot(&top), &rat(2));
    if genus.class_count() != 1 {
        return Ok(r);
    }
    let base = &genus.base;
    let rank = base.rank();
    let res = root_residue(genus);
    let origin = vec![0; rank];
    for n in 1..=2usize.min(m) {
        let mut cosets = vec![
            WeightFunction::coset_indicator(base, 2, vec![origin.clone(); n])?,
            WeightFunction::coset_indicator(base, 2, vec![res.clone(); n])?,
        ];
        let mix = WeightFunction::linear_combination(&ratio(1, 2), &cosets[0], &rat(3), &cosets[1])?;
        cosets.push(mix);
        for (k, phi) in cosets.iter().enumerate() {
            let at0 = phi.at_zero(rank);
            let z = special_cycle(genus, &GramTarget::zero(n), phi)?;
            let expected = CycleRingElement::c(m, rank)?;
            let mut power = CycleRingElement::one(m, rank);
            for _ in 0..n {
                power = power.mul(&expected)?;
            }
            let want = power.scale(&at0);
            r.check(format!("z(0_{n}, φ{k}) = φ(0)·c^{n}"), z.values()[0] == want, ring_detail(&z.values()[0], &want));
            r.check_eq(format!("flat z(0_{n}, φ{k}) = φ(0)"), &z.flat()?.rep()[0], &at0);
        }
    }
    Ok(r)
}

/// Two classes, pairwise non-isometric, with equal determinants, equal local
/// invariants at every `p ≤ 50` and the expected mass.
pub fn rank16_genus(genus: &GenusData) -> Result<Report> {
    let mut r = Report::new("genus16");
    r.check_eq("class count", &genus.class_count(), &2);
    if genus.class_count() != 2 {
        return Ok(r);
    }
    let (a, b) = (&genus.classes[0].lattice, &genus.classes[1].lattice);
    r.check("classes are not isometric", is_isometric(a, b)?.is_none(), "exhaustive search");
    r.check_eq("equal determinants", &a.determinant(), &b.determinant());
    let primes = (2..=50u64).filter(|p| (2..*p).all(|d| p % d != 0));
    let mismatched: Vec<u64> = primes.filter(|&p| local_invariants(a, p) != local_invariants(b, p)).collect();
    r.check("equal local invariants at p ≤ 50", mismatched.is_empty(), format!("mismatched primes {mismatched:?}"));
    let sum: Rational = genus.classes.iter().map(|c| Rational::new(1.into(), c.aut.order_so.into())).sum();
    r.check_eq("mass = Σ 1/|SO|", &genus.mass, &sum);
    r.check_eq("mass", &genus.mass, &rank16_mass());
    Ok(r)
}

/// Per-class representation numbers of `(1)` and `(2)` agree across classes.
pub fn theta_agreement(genus: &Arc<GenusData>) -> Result<Report> {
    let mut r = Report::new("theta");
    for q in [1, 2] {
        let z = reduced_special_cycle(genus, &GramTarget::scalar(rat(q))?, &WeightFunction::trivial(1))?;
        let reps = z.rep();
        let same = reps.windows(2).all(|w| w[0] == w[1]);
        let shown: Vec<String> = reps.iter().map(ToString::to_string).collect();
        r.check(format!("rep(({q})) equal across classes"), same, shown.join(", "));
        if q == 1 {
            r.check_eq("rep((1)) = 480", &reps[0], &rat(480));
        }
    }
    Ok(r)
}

/// Pairing ranks: a one-class genus gives rank ≤ 1 between complementary
/// families, and the padded family pairs positively with itself.
pub fn radical(genus: &Arc<GenusData>) -> Result<Report> {
    let mut r = Report::new("radical");
    let m = cutoff_of(genus)?;
    let base = &genus.base;
    let triv = |k| WeightFunction::trivial(k);
    let left: Vec<(GramTarget, WeightFunction)> = (1..=3).map(|q| (GramTarget::scalar(rat(q)).expect("scalar"), triv(1))).collect();
    let mut right: Vec<(GramTarget, WeightFunction)> =
        left.iter().map(|(t, _)| (t.direct_sum(&GramTarget::zero(m - 2)), triv(m - 1))).collect();
    right.push((GramTarget::zero(m - 1), triv(m - 1)));
    let pm = sc_pairing_matrix(genus, &left, &right)?;
    let (rank, kernel) = sc_radical_rank(&pm);
    let expect = if genus.class_count() == 1 { 1 } else { rank };
    r.check_eq("rank of the complementary block", &rank, &expect);
    r.check_eq("kernel dimension", &kernel.len(), &(left.len() - rank));
    let mut dup = left.clone();
    dup.push(left[0].clone());
    let (rank_dup, _) = sc_radical_rank(&sc_pairing_matrix(genus, &dup, &right)?);
    r.check_eq("duplicated generator keeps the rank", &rank_dup, &rank);
    let (rank_empty, _) = sc_radical_rank(&sc_pairing_matrix(genus, &[], &right)?);
    r.check_eq("empty family has rank 0", &rank_empty, &0);
    // padded self-pairing: ⟨z(T,φ), z(T ⊕ 0, φ ⊗ 1)⟩ = 2·avg(rep²)
    let res = root_residue(genus);
    let coset = WeightFunction::coset_indicator(base, 2, vec![res])?;
    for n in 1..=(m / 2).min(2) {
        for (label, phi) in [("trivial", triv(1)), ("coset", coset.clone())] {
            let t = if n == 1 { one_target() } else { GramTarget::from_i64_rows(&[vec![1, 0], vec![0, 1]])? };
            let mut phi_n = phi.clone();
            for _ in 1..n {
                phi_n = phi_n.tensor(&phi)?;
            }
            let z = reduced_special_cycle(genus, &t, &phi_n)?;
            let pad = reduced_special_cycle(genus, &t.direct_sum(&GramTarget::zero(m - 2 * n)), &phi_n.tensor(&triv(m - 2 * n))?)?;
            let ip = inner_product(&z, &pad)?;
            let nonzero = z.rep().iter().any(|x| !x.is_zero());
            r.check(format!("padded self-pairing positive, n = {n}, {label}"), !nonzero || ip > Rational::zero(), ip.to_string());
        }
    }
    Ok(r)
}

/// The orbit-sum product on `ℤ³` under coordinate permutations, against a
/// brute-force sum over double cosets `Γ_{U₁}\Γ/Γ_{U₂}` in which each
/// `W = U₁ + γU₂` is counted `[Γ_W : Γ_{U₁} ∩ Γ_{γU₂}]` times.
pub fn orbit_sum_lemma() -> Result<Report> {
    let mut r = Report::new("orbit-sum");
    let gens = vec![
        IsometryMap::new(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]),
        IsometryMap::new(vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]),
    ];
    let group = group_closure(&gens, 3, 100)?;
    r.check_eq("group order", &group.len(), &6);
    let m = 3;
    let sym = |g: usize, rows: &[&[i64]]| SubspaceSymbol::new(g, &rows.iter().map(|x| x.to_vec()).collect::<Vec<_>>(), 3);
    let cases = [
        (sym(1, &[&[1, 0, 0]])?, sym(1, &[&[0, 1, 0]])?),
        (sym(1, &[&[1, 0, 0]])?, sym(1, &[&[1, 0, 0]])?),
        (sym(1, &[&[1, 1, 0]])?, sym(2, &[&[0, 0, 1]])?),
        (sym(1, &[&[1, 2, 0]])?, sym(1, &[&[1, -1, 1]])?),
        (sym(2, &[&[1, 0, 0]])?, sym(2, &[&[0, 1, 0]])?),
    ];
    for (i, (u1, u2)) in cases.iter().enumerate() {
        let lhs = orbit_sum(m, u1, &gens, 100)?.mul(&orbit_sum(m, u2, &gens, 100)?)?;
        let rhs = double_coset_sum(m, u1, u2, &group)?;
        r.check(format!("case {i}: product = double-coset sum"), lhs == rhs, ring_detail(&lhs, &rhs));
        let pairs = orbit_product_by_double_cosets(m, u1, u2, &group)?;
        r.check(format!("case {i}: pair-orbit formula"), lhs == pairs, ring_detail(&lhs, &pairs));
    }
    Ok(r)
}

fn ring_detail(a: &CycleRingElement, b: &CycleRingElement) -> String {
    match a.sub(b) {
        Ok(d) if d.is_zero() => format!("{} terms", a.len()),
        Ok(d) => format!("difference {d}"),
        Err(e) => e.to_string(),
    }
}

fn double_coset_sum(m: usize, u1: &SubspaceSymbol, u2: &SubspaceSymbol, group: &[IsometryMap]) -> Result<CycleRingElement> {
    let mut out = CycleRingElement::zero(m);
    if u1.grade() + u2.grade() > m {
        return Ok(out);
    }
    let stab = |s: &SubspaceSymbol| -> Vec<&IsometryMap> { group.iter().filter(|g| s.image(g) == *s).collect() };
    let stab1 = stab(u1);
    let mut orbit2: Vec<SubspaceSymbol> = group.iter().map(|g| u2.image(g)).collect();
    orbit2.sort();
    orbit2.dedup();
    let mut done: Vec<SubspaceSymbol> = Vec::new();
    for b in &orbit2 {
        if done.contains(b) {
            continue;
        }
        // one double coset: the Γ_{U₁}-orbit of b
        for g in &stab1 {
            let c = b.image(g);
            if !done.contains(&c) {
                done.push(c);
            }
        }
        let joined = CycleRingElement::from_symbol(m, u1.clone())?.mul(&CycleRingElement::from_symbol(m, b.clone())?)?;
        let (w, _) = joined.terms().next().expect("grades fit under the cutoff");
        let w = w.clone();
        let both = group.iter().filter(|g| u1.image(g) == *u1 && b.image(g) == *b).count();
        let mult = stab(&w).len() / both;
        let z = orbit_sum(m, &w, group, group.len())?;
        out = out.add(&z.scale(&rat(mult as i64)))?;
    }
    Ok(out)
}

/// The mass as a `"p/q"` string, for reports.
pub fn mass_json(genus: &GenusData) -> Value {
    rational_to_json(&genus.mass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(run_suite("unknown"), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn truncation_suite_passes() {
        let r = truncation_hom(200, 1);
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn orbit_suite_passes() {
        let r = orbit_sum_lemma().unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn e8_suites_pass() {
        let g = e8_genus().unwrap();
        for r in [product_formula(&g).unwrap(), eisenstein_consistency(&g).unwrap(), normalizations(&g).unwrap(), radical(&g).unwrap()] {
            assert!(r.passed(), "{}: {:?}", r.suite, r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
    }
}
