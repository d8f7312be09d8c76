//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};

use cyclering::data;
use cyclering::genus::{enumerate_genus, local_invariants, GenusData};
use cyclering::isometry::{automorphism_info, is_isometric, SearchLimits};
use cyclering::lattice::GramTarget;
use cyclering::linalg::{rat, ratio, Rational};
use cyclering::special_cycles::{
    cutoff_of, deg_tot, eisenstein_coefficient, inner_product, reduced_special_cycle, special_cycle, ReducedClass,
};
use cyclering::verify::{orbit_sum_lemma, rank16_mass, truncation_hom};
use cyclering::weights::WeightFunction;

const REP_TIME_LIMIT: Duration = Duration::from_secs(5);
const E8_AUT_TIME_LIMIT: Duration = Duration::from_secs(600);
const THETA16_TIME_LIMIT: Duration = Duration::from_secs(60);
const TRUNCATION_SAMPLES: usize = 1000;
const TRUNCATION_SEED: u64 = 20240611;
/// Order of O(E8), the Weyl group W(E8).
const E8_ORDER: u128 = 696_729_600;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e(x: impl std::fmt::Display) -> String {
    x.to_string()
}

struct Rank16 {
    genus: Arc<GenusData>,
    elapsed: Duration,
}

fn rank16() -> &'static Rank16 {
    static CELL: OnceLock<Rank16> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let genus = Arc::new(enumerate_genus(&data::e8e8(), 3).expect("rank-16 genus"));
        Rank16 { genus, elapsed: start.elapsed() }
    })
}

fn e8_genus() -> Arc<GenusData> {
    Arc::new(GenusData::single_class(&data::e8(), SearchLimits::default()).expect("E8 automorphisms"))
}

fn one() -> GramTarget {
    GramTarget::scalar(rat(1)).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let e8 = data::e8();
    for (q, want) in [(1, 240), (2, 2160), (3, 6720)] {
        let got = e8.rep_number(&GramTarget::scalar(rat(q)).map_err(e)?);
        ensure(got == want && got == common::e8_box_count(q), format!("rep(E8,({q})) = {got}"))?;
    }
    let i3 = data::identity(3);
    for (k, want) in [(1, 6), (2, 12), (3, 8), (4, 6)] {
        let got = i3.rep_number(&GramTarget::scalar(ratio(k, 2)).map_err(e)?);
        ensure(got == want && got == common::i3_box_count(k), format!("rep(I3,({k}/2)) = {got}"))?;
    }
    let t = start.elapsed();
    ensure(t < REP_TIME_LIMIT, format!("took {t:?}"))?;
    Ok(format!("E8: 240, 2160, 6720; I3: 6, 12, 8, 6; box oracle agrees; {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let i3 = automorphism_info(&data::identity(3)).map_err(e)?;
    let (all, proper) = common::signed_permutations(3);
    ensure(i3.order_o == 48 && i3.order_o == all as u128 && i3.order_so == proper as u128, format!("|O(I3)| = {}", i3.order_o))?;
    let d4 = data::d4();
    let d4_info = automorphism_info(&d4).map_err(e)?;
    let roots: Vec<Vec<i64>> = common::box_vectors(4, 2).into_iter().filter(|v| d4.int_norm(v) == 2).collect();
    let (d4_all, _) = common::brute_force_automorphisms(&data::d4_gram(), &roots);
    ensure(d4_info.order_o == 1152 && d4_all == 1152, format!("|O(D4)| = {}", d4_info.order_o))?;
    let start = Instant::now();
    let e8 = automorphism_info(&data::e8()).map_err(e)?;
    let t = start.elapsed();
    ensure(e8.order_o == E8_ORDER, format!("|O(E8)| = {}", e8.order_o))?;
    ensure(e8.generators.iter().all(|g| g.is_automorphism_of(&data::e8())), "E8 generator fails")?;
    ensure(t < E8_AUT_TIME_LIMIT, format!("E8 took {t:?}"))?;
    Ok(format!("48, 1152, {} (E8 in {t:.2?})", e8.order_o))
}

fn criterion_3() -> Outcome {
    let g8 = enumerate_genus(&data::e8(), 3).map_err(e)?;
    ensure(g8.class_count() == 1, format!("E8 genus has {} classes", g8.class_count()))?;
    let r = rank16();
    let g = &r.genus;
    ensure(g.class_count() == 2, format!("rank-16 genus has {} classes", g.class_count()))?;
    let (a, b) = (&g.classes[0].lattice, &g.classes[1].lattice);
    ensure(is_isometric(a, b).map_err(e)?.is_none(), "classes are isometric")?;
    ensure(a.determinant() == b.determinant(), "determinants differ")?;
    for p in (2..=50u64).filter(|p| (2..*p).all(|d| p % d != 0)) {
        ensure(local_invariants(a, p) == local_invariants(b, p), format!("local invariants differ at {p}"))?;
    }
    let sum: Rational = g.classes.iter().map(|c| Rational::new(1.into(), c.aut.order_so.into())).sum();
    ensure(g.mass == sum && sum == rank16_mass(), format!("mass {}", g.mass))?;
    Ok(format!("1 class; 2 classes, mass {} ({:.2?})", g.mass, r.elapsed))
}

fn criterion_4() -> Outcome {
    let r = rank16();
    let start = Instant::now();
    let mut per_t = Vec::new();
    for q in [1i64, 2] {
        let t = GramTarget::scalar(rat(q)).map_err(e)?;
        let reps: Vec<u64> = r.genus.classes.iter().map(|c| c.lattice.rep_number(&t)).collect();
        // direct count from the norm histogram
        let counts: Vec<u64> =
            r.genus.classes.iter().map(|c| c.lattice.norm_histogram(2 * q).get(&(2 * q)).copied().unwrap_or(0)).collect();
        ensure(reps == counts, format!("histogram disagrees at T = {q}"))?;
        ensure(reps.windows(2).all(|w| w[0] == w[1]), format!("classes differ at T = {q}: {reps:?}"))?;
        per_t.push(reps[0]);
    }
    ensure(per_t[0] == 480, format!("rep at T = 1 is {}", per_t[0]))?;
    let t = start.elapsed() + r.elapsed;
    ensure(t < THETA16_TIME_LIMIT, format!("took {t:?}"))?;
    Ok(format!("T=1: 480, T=2: {} on both classes; {t:.2?} including genus", per_t[1]))
}

fn criterion_5() -> Outcome {
    let e8 = data::e8();
    let t = one();
    let completions = GramTarget::block_completions(&e8, &t, &t);
    let total: u64 = completions.iter().map(|b| e8.rep_number(b)).sum();
    ensure(total == 240 * 240, format!("Σ_B rep = {total}"))?;
    let genus = e8_genus();
    let triv = WeightFunction::trivial(1);
    let z = special_cycle(&genus, &t, &triv).map_err(e)?;
    let lhs = z.sharp_product(&z).map_err(e)?;
    let mut rhs = None::<cyclering::special_cycles::GenusClassFunction>;
    for b in &completions {
        let zb = special_cycle(&genus, b, &WeightFunction::trivial(2)).map_err(e)?;
        rhs = Some(match rhs {
            None => zb,
            Some(s) => s.add(&zb).map_err(e)?,
        });
    }
    let rhs = rhs.ok_or("no completions")?;
    ensure(lhs.values() == rhs.values(), "sharp classes differ")?;
    Ok(format!("240² = Σ over {} completions; sharp identity on {} symbols", completions.len(), lhs.values()[0].len()))
}

fn criterion_6() -> Outcome {
    let r = truncation_hom(TRUNCATION_SAMPLES, TRUNCATION_SEED);
    let failed: Vec<String> = r.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    ensure(failed.is_empty(), failed.join("; "))?;
    Ok(format!("{TRUNCATION_SAMPLES} random elements, cutoff ≤ 8, ambient rank ≤ 6"))
}

fn padded_identity(genus: &Arc<GenusData>) -> Result<(Rational, Rational), String> {
    let m = cutoff_of(genus).map_err(e)?;
    let t = one();
    let z1 = reduced_special_cycle(genus, &t, &WeightFunction::trivial(1)).map_err(e)?;
    let z2 = reduced_special_cycle(genus, &t.direct_sum(&GramTarget::zero(m - 2)), &WeightFunction::trivial(m - 1))
        .map_err(e)?;
    let lhs = inner_product(&z1, &z2).map_err(e)?;
    let mut sum = Rational::zero();
    for b in GramTarget::block_completions(&genus.base, &t, &t) {
        sum += eisenstein_coefficient(genus, &b, &WeightFunction::trivial(2)).map_err(e)?.value;
    }
    Ok((lhs, rat(2) * sum))
}

fn criterion_7() -> Outcome {
    let (l8, r8) = padded_identity(&e8_genus())?;
    ensure(l8 == r8, format!("E8: {l8} vs {r8}"))?;
    let (l16, r16) = padded_identity(&rank16().genus)?;
    ensure(l16 == r16, format!("rank 16: {l16} vs {r16}"))?;
    Ok(format!("E8: {l8}; rank 16: {l16}"))
}

fn criterion_8() -> Outcome {
    let mut genera: Vec<(String, Arc<GenusData>)> = vec![("E8".into(), e8_genus()), ("E8⊕E8".into(), rank16().genus.clone())];
    genera.push(("D4".into(), Arc::new(enumerate_genus(&data::d4(), 3).map_err(e)?)));
    for n in 3..=8 {
        genera.push((format!("I{n}"), Arc::new(enumerate_genus(&data::identity(n), 3).map_err(e)?)));
    }
    for (name, g) in &genera {
        let m = cutoff_of(g).map_err(e)?;
        let d = deg_tot(&ReducedClass::constant(g.clone(), m, Rational::one()).map_err(e)?);
        ensure(d == rat(2), format!("{name}: deg_tot = {d}"))?;
    }
    let genus = &genera[0].1;
    let origin = vec![0i64; 8];
    let root = vec![1i64, 0, 0, 0, 0, 0, 0, 0];
    for n in 1..=3 {
        let zero = WeightFunction::coset_indicator(&genus.base, 2, vec![origin.clone(); n]).map_err(e)?;
        let shifted = WeightFunction::coset_indicator(&genus.base, 3, vec![root.clone(); n]).map_err(e)?;
        let mut phis = vec![zero.clone(), shifted.clone()];
        if n == 1 {
            phis.push(WeightFunction::linear_combination(&ratio(2, 3), &zero, &rat(5), &shifted).map_err(e)?);
        }
        for phi in phis {
            let flat = special_cycle(genus, &GramTarget::zero(n), &phi).map_err(e)?.flat().map_err(e)?;
            ensure(flat.grade() == n && flat.rep() == [phi.at_zero(8)], format!("z(0_{n}) flat {:?}", flat.rep()))?;
        }
    }
    Ok(format!("deg_tot = 2 on {} genera; z(0,φ)♭ = φ(0)·cⁿ for n ≤ 3 with moduli 2, 3 and 6", genera.len()))
}

fn criterion_9() -> Outcome {
    let r = orbit_sum_lemma().map_err(e)?;
    let failed: Vec<String> = r.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    ensure(failed.is_empty(), failed.join("; "))?;
    Ok(format!("{} checks on ℤ³ under S₃", r.checks.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("representation numbers", criterion_1),
        ("automorphism orders", criterion_2),
        ("genus enumeration", criterion_3),
        ("degree-1 theta agreement", criterion_4),
        ("product formula", criterion_5),
        ("truncation homomorphism", criterion_6),
        ("inner product and Eisenstein consistency", criterion_7),
        ("normalizations", criterion_8),
        ("orbit-sum lemma", criterion_9),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let label = format!("criterion {}", i + 1);
        if filter.as_ref().is_some_and(|s| !label.contains(s.as_str()) && !name.contains(s.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("{label} PASS {name}: {detail} [{t:.2?}]"),
            Err(why) => {
                failures += 1;
                println!("{label} FAIL {name}: {why} [{t:.2?}]");
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
