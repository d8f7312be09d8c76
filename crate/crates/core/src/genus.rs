//! Genus enumeration by Kneser p-neighbors.
//!
//! Lattices are handled through their even integral scaling `E = s·G`
//! (`s` is `D` or `2D`, see [`Lattice::even_scale`]) with quadratic form
//! `q(x) = xᵀEx/2`. For an isotropic line `v` mod `p` the neighbor is
//! `L' = L_v + ℤ·v/p` with `L_v = {x : (x, v) ≡ 0 mod p}` and `v` lifted so
//! that `q(v) ≡ 0 mod p²`. Neighbors of automorphic lines are isometric, so
//! only one line per orbit of a subgroup of `O(L)` is processed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::isometry::{self, AutGroupInfo, IsometryMap, SearchLimits};
use crate::lattice::{lll_gram, Lattice};
use crate::linalg::int::{self, IntMatrix};
use crate::linalg::{cholesky_rational, Rational, RationalMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenusLimits {
    pub max_classes: usize,
    /// Largest `p^rank` for which the line space is scanned.
    pub max_line_space: u64,
    pub search: SearchLimits,
}

impl Default for GenusLimits {
    fn default() -> Self {
        GenusLimits { max_classes: 64, max_line_space: 1 << 32, search: SearchLimits::from_env() }
    }
}

#[derive(Clone, Debug)]
pub struct GenusClass {
    pub lattice: Lattice,
    pub aut: AutGroupInfo,
}

#[derive(Clone, Debug)]
pub struct GenusData {
    pub base: Lattice,
    pub classes: Vec<GenusClass>,
    pub neighbor_prime: u64,
    /// `Σ 1/|SO(L_j)|`.
    pub mass: Rational,
    /// Factor turning the Gram matrices into even integral ones.
    pub scale: i64,
    pub note: String,
}

impl GenusData {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// `1/|SO(L_j)|` per class.
    pub fn weights(&self) -> Vec<Rational> {
        self.classes
            .iter()
            .map(|c| Rational::new(BigInt::one(), BigInt::from(c.aut.order_so)))
            .collect()
    }

    /// Genus data for a lattice that is alone in its genus, without running
    /// a neighbor search.
    pub fn single_class(l: &Lattice, limits: SearchLimits) -> Result<GenusData> {
        let aut = isometry::automorphism_info_with(l, limits)?;
        let mass = Rational::new(BigInt::one(), BigInt::from(aut.order_so));
        Ok(GenusData {
            base: l.clone(),
            classes: vec![GenusClass { lattice: l.clone(), aut }],
            neighbor_prime: 0,
            mass,
            scale: l.even_scale(),
            note: "single class supplied by the caller; no neighbor search was run".into(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalInvariants {
    pub prime: u64,
    /// p-adic valuation of the Gram determinant.
    pub det_valuation: i64,
    /// Hasse invariant `Π_{i<j} (a_i, a_j)_p` of a diagonalization.
    pub hasse: i8,
}

fn valuation(x: &BigInt, p: u64) -> (i64, BigInt) {
    let p = BigInt::from(p);
    let mut v = 0;
    let mut u = x.clone();
    while !u.is_zero() && (&u % &p).is_zero() {
        u /= &p;
        v += 1;
    }
    (v, u)
}

fn legendre(u: &BigInt, p: u64) -> i8 {
    let r = u.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits");
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Hilbert symbol `(a, b)_p` of nonzero integers.
pub fn hilbert_symbol(a: &BigInt, b: &BigInt, p: u64) -> i8 {
    let (alpha, u) = valuation(a, p);
    let (beta, v) = valuation(b, p);
    if p == 2 {
        let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u64().expect("residue fits");
        let (u8_, v8) = (m8(&u), m8(&v));
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let e = eps(u8_) * eps(v8) + alpha as u64 % 2 * omega(v8) + beta as u64 % 2 * omega(u8_);
        return if e.is_multiple_of(2) { 1 } else { -1 };
    }
    let mut s: i8 = if (alpha * beta) % 2 != 0 && (p - 1) / 2 % 2 == 1 { -1 } else { 1 };
    if beta % 2 != 0 {
        s *= legendre(&u, p);
    }
    if alpha % 2 != 0 {
        s *= legendre(&v, p);
    }
    s
}

/// Determinant valuation and Hasse invariant at `p`, from the rational
/// diagonalization of the Gram matrix.
pub fn local_invariants(l: &Lattice, p: u64) -> LocalInvariants {
    let ldl = cholesky_rational(l.gram()).expect("lattice Gram is positive definite");
    // a = n/d has the square class of n·d
    let diag: Vec<BigInt> = ldl.pivots.iter().map(|a| a.numer() * a.denom()).collect();
    let mut hasse = 1i8;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            hasse *= hilbert_symbol(&diag[i], &diag[j], p);
        }
    }
    let det = l.determinant();
    let (vn, _) = valuation(det.numer(), p);
    let (vd, _) = valuation(det.denom(), p);
    LocalInvariants { prime: p, det_valuation: vn - vd, hasse }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Even integral scaling used by the neighbor construction.
fn even_form(l: &Lattice) -> (IntMatrix, i64) {
    let s = l.even_scale();
    let m = s / l.denominator();
    let e = l.int_gram().iter().map(|r| r.iter().map(|x| x * m).collect()).collect();
    (e, s)
}

fn check_prime(l: &Lattice, p: u64) -> Result<()> {
    let bad = |reason: &str| Err(Error::BadPrime { p, reason: reason.into() });
    if !is_prime(p) {
        return bad("not a prime");
    }
    if p == 2 {
        return bad("only odd primes are supported");
    }
    if l.rank() < 2 {
        return bad("rank 1 has no isotropic lines");
    }
    let (e, _) = even_form(l);
    if int::determinant(&e).rem_euclid(p as i128) == 0 {
        return bad("divides the determinant of the even scaling");
    }
    Ok(())
}

/// Lines of `(ℤ/p)^n`, each stored by its representative with first nonzero
/// coordinate 1, indexed as `Σ v_i p^i`.
struct LineSpace {
    p: u64,
    size: u64,
    seen: Vec<u64>,
}

impl LineSpace {
    fn new(p: u64, n: usize, max: u64) -> Result<Self> {
        let size = (p as u128).checked_pow(n as u32).filter(|&s| s <= max as u128).ok_or_else(|| {
            Error::ResourceLimit(format!("line space {p}^{n} exceeds the scan limit {max}"))
        })? as u64;
        Ok(LineSpace { p, size, seen: vec![0; (size as usize).div_ceil(64)] })
    }

    fn normalize(&self, v: &mut [u64]) {
        if let Some(&lead) = v.iter().find(|&&x| x != 0) {
            let inv = pow_mod(lead, self.p - 2, self.p);
            for x in v.iter_mut() {
                *x = *x * inv % self.p;
            }
        }
    }

    fn index(&self, v: &[u64]) -> u64 {
        v.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn decode(&self, mut idx: u64, out: &mut [u64]) {
        for x in out.iter_mut() {
            *x = idx % self.p;
            idx /= self.p;
        }
    }

    fn mark(&mut self, idx: u64) -> bool {
        let (w, b) = ((idx / 64) as usize, idx % 64);
        let fresh = self.seen[w] >> b & 1 == 0;
        self.seen[w] |= 1 << b;
        fresh
    }

    fn is_marked(&self, idx: u64) -> bool {
        self.seen[(idx / 64) as usize] >> (idx % 64) & 1 == 1
    }
}

fn q_mod(e: &IntMatrix, v: &[u64], p: u64) -> u64 {
    let n = v.len();
    let pm = p as i128;
    let mut s: i128 = 0;
    for i in 0..n {
        if v[i] == 0 {
            continue;
        }
        let mut row: i128 = (e[i][i] / 2) as i128 * v[i] as i128;
        for j in i + 1..n {
            row += e[i][j] as i128 * v[j] as i128;
        }
        s = (s + row * v[i] as i128).rem_euclid(pm);
    }
    s as u64
}

/// Isotropic lines mod `p`, one per orbit of the group generated by `acting`.
fn isotropic_line_orbits(e: &IntMatrix, p: u64, acting: &[IsometryMap], max: u64) -> Result<Vec<Vec<u64>>> {
    if p == 3 && e.len() <= 32 {
        mod3::line_orbits(e, acting, max)
    } else {
        line_orbits_generic(e, p, acting, max)
    }
}

fn line_orbits_generic(e: &IntMatrix, p: u64, acting: &[IsometryMap], max: u64) -> Result<Vec<Vec<u64>>> {
    let n = e.len();
    let mut space = LineSpace::new(p, n, max)?;
    let mats: Vec<Vec<Vec<u64>>> = acting
        .iter()
        .map(|g| {
            // stored by columns
            (0..n).map(|j| (0..n).map(|i| g.matrix()[i][j].rem_euclid(p as i64) as u64).collect()).collect()
        })
        .collect();
    let total = space.size;
    let mut reps = Vec::new();
    let mut v = vec![0u64; n];
    let mut w = vec![0u64; n];
    let mut stack: Vec<u64> = Vec::new();
    for idx in 1..total {
        if space.is_marked(idx) {
            continue;
        }
        space.decode(idx, &mut v);
        if v.iter().find(|&&x| x != 0) != Some(&1) || q_mod(e, &v, p) != 0 {
            continue;
        }
        reps.push(v.clone());
        space.mark(idx);
        stack.push(idx);
        while let Some(cur) = stack.pop() {
            space.decode(cur, &mut v);
            for m in &mats {
                w.iter_mut().for_each(|x| *x = 0);
                for (j, &vj) in v.iter().enumerate() {
                    if vj != 0 {
                        for (wi, &c) in w.iter_mut().zip(&m[j]) {
                            *wi += vj * c;
                        }
                    }
                }
                for x in w.iter_mut() {
                    *x %= p;
                }
                space.normalize(&mut w);
                let j = space.index(&w);
                if space.mark(j) {
                    stack.push(j);
                }
            }
        }
    }
    Ok(reps)
}

/// Bitsliced arithmetic over GF(3): a vector is a pair of masks marking
/// the coordinates equal to 1 and to 2.
mod mod3 {
    use super::*;

    #[derive(Clone, Copy, PartialEq, Eq, Debug)]
    pub(super) struct V3 {
        pub one: u32,
        pub two: u32,
    }

    impl V3 {
        const ZERO: V3 = V3 { one: 0, two: 0 };

        fn add(self, b: V3) -> V3 {
            let za = !(self.one | self.two);
            let zb = !(b.one | b.two);
            V3 {
                one: (self.one & zb) | (b.one & za) | (self.two & b.two),
                two: (self.two & zb) | (b.two & za) | (self.one & b.one),
            }
        }

        fn neg(self) -> V3 {
            V3 { one: self.two, two: self.one }
        }

        /// Scales so that the first nonzero coordinate is 1.
        fn normalized(self) -> V3 {
            let nz = self.one | self.two;
            if nz & nz.wrapping_neg() & self.two != 0 {
                self.neg()
            } else {
                self
            }
        }

        fn from_digits(v: &[u64]) -> V3 {
            let mut r = V3::ZERO;
            for (i, &d) in v.iter().enumerate() {
                match d % 3 {
                    1 => r.one |= 1 << i,
                    2 => r.two |= 1 << i,
                    _ => {}
                }
            }
            r
        }

        fn digits(self, n: usize) -> Vec<u64> {
            (0..n).map(|i| u64::from(self.one >> i & 1) + 2 * u64::from(self.two >> i & 1)).collect()
        }
    }

    /// Action of one matrix through per-chunk lookup tables.
    struct Action {
        tables: Vec<[V3; 256]>,
    }

    impl Action {
        fn new(g: &IntMatrix) -> Self {
            let n = g.len();
            let col = |j: usize| V3::from_digits(&(0..n).map(|i| g[i][j].rem_euclid(3) as u64).collect::<Vec<_>>());
            let cols: Vec<V3> = (0..n).map(col).collect();
            let tables = (0..n.div_ceil(4))
                .map(|c| {
                    let mut t = [V3::ZERO; 256];
                    for (key, slot) in t.iter_mut().enumerate() {
                        let (ones, twos) = (key & 15, key >> 4);
                        if ones & twos != 0 {
                            continue;
                        }
                        let mut acc = V3::ZERO;
                        for k in 0..4 {
                            let j = 4 * c + k;
                            if j >= n {
                                break;
                            }
                            if ones >> k & 1 == 1 {
                                acc = acc.add(cols[j]);
                            } else if twos >> k & 1 == 1 {
                                acc = acc.add(cols[j].neg());
                            }
                        }
                        *slot = acc;
                    }
                    t
                })
                .collect();
            Action { tables }
        }

        fn apply(&self, v: V3) -> V3 {
            let mut acc = V3::ZERO;
            for (c, t) in self.tables.iter().enumerate() {
                let key = (v.one >> (4 * c) & 15) | (v.two >> (4 * c) & 15) << 4;
                if key != 0 {
                    acc = acc.add(t[key as usize]);
                }
            }
            acc
        }
    }

    /// Base-3 index of a vector, via a table over 8-coordinate chunks.
    struct Indexer {
        table: Vec<u32>,
        chunks: usize,
    }

    impl Indexer {
        fn new(n: usize) -> Self {
            let mut table = vec![0u32; 1 << 16];
            for (key, slot) in table.iter_mut().enumerate() {
                let (ones, twos) = (key & 255, key >> 8);
                *slot = (0..8).rev().fold(0, |acc, i| acc * 3 + (ones >> i & 1) as u32 + 2 * (twos >> i & 1) as u32);
            }
            Indexer { table, chunks: n.div_ceil(8) }
        }

        fn index(&self, v: V3) -> u64 {
            let mut idx = 0u64;
            for c in (0..self.chunks).rev() {
                let key = (v.one >> (8 * c) & 255) | (v.two >> (8 * c) & 255) << 8;
                idx = idx * 6561 + u64::from(self.table[key as usize]);
            }
            idx
        }
    }

    pub(super) fn line_orbits(e: &IntMatrix, acting: &[IsometryMap], max: u64) -> Result<Vec<Vec<u64>>> {
        let n = e.len();
        let mut space = LineSpace::new(3, n, max)?;
        let actions: Vec<Action> = acting.iter().map(|g| Action::new(g.matrix())).collect();
        let indexer = Indexer::new(n);
        let mut reps = Vec::new();
        let mut digits = vec![0u64; n];
        let mut stack: Vec<V3> = Vec::new();
        let mut v = V3::ZERO;
        let e3: Vec<Vec<i64>> = e.iter().map(|r| r.iter().map(|x| x.rem_euclid(3)).collect()).collect();
        // E·v and vᵀEv mod 3, updated as the odometer moves
        let mut ev = vec![0i64; n];
        let mut norm = 0i64;
        let bump = |ev: &mut [i64], norm: &mut i64, i: usize, delta: i64| {
            *norm = (*norm + 2 * delta * ev[i] + delta * delta * e3[i][i]).rem_euclid(3);
            for (x, row) in ev.iter_mut().zip(&e3) {
                *x = (*x + delta * row[i]).rem_euclid(3);
            }
        };
        for idx in 1..space.size {
            for (i, d) in digits.iter_mut().enumerate() {
                *d += 1;
                let bit = 1u32 << i;
                if *d == 1 {
                    v.one |= bit;
                    bump(&mut ev, &mut norm, i, 1);
                    break;
                } else if *d == 2 {
                    v.one &= !bit;
                    v.two |= bit;
                    bump(&mut ev, &mut norm, i, 1);
                    break;
                }
                *d = 0;
                v.two &= !bit;
                bump(&mut ev, &mut norm, i, 1);
            }
            let nz = v.one | v.two;
            if norm != 0 || nz & nz.wrapping_neg() & v.one == 0 || space.is_marked(idx) {
                continue;
            }
            debug_assert_eq!(q_mod(e, &digits, 3), 0);
            debug_assert_eq!(indexer.index(v), idx);
            reps.push(v.digits(n));
            space.mark(idx);
            stack.push(v);
            while let Some(cur) = stack.pop() {
                for a in &actions {
                    let w = a.apply(cur).normalized();
                    if space.mark(indexer.index(w)) {
                        stack.push(w);
                    }
                }
            }
        }
        Ok(reps)
    }
}

/// Neighbor of the even form `e` along the isotropic line `v`, as an even
/// LLL-reduced Gram matrix.
fn neighbor_gram(e: &IntMatrix, v: &[u64], p: u64) -> IntMatrix {
    let n = e.len();
    let pi = p as i64;
    let mut v: Vec<i64> = v.iter().map(|&x| x as i64).collect();
    let ev = int::mat_vec(e, &v);
    let a: Vec<i64> = ev.iter().map(|x| x.rem_euclid(pi)).collect();
    let k = a.iter().position(|&x| x != 0).expect("p does not divide det, so (·, v) is nonzero mod p");
    let ak_inv = pow_mod(a[k] as u64, p - 2, p) as i64;
    let qv = int::bilinear(e, &v, &v) / 2;
    debug_assert_eq!(qv.rem_euclid(pi), 0);
    let s = (qv / pi).rem_euclid(pi);
    let t = (-s * ak_inv).rem_euclid(pi);
    v[k] += pi * t;
    debug_assert_eq!((int::bilinear(e, &v, &v) / 2).rem_euclid(pi * pi), 0);
    // generators of p·L' = p·L_v + ℤ·v
    let mut rows: IntMatrix = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut r = vec![0i64; n];
        if i == k {
            r[k] = pi * pi;
        } else {
            r[i] = pi;
            r[k] = -pi * (a[i] * ak_inv % pi);
        }
        rows.push(r);
    }
    rows.push(v);
    let b = int::hnf(&rows, n);
    debug_assert_eq!(b.len(), n);
    let g = int::mat_mul(&b, &int::mat_mul(e, &int::transpose(&b)));
    let p2 = pi * pi;
    let g: IntMatrix = g
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    debug_assert_eq!(x % p2, 0);
                    x / p2
                })
                .collect()
        })
        .collect();
    lll_gram(&g).0
}

fn unscale(e: &IntMatrix, s: i64) -> Lattice {
    let rows = e.iter().map(|r| r.iter().map(|&x| Rational::new(BigInt::from(x), BigInt::from(s))).collect()).collect();
    Lattice::new(RationalMatrix::symmetric(rows).expect("neighbor Gram is symmetric"))
        .expect("neighbor Gram is positive definite")
}

/// Every p-neighbor of `l`, one per isotropic line mod `p`, in the units of `l`.
pub fn p_neighbors(l: &Lattice, p: u64) -> Result<Vec<Lattice>> {
    p_neighbors_with(l, p, &GenusLimits::default())
}

pub fn p_neighbors_with(l: &Lattice, p: u64, limits: &GenusLimits) -> Result<Vec<Lattice>> {
    check_prime(l, p)?;
    let (e, s) = even_form(l);
    let lines = isotropic_line_orbits(&e, p, &[], limits.max_line_space)?;
    if lines.is_empty() {
        return Err(Error::BadPrime { p, reason: "no isotropic lines mod p".into() });
    }
    Ok(lines.iter().map(|v| unscale(&neighbor_gram(&e, v, p), s)).collect())
}

/// A few random words in the generators. Their orbits on lines refine the
/// orbits of the full group, so using them never loses neighbors.
fn sample_elements(gens: &[IsometryMap], dim: usize, count: usize, seed: u64) -> Vec<IsometryMap> {
    if gens.len() <= count {
        return gens.to_vec();
    }
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut g = IsometryMap::identity(dim);
            for _ in 0..4 * gens.len() {
                g = gens[rng.gen_range(0..gens.len())].compose(&g);
            }
            g
        })
        .collect()
}

/// Neighbor representatives of `l` up to the action of `O(l)`.
pub fn neighbor_orbit_representatives(
    l: &Lattice,
    p: u64,
    aut: &AutGroupInfo,
    limits: &GenusLimits,
) -> Result<Vec<Lattice>> {
    check_prime(l, p)?;
    let (e, s) = even_form(l);
    let acting = sample_elements(&aut.generators, l.rank(), 3, 0x5eed);
    let lines = isotropic_line_orbits(&e, p, &acting, limits.max_line_space)?;
    if lines.is_empty() {
        return Err(Error::BadPrime { p, reason: "no isotropic lines mod p".into() });
    }
    Ok(lines.iter().map(|v| unscale(&neighbor_gram(&e, v, p), s)).collect())
}

pub const CLOSURE_NOTE: &str = "complete for the p-neighbor graph; equals the genus when genus and spinor genus agree at p";

/// Closure of `{l}` under p-neighbors, deduplicated by isometry.
pub fn enumerate_genus(l: &Lattice, p: u64) -> Result<GenusData> {
    enumerate_genus_with(l, p, &GenusLimits::default())
}

pub fn enumerate_genus_with(l: &Lattice, p: u64, limits: &GenusLimits) -> Result<GenusData> {
    check_prime(l, p)?;
    let mut classes = vec![GenusClass { lattice: l.clone(), aut: isometry::automorphism_info_with(l, limits.search)? }];
    let mut next = 0;
    while next < classes.len() {
        let current = classes[next].clone();
        next += 1;
        for nb in neighbor_orbit_representatives(&current.lattice, p, &current.aut, limits)? {
            let mut known = false;
            for c in &classes {
                if isometry::is_isometric_with(&c.lattice, &nb, limits.search)?.is_some() {
                    known = true;
                    break;
                }
            }
            if known {
                continue;
            }
            if classes.len() >= limits.max_classes {
                return Err(Error::ResourceLimit(format!("genus has more than {} classes", limits.max_classes)));
            }
            let aut = isometry::automorphism_info_with(&nb, limits.search)?;
            classes.push(GenusClass { lattice: nb, aut });
        }
    }
    let mass = classes
        .iter()
        .map(|c| Rational::new(BigInt::one(), BigInt::from(c.aut.order_so)))
        .fold(Rational::zero(), |a, b| a + b);
    debug_assert!(mass.is_positive());
    Ok(GenusData {
        base: l.clone(),
        classes,
        neighbor_prime: p,
        mass,
        scale: l.even_scale(),
        note: CLOSURE_NOTE.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;

    #[test]
    fn hilbert_symbol_basics() {
        let b = |x: i64| BigInt::from(x);
        assert_eq!(hilbert_symbol(&b(1), &b(1), 3), 1);
        assert_eq!(hilbert_symbol(&b(-1), &b(-1), 2), -1);
        assert_eq!(hilbert_symbol(&b(2), &b(3), 3), -1);
        assert_eq!(hilbert_symbol(&b(3), &b(3), 3), -1);
        assert_eq!(hilbert_symbol(&b(5), &b(5), 5), 1);
    }

    #[test]
    fn cubic_lattice_local_invariants() {
        let li = local_invariants(&data::identity(3), 3);
        assert_eq!((li.det_valuation, li.hasse), (0, 1));
        let l = Lattice::from_i64_rows(&[vec![1, 0], vec![0, 5]]).unwrap();
        assert_eq!(local_invariants(&l, 5).det_valuation, 1);
    }

    #[test]
    fn e8_neighbors_are_e8() {
        let e8 = data::e8();
        let nbs = p_neighbors(&e8, 3).unwrap();
        assert!(!nbs.is_empty());
        for nb in nbs.iter().take(40) {
            assert!(isometry::is_isometric(&e8, nb).unwrap().is_some());
        }
        let g = enumerate_genus(&e8, 3).unwrap();
        assert_eq!(g.class_count(), 1);
        assert_eq!(g.mass, Rational::new(BigInt::one(), BigInt::from(348364800u64)));
    }

    #[test]
    fn cubic_neighbors_stay_in_genus() {
        let i3 = data::identity(3);
        for nb in p_neighbors(&i3, 5).unwrap() {
            assert_eq!(nb.determinant(), i3.determinant());
            for p in [2, 3, 5, 7] {
                assert_eq!(local_invariants(&nb, p), local_invariants(&i3, p));
            }
        }
    }

    #[test]
    fn mod3_orbits_match_generic_scan() {
        for l in [data::e8(), data::d4(), data::identity(4)] {
            let (e, _) = even_form(&l);
            let aut = isometry::automorphism_info(&l).unwrap();
            let fast = mod3::line_orbits(&e, &aut.generators, 1 << 20).unwrap();
            let slow = line_orbits_generic(&e, 3, &aut.generators, 1 << 20).unwrap();
            assert_eq!(fast, slow);
            let all_fast = mod3::line_orbits(&e, &[], 1 << 20).unwrap();
            let all_slow = line_orbits_generic(&e, 3, &[], 1 << 20).unwrap();
            assert_eq!(all_fast, all_slow);
        }
    }

    #[test]
    fn bad_primes_rejected() {
        assert!(matches!(p_neighbors(&data::identity(1), 3), Err(Error::BadPrime { .. })));
        assert!(matches!(p_neighbors(&data::e8(), 2), Err(Error::BadPrime { .. })));
        assert!(matches!(p_neighbors(&data::e8(), 9), Err(Error::BadPrime { .. })));
        assert!(p_neighbors(&data::d4(), 3).is_ok());
    }
}
