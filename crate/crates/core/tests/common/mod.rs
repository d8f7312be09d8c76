#![allow(dead_code)]

use rand::Rng;

/// Product of random elementary matrices; determinant ±1.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n < 2 {
        return u;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        // column i += k·column j
        for row in u.iter_mut() {
            row[i] += k * row[j];
        }
        if rng.gen_bool(0.2) {
            for row in u.iter_mut() {
                row.swap(i, j);
            }
        }
    }
    u
}

/// Euclidean coordinates of E8: integer or half-integer vectors with even
/// coordinate sum. Returns the count of vectors with `|x|² = 2q`, scanning
/// the box `|x_i| ≤ 5/2`.
pub fn e8_box_count(q: i64) -> u64 {
    // doubled coordinates: all even or all odd, sum ≡ 0 mod 4
    let target = 8 * q;
    let mut count = 0u64;
    for parity in [0i64, 1] {
        let vals: Vec<i64> = (-5..=5).filter(|v: &i64| v.rem_euclid(2) == parity).collect();
        let mut idx = [0usize; 8];
        loop {
            let x: Vec<i64> = idx.iter().map(|&i| vals[i]).collect();
            let norm: i64 = x.iter().map(|v| v * v).sum();
            let sum: i64 = x.iter().sum();
            if norm == target && sum.rem_euclid(4) == 0 {
                count += 1;
            }
            let mut k = 0;
            while k < 8 {
                idx[k] += 1;
                if idx[k] < vals.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == 8 {
                break;
            }
        }
    }
    count
}

/// Vectors of `ℤ³` in the box `|x_i| ≤ 2` with `|x|² = k`.
pub fn i3_box_count(k: i64) -> u64 {
    let mut c = 0;
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for d in -2i64..=2 {
                if a * a + b * b + d * d == k {
                    c += 1;
                }
            }
        }
    }
    c
}

/// Signed permutation matrices of size `n`: `(count, count with det 1)`.
pub fn signed_permutations(n: usize) -> (u64, u64) {
    let mut perm: Vec<usize> = (0..n).collect();
    let (mut all, mut proper) = (0u64, 0u64);
    fn sign(p: &[usize]) -> i64 {
        let mut s = 1;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    s = -s;
                }
            }
        }
        s
    }
    fn permute(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(k + 1, p, out);
            p.swap(k, i);
        }
    }
    let mut perms = Vec::new();
    permute(0, &mut perm, &mut perms);
    for p in &perms {
        for signs in 0..(1u32 << n) {
            let det = sign(p) * if signs.count_ones() % 2 == 0 { 1 } else { -1 };
            all += 1;
            if det == 1 {
                proper += 1;
            }
        }
    }
    (all, proper)
}

/// Automorphisms of an integral Gram matrix by brute force over images of
/// the basis among vectors of the same norms: `(|O|, |SO|)`.
pub fn brute_force_automorphisms(gram: &[Vec<i64>], candidates: &[Vec<i64>]) -> (u64, u64) {
    let n = gram.len();
    let dot = |x: &[i64], y: &[i64]| -> i64 {
        (0..n).map(|i| (0..n).map(|j| x[i] * gram[i][j] * y[j]).sum::<i64>()).sum()
    };
    let mut images: Vec<usize> = Vec::new();
    let (mut all, mut proper) = (0, 0);
    fn det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|c| {
                let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| *v).collect()).collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * det(&minor)
            })
            .sum()
    }
    fn rec(
        images: &mut Vec<usize>,
        n: usize,
        gram: &[Vec<i64>],
        cands: &[Vec<i64>],
        dot: &dyn Fn(&[i64], &[i64]) -> i64,
        all: &mut u64,
        proper: &mut u64,
    ) {
        let k = images.len();
        if k == n {
            let m: Vec<Vec<i64>> = images.iter().map(|&i| cands[i].clone()).collect();
            let d = det(&m);
            if d.abs() == 1 {
                *all += 1;
                if d == 1 {
                    *proper += 1;
                }
            }
            return;
        }
        for (ci, c) in cands.iter().enumerate() {
            if (0..=k).all(|j| {
                let other = if j == k { c } else { &cands[images[j]] };
                dot(c, other) == gram[k][j]
            }) {
                images.push(ci);
                rec(images, n, gram, cands, dot, all, proper);
                images.pop();
            }
        }
    }
    rec(&mut images, n, gram, candidates, &dot, &mut all, &mut proper);
    (all, proper)
}

/// Integer vectors in the box `|x_i| ≤ r`.
pub fn box_vectors(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (-r..=r).map(move |x| { let mut w = v.clone(); w.push(x); w })).collect();
    }
    out
}
