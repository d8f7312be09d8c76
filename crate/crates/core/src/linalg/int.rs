//! Integer matrices as `Vec<Vec<i64>>`: Hermite normal form, integer
//! kernels, saturation, determinants and small products.

pub type IntMatrix = Vec<Vec<i64>>;

fn to_wide(rows: &[Vec<i64>]) -> Vec<Vec<i128>> {
    rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

fn to_narrow(rows: Vec<Vec<i128>>) -> IntMatrix {
    rows.into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("integer entry overflows i64")).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose(m: &[Vec<i64>]) -> IntMatrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "matrix product dimension mismatch");
            (0..cols)
                .map(|j| {
                    let s: i128 = (0..inner).map(|k| row[k] as i128 * b[k][j] as i128).sum();
                    i64::try_from(s).expect("matrix product overflows i64")
                })
                .collect()
        })
        .collect()
}

/// `m·v` (column action).
pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| {
            let s: i128 = row.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum();
            i64::try_from(s).expect("matrix-vector product overflows i64")
        })
        .collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// `Uᵀ·G·U`.
pub fn congruence(g: &[Vec<i64>], u: &[Vec<i64>]) -> IntMatrix {
    mat_mul(&transpose(u), &mat_mul(g, u))
}

/// `xᵀ·G·y`.
pub fn bilinear(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let s: i128 = g
        .iter()
        .zip(x)
        .map(|(row, &xi)| {
            xi as i128 * row.iter().zip(y).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>()
        })
        .sum();
    i64::try_from(s).expect("bilinear form overflows i64")
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = to_wide(m);
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else { return 0 };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Row echelon form over ℤ together with the unimodular transform `T`
/// with `T·rows = echelon`. Nonzero echelon rows come first, pivots are
/// positive and entries above each pivot are reduced into `[0, pivot)`.
pub fn echelon_with_transform(rows: &[Vec<i64>], ncols: usize) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let n = rows.len();
    let mut a = to_wide(rows);
    let mut t: Vec<Vec<i128>> =
        (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == n {
            break;
        }
        // gcd-combine column c over rows r..n into row r
        for i in r + 1..n {
            if a[i][c] == 0 {
                continue;
            }
            let (g, s, u) = ext_gcd(a[r][c], a[i][c]);
            let (pr, pi) = (a[r][c] / g, a[i][c] / g);
            for k in 0..ncols {
                let (x, y) = (a[r][k], a[i][k]);
                a[r][k] = s * x + u * y;
                a[i][k] = pr * y - pi * x;
            }
            for k in 0..n {
                let (x, y) = (t[r][k], t[i][k]);
                t[r][k] = s * x + u * y;
                t[i][k] = pr * y - pi * x;
            }
        }
        if a[r][c] == 0 {
            continue;
        }
        if a[r][c] < 0 {
            a[r].iter_mut().for_each(|x| *x = -*x);
            t[r].iter_mut().for_each(|x| *x = -*x);
        }
        for i in 0..r {
            let q = a[i][c].div_euclid(a[r][c]);
            if q != 0 {
                for k in 0..ncols {
                    a[i][k] -= q * a[r][k];
                }
                for k in 0..n {
                    t[i][k] -= q * t[r][k];
                }
            }
        }
        r += 1;
    }
    (a, t)
}

/// Hermite normal form basis (nonzero rows only) of the lattice spanned by `rows`.
pub fn hnf(rows: &[Vec<i64>], ncols: usize) -> IntMatrix {
    let (e, _) = echelon_with_transform(rows, ncols);
    to_narrow(e.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect())
}

pub fn rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    hnf(rows, ncols).len()
}

/// Basis of `{x ∈ ℤⁿ : a·x = 0}` where `a` has `ncols = n` columns.
pub fn integer_kernel(a: &[Vec<i64>], ncols: usize) -> IntMatrix {
    if a.is_empty() {
        return identity(ncols);
    }
    let at = transpose(a);
    let (e, t) = echelon_with_transform(&at, a.len());
    let rank = e.iter().filter(|r| r.iter().any(|&x| x != 0)).count();
    to_narrow(t[rank..].to_vec())
}

/// HNF basis of `span_ℚ(rows) ∩ ℤⁿ`.
pub fn saturate(rows: &[Vec<i64>], ncols: usize) -> IntMatrix {
    if rank(rows, ncols) == 0 {
        return Vec::new();
    }
    let complement = integer_kernel(rows, ncols);
    let sat = integer_kernel(&complement, ncols);
    hnf(&sat, ncols)
}

/// True when `rows` are independent and span a primitive sublattice.
pub fn is_primitive(rows: &[Vec<i64>], ncols: usize) -> bool {
    let h = hnf(rows, ncols);
    h.len() == rows.len() && h == saturate(rows, ncols)
}

/// Inverse of a unimodular matrix, computed by echelon reduction.
pub fn unimodular_inverse(u: &[Vec<i64>]) -> Option<IntMatrix> {
    let n = u.len();
    let (e, t) = echelon_with_transform(u, n);
    for (i, row) in e.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x != i128::from(i == j) {
                return None;
            }
        }
    }
    Some(to_narrow(t))
}

/// Index `[ℤⁿ : span(rows)]`, or `None` if the rows do not have full rank.
pub fn index_in_full_lattice(rows: &[Vec<i64>], ncols: usize) -> Option<u128> {
    let h = hnf(rows, ncols);
    if h.len() < ncols {
        return None;
    }
    Some(h.iter().enumerate().map(|(i, r)| r[i] as u128).product())
}

/// Incrementally maintained Hermite basis of a sublattice of ℤⁿ.
#[derive(Clone, Debug, Default)]
pub struct IncrementalHnf {
    ncols: usize,
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

impl IncrementalHnf {
    pub fn new(ncols: usize) -> Self {
        IncrementalHnf { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a generator; returns true if the lattice grew.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let mut changed = false;
        let mut idx = 0;
        while idx < self.rows.len() {
            let c = self.pivots[idx];
            if let Some(lead) = v.iter().position(|&x| x != 0) {
                if lead < c {
                    break;
                }
            } else {
                return changed;
            }
            if v[c] != 0 {
                let p = &mut self.rows[idx];
                let (g, s, u) = ext_gcd(p[c], v[c]);
                let (pp, pv) = (p[c] / g, v[c] / g);
                if g != p[c] {
                    changed = true;
                }
                for k in c..self.ncols {
                    let (x, y) = (p[k], v[k]);
                    p[k] = s * x + u * y;
                    v[k] = pp * y - pv * x;
                }
                if p[c] < 0 {
                    p.iter_mut().for_each(|x| *x = -*x);
                }
            }
            idx += 1;
        }
        match v.iter().position(|&x| x != 0) {
            None => {}
            Some(lead) => {
                if v[lead] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                self.rows.insert(idx, v);
                self.pivots.insert(idx, lead);
                changed = true;
            }
        }
        if changed {
            self.reduce();
        }
        changed
    }

    fn reduce(&mut self) {
        for r in 0..self.rows.len() {
            let c = self.pivots[r];
            let piv = self.rows[r][c];
            for i in 0..r {
                let q = self.rows[i][c].div_euclid(piv);
                if q != 0 {
                    let (head, tail) = self.rows.split_at_mut(r);
                    for k in c..self.ncols {
                        head[i][k] -= q * tail[0][k];
                    }
                }
            }
        }
    }

    /// Index in ℤⁿ when of full rank.
    pub fn index(&self) -> Option<u128> {
        if self.rows.len() < self.ncols {
            return None;
        }
        Some(self.rows.iter().enumerate().map(|(i, r)| r[i] as u128).product())
    }

    pub fn basis(&self) -> IntMatrix {
        to_narrow(self.rows.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_is_canonical_for_a_lattice() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let b = vec![vec![-4, 2, 8], vec![2, 4, 4], vec![10, -4, -16]];
        // b spans the same lattice: row0 = row0(a)... check via containment
        let ha = hnf(&a, 3);
        assert_eq!(ha.len(), 3);
        assert!(ha.iter().all(|r| r.iter().all(|x| x.abs() < 100)));
        let hb = hnf(&[ha.clone(), b.clone()].concat(), 3);
        assert_eq!(hnf(&b, 3).len(), 3);
        assert_eq!(hb.len(), 3);
        assert_eq!(determinant(&ha).abs(), determinant(&a).abs());
    }

    #[test]
    fn kernel_and_saturation() {
        let a = vec![vec![2, 2, 0]];
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(dot(&a[0], v), 0);
        }
        assert_eq!(saturate(&a, 3), vec![vec![1, 1, 0]]);
        assert!(!is_primitive(&a, 3));
        assert!(is_primitive(&[vec![1, 1, 0]], 3));
        assert!(saturate(&[vec![0, 0, 0]], 3).is_empty());
        assert_eq!(saturate(&[vec![2, 0], vec![0, 3]], 2), identity(2));
    }

    #[test]
    fn unimodular_inverse_round_trip() {
        let u = vec![vec![1, 2, 0], vec![0, 1, 3], vec![1, 2, 1]];
        assert_eq!(determinant(&u).abs(), 1);
        let v = unimodular_inverse(&u).unwrap();
        assert_eq!(mat_mul(&u, &v), identity(3));
        assert!(unimodular_inverse(&[vec![2, 0], vec![0, 1]]).is_none());
    }

    #[test]
    fn incremental_hnf_matches_batch() {
        let gens = vec![vec![2, 0, 1], vec![0, 3, 1], vec![4, 3, 3], vec![0, 0, 5], vec![6, 6, 1]];
        let mut inc = IncrementalHnf::new(3);
        for g in &gens {
            inc.insert(g);
        }
        assert_eq!(inc.basis(), hnf(&gens, 3));
        assert_eq!(inc.index(), index_in_full_lattice(&gens, 3));
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(determinant(&[vec![2, -1], vec![-1, 2]]), 3);
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), 0);
    }
}
