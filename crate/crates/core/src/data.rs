//! Gram matrices of the bundled lattices. The same matrices ship as JSON
//! under `data/`.

use crate::lattice::Lattice;
use crate::linalg::int::IntMatrix;

/// Cartan matrix of E8.
pub fn e8_gram() -> IntMatrix {
    vec![
        vec![2, -1, 0, 0, 0, 0, 0, 0],
        vec![-1, 2, -1, 0, 0, 0, 0, 0],
        vec![0, -1, 2, -1, 0, 0, 0, -1],
        vec![0, 0, -1, 2, -1, 0, 0, 0],
        vec![0, 0, 0, -1, 2, -1, 0, 0],
        vec![0, 0, 0, 0, -1, 2, -1, 0],
        vec![0, 0, 0, 0, 0, -1, 2, 0],
        vec![0, 0, -1, 0, 0, 0, 0, 2],
    ]
}

/// Cartan matrix of D4.
pub fn d4_gram() -> IntMatrix {
    vec![vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]]
}

pub fn identity_gram(n: usize) -> IntMatrix {
    crate::linalg::int::identity(n)
}

pub fn e8e8_gram() -> IntMatrix {
    let e8 = e8_gram();
    let mut g = vec![vec![0; 16]; 16];
    for i in 0..8 {
        for j in 0..8 {
            g[i][j] = e8[i][j];
            g[i + 8][j + 8] = e8[i][j];
        }
    }
    g
}

/// D16 extended by the glue vector (½,…,½): the second even unimodular
/// lattice of rank 16.
pub fn d16_plus_gram() -> IntMatrix {
    let mut g = vec![vec![1; 16]; 16];
    for (i, row) in g.iter_mut().enumerate().skip(1).take(14) {
        row[i] = 2;
    }
    g[0] = std::iter::once(4).chain(std::iter::repeat_n(2, 14)).chain(std::iter::once(1)).collect();
    for (i, row) in g.iter_mut().enumerate().skip(1) {
        row[0] = if i == 15 { 1 } else { 2 };
    }
    g[15][15] = 4;
    g
}

fn build(g: IntMatrix) -> Lattice {
    Lattice::from_i64_rows(&g).expect("bundled Gram matrix is positive definite")
}

pub fn e8() -> Lattice {
    build(e8_gram())
}

pub fn d4() -> Lattice {
    build(d4_gram())
}

pub fn identity(n: usize) -> Lattice {
    build(identity_gram(n))
}

pub fn e8e8() -> Lattice {
    build(e8e8_gram())
}

pub fn d16_plus() -> Lattice {
    build(d16_plus_gram())
}

/// Looks up a bundled lattice by name: `I1`…`I8`, `D4`, `E8`, `E8E8`, `D16+`.
pub fn by_name(name: &str) -> Option<Lattice> {
    match name.to_ascii_uppercase().as_str() {
        "D4" => Some(d4()),
        "E8" => Some(e8()),
        "E8E8" | "E8+E8" | "E8XE8" => Some(e8e8()),
        "D16+" | "D16PLUS" => Some(d16_plus()),
        s => {
            let n: usize = s.strip_prefix('I')?.parse().ok()?;
            (1..=8).contains(&n).then(|| identity(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int::determinant;

    #[test]
    fn bundled_grams_are_unimodular_where_expected() {
        assert_eq!(determinant(&e8_gram()), 1);
        assert_eq!(determinant(&e8e8_gram()), 1);
        assert_eq!(determinant(&d16_plus_gram()), 1);
        assert_eq!(determinant(&d4_gram()), 4);
    }

    #[test]
    fn d16_plus_is_symmetric_and_even() {
        let g = d16_plus_gram();
        for i in 0..16 {
            assert_eq!(g[i][i] % 2, 0);
            for j in 0..16 {
                assert_eq!(g[i][j], g[j][i]);
            }
        }
    }
}
