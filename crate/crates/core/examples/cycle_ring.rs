//! The symbol ring: products with a cutoff, degree, pairing, reduction to
//! the truncated polynomial ring and orbit sums.
use cyclering::cycle_ring::{orbit_sum, CycleRingElement, SubspaceSymbol};
use cyclering::isometry::IsometryMap;
use cyclering::linalg::rat;

fn main() -> cyclering::Result<()> {
    let m = 3;
    let sym = |grade, rows: &[Vec<i64>]| SubspaceSymbol::new(grade, rows, 3);
    let a = CycleRingElement::from_symbol(m, sym(1, &[vec![1, 0, 0]])?)?;
    let b = CycleRingElement::from_symbol(m, sym(1, &[vec![0, 1, 0]])?)?;
    let c = CycleRingElement::c(m, 3)?;
    println!("a·b = {}", a.mul(&b)?);
    println!("c·a·b = {}, degree {}", c.mul(&a)?.mul(&b)?, c.mul(&a)?.mul(&b)?.degree());
    let z = a.scale(&rat(2)).add(&CycleRingElement::from_symbol(m, sym(3, &[vec![0, 0, 1]])?)?)?;
    println!("reduce({z}) = {}", z.reduce_to_truncated());
    println!("⟨a - b, c^2⟩ = {}", a.sub(&b)?.pair(&c.mul(&c)?)?);
    let gens = [
        IsometryMap::new(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]),
        IsometryMap::new(vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]),
    ];
    println!("orbit sum of [e1]_1 = {}", orbit_sum(m, &sym(1, &[vec![1, 0, 0]])?, &gens, 100)?);
    Ok(())
}
