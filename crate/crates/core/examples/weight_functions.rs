//! Coset weights, their tensor products and weighted representation numbers.
use cyclering::data;
use cyclering::lattice::GramTarget;
use cyclering::linalg::{rat, ratio};
use cyclering::weights::{rep_number_weighted, WeightFunction};

fn main() -> cyclering::Result<()> {
    let e8 = data::e8();
    let t = GramTarget::scalar(rat(1))?;
    let origin = vec![0i64; 8];
    let root = vec![1, 0, 0, 0, 0, 0, 0, 0];
    let even = WeightFunction::coset_indicator(&e8, 2, vec![origin.clone()])?;
    let shifted = WeightFunction::coset_indicator(&e8, 2, vec![root.clone()])?;
    println!("roots in 2·E8: {}", rep_number_weighted(&e8, &t, &even)?);
    println!("roots ≡ e1 mod 2·E8: {}", rep_number_weighted(&e8, &t, &shifted)?);
    let mix = WeightFunction::linear_combination(&ratio(1, 2), &even, &ratio(1, 2), &shifted)?;
    println!("½δ₀ + ½δ_e1 on roots: {}", rep_number_weighted(&e8, &t, &mix)?);
    let pair = shifted.tensor(&WeightFunction::trivial(1))?;
    let t2 = GramTarget::from_i64_rows(&[vec![1, 0], vec![0, 1]])?;
    println!("orthogonal root pairs with first root ≡ e1: {}", rep_number_weighted(&e8, &t2, &pair)?);
    println!("φ(0) of the shifted coset: {}", shifted.at_zero(8));
    Ok(())
}
