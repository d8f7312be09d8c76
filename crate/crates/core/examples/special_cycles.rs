//! Special cycles on the E8 genus: sharp and flat classes, total degree,
//! inner products and Eisenstein coefficients.
use std::sync::Arc;

use cyclering::data;
use cyclering::genus::GenusData;
use cyclering::isometry::SearchLimits;
use cyclering::lattice::GramTarget;
use cyclering::linalg::rat;
use cyclering::special_cycles::{
    deg_tot, eisenstein_coefficient, inner_product, reduced_special_cycle, sc_pairing_matrix, sc_radical_rank,
    special_cycle, ReducedClass,
};
use cyclering::weights::WeightFunction;

fn main() -> cyclering::Result<()> {
    let genus = Arc::new(GenusData::single_class(&data::e8(), SearchLimits::default())?);
    let t = GramTarget::scalar(rat(1))?;
    let triv = WeightFunction::trivial(1);
    let z = special_cycle(&genus, &t, &triv)?;
    println!("z((1)) has {} symbols, invariant: {}", z.values()[0].len(), z.is_invariant());
    println!("flat: {:?}", z.flat()?.rep().iter().map(ToString::to_string).collect::<Vec<_>>());
    let top = ReducedClass::constant(genus.clone(), 6, rat(1))?;
    println!("deg_tot(c^6) = {}", deg_tot(&top));
    let zero5 = reduced_special_cycle(&genus, &GramTarget::zero(5), &WeightFunction::trivial(5))?;
    println!("⟨z((1)), z(0_5)⟩ = {}", inner_product(&z.flat()?, &zero5)?);
    println!("A((2)) = {}", eisenstein_coefficient(&genus, &GramTarget::scalar(rat(2))?, &triv)?.value);
    let left: Vec<_> = (1..=3).map(|q| (GramTarget::scalar(rat(q)).unwrap(), triv.clone())).collect();
    let right = vec![(GramTarget::zero(5), WeightFunction::trivial(5))];
    let (rank, kernel) = sc_radical_rank(&sc_pairing_matrix(&genus, &left, &right)?);
    println!("pairing rank {rank}, kernel dimension {}", kernel.len());
    Ok(())
}
