//! Representation numbers of single targets and Gram matrices of pairs.
use cyclering::data;
use cyclering::lattice::GramTarget;
use cyclering::linalg::{rat, ratio};

fn main() -> cyclering::Result<()> {
    let e8 = data::e8();
    for q in 1..=3 {
        let t = GramTarget::scalar(rat(q))?;
        println!("rep(E8, ({q})) = {}", e8.rep_number(&t));
    }
    let i3 = data::identity(3);
    for q in [ratio(1, 2), rat(1), ratio(3, 2), rat(2)] {
        println!("rep(I3, ({q})) = {}", i3.rep_number(&GramTarget::scalar(q.clone())?));
    }
    // pairs of orthogonal roots
    let t = GramTarget::from_i64_rows(&[vec![1, 0], vec![0, 1]])?;
    println!("rep(E8, I2) = {}", e8.rep_number(&t));
    println!("E8 norm histogram (x,x) ≤ 6: {:?}", e8.norm_histogram(6));
    Ok(())
}
