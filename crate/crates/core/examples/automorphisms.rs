//! Orders of O(L) and SO(L) by backtracking with orbit-stabilizer counting.
use cyclering::data;
use cyclering::isometry::{automorphism_info, group_closure};

fn main() -> cyclering::Result<()> {
    for (name, l) in [("I3", data::identity(3)), ("D4", data::d4()), ("E8", data::e8())] {
        let a = automorphism_info(&l)?;
        println!("{name}: |O| = {}, |SO| = {}, {} generators", a.order_o, a.order_so, a.generators.len());
        if a.order_o <= 10_000 {
            let group = group_closure(&a.generators, l.rank(), 10_000)?;
            println!("  closure of the generators has {} elements", group.len());
        }
    }
    Ok(())
}
