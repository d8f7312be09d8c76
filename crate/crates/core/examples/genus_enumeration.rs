//! Kneser 3-neighbor closure of the even unimodular genera in rank 8 and 16.
use cyclering::data;
use cyclering::genus::{enumerate_genus, local_invariants};

fn main() -> cyclering::Result<()> {
    let g8 = enumerate_genus(&data::e8(), 3)?;
    println!("E8: {} class, mass {}", g8.class_count(), g8.mass);
    let g16 = enumerate_genus(&data::e8e8(), 3)?;
    println!("E8⊕E8: {} classes, mass {}", g16.class_count(), g16.mass);
    for (j, c) in g16.classes.iter().enumerate() {
        println!("  class {j}: |O| = {}, |SO| = {}", c.aut.order_o, c.aut.order_so);
    }
    let i3 = data::identity(3);
    for p in [2, 3, 5] {
        let inv = local_invariants(&i3, p);
        println!("I3 at {p}: det valuation {}, Hasse {}", inv.det_valuation, inv.hasse);
    }
    println!("{}", g16.note);
    Ok(())
}
