//! Isometry witnesses and certified non-isometry.
use cyclering::data;
use cyclering::isometry::is_isometric;
use cyclering::linalg::rat;

fn main() -> cyclering::Result<()> {
    let e8 = data::e8();
    let mut u = vec![vec![0i64; 8]; 8];
    for i in 0..8 {
        u[i][(i + 3) % 8] = 1;
    }
    u[0][1] = 1;
    let moved = e8.transform(&u)?;
    let w = is_isometric(&e8, &moved)?.expect("same lattice in another basis");
    println!("E8 vs E8·U: witness with det {}", w.det());
    let distinct = is_isometric(&data::e8e8(), &data::d16_plus())?;
    println!("E8⊕E8 vs D16+: {}", if distinct.is_some() { "isometric" } else { "distinct" });
    let i2 = data::identity(2);
    let scaled = is_isometric(&i2, &i2.scaled(&rat(2))?)?;
    println!("I2 vs 2·I2: {}", if scaled.is_some() { "isometric" } else { "distinct" });
    Ok(())
}
