//! Truncated theta series of the E8 genus in degrees one and two.
use std::sync::Arc;

use cyclering::data;
use cyclering::genus::GenusData;
use cyclering::isometry::SearchLimits;
use cyclering::json::coefficient_table_to_json;
use cyclering::linalg::rat;
use cyclering::qseries::theta_expansion;
use cyclering::weights::WeightFunction;

fn main() -> cyclering::Result<()> {
    let genus = Arc::new(GenusData::single_class(&data::e8(), SearchLimits::default())?);
    let deg1 = theta_expansion(&genus, 1, &rat(8), &WeightFunction::trivial(1))?;
    for e in &deg1.entries {
        println!("T = {} : {}", e.target.matrix().get(0, 0), e.average);
    }
    let deg2 = theta_expansion(&genus, 2, &rat(4), &WeightFunction::trivial(2))?;
    for e in coefficient_table_to_json(&deg2)["entries"].as_array().into_iter().flatten() {
        println!("T = {} : A = {}", e["T"], e["A"]);
    }
    Ok(())
}
