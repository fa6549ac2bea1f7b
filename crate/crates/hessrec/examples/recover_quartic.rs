//! The full quartic pipeline on the built-in reference curve: Veronese
//! extraction, graded resolution, chart, parametrization, and the group
//! element solve.
//!
//! ```bash
//! cargo run --release --example recover_quartic
//! ```

use hessrec::fixtures;
use hessrec::forward::GradedSubspace;
use hessrec::linalg::FieldKind;
use hessrec::poly::VarSet;
use hessrec::recover4::recover_quartic_traced;

fn main() {
    let q = FieldKind::Rational;
    let i2 = GradedSubspace::from_forms(VarSet::z(6), 2, q, fixtures::example_ideal_quadrics());
    println!(
        "input: the {} quadrics through the Hessian variety",
        i2.dim()
    );
    let (f, trace) = recover_quartic_traced(&i2, 2).unwrap();
    println!("Veronese quadrics ({}):", trace.j2.len());
    for j in &trace.j2 {
        println!("  {j}");
    }
    println!("linear syzygy space dimension: {}", trace.syzygy_dim);
    println!("resolution ranks:  {:?}", trace.ranks);
    println!("resolution twists: {:?}", trace.twists);
    println!(
        "chart map: {:?}",
        trace
            .chart
            .forms
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
    );
    println!("image quartic: {}", trace.image_quartic);
    println!("group element:\n{:?}", trace.group_element.0);
    println!("recovered F = {f}");
    assert!(f.proportional(&fixtures::example_quartic()));
    println!("matches the reference curve");
}
