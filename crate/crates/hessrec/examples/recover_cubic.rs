//! Recovery of a plane cubic from the linear span of its Hessian variety.
//!
//! ```bash
//! cargo run --release --example recover_cubic
//! ```

use hessrec::forward::ideal_graded_piece;
use hessrec::linalg::FieldKind;
use hessrec::poly::{HomogPoly, VarSet};
use hessrec::recover3::recover_cubic;
use rand::SeedableRng;

fn main() {
    let q = FieldKind::Rational;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
    let zv = VarSet::z(6);

    // the coordinate-plane triangle: V(z00, z11, z22, z01·z02·z12)
    let gens = vec![
        HomogPoly::var(zv, 0, q),
        HomogPoly::var(zv, 3, q),
        HomogPoly::var(zv, 5, q),
        HomogPoly::var(zv, 1, q)
            .multiply(&HomogPoly::var(zv, 2, q))
            .multiply(&HomogPoly::var(zv, 4, q)),
    ];
    let f = recover_cubic(&gens, 2).unwrap();
    println!("triangle ideal recovers F = {f}");

    // round trip on a dense cubic
    let g = HomogPoly::parse(
        "x0^3 - 2*x0^2*x1 + 3*x0*x1*x2 + x1^3 - x1*x2^2 + 5*x2^3",
        VarSet::x(3),
        q,
    )
    .unwrap();
    let piece1 = ideal_graded_piece(&g, 1, &mut rng).unwrap();
    println!("linear piece of the Hessian variety of {g}:");
    for b in piece1.basis_forms() {
        println!("  {b}");
    }
    let back = recover_cubic(&piece1.basis_forms(), 2).unwrap();
    println!("recovered (normalized): {back}");
    assert!(back.proportional(&g));
    println!("round trip exact");
}
