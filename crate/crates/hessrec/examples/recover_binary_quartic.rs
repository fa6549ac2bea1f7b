//! Binary quartics from the pencil of conics through their four Hessian
//! points.
//!
//! ```bash
//! cargo run --release --example recover_binary_quartic
//! ```

use hessrec::forward::ideal_graded_piece;
use hessrec::linalg::FieldKind;
use hessrec::poly::{HomogPoly, VarSet};
use hessrec::recover4::{binary_quartic_from_coeffs, recover_h41};
use rand::SeedableRng;

fn main() {
    let q = FieldKind::Rational;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    let f = HomogPoly::parse("x0^4 + x0^3*x1 + 3*x0*x1^3 - x1^4", VarSet::x(2), q).unwrap();
    println!("F = {f}");
    let pencil = ideal_graded_piece(&f, 2, &mut rng).unwrap();
    println!("pencil of conics through the four Hessian points:");
    for b in pencil.basis_forms() {
        println!("  {b}");
    }
    let a = recover_h41(&pencil).unwrap();
    let back = binary_quartic_from_coeffs(&a, q);
    println!("recovered: {back}");
    assert!(back.proportional(&f));
    println!("round trip exact");
}
