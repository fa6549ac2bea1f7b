//! Forward direction: graded pieces of the ideal of a Hessian variety.
//!
//! ```bash
//! cargo run --release --example forward_ideal
//! ```

use hessrec::forward::hessian_variety_model;
use hessrec::linalg::FieldKind;
use hessrec::poly::{HomogPoly, VarSet};
use rand::SeedableRng;

fn main() {
    let q = FieldKind::Rational;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);

    let f = HomogPoly::parse("x0^3 + x1^3 + x2^3", VarSet::x(3), q).unwrap();
    println!("F = {f}");
    let model = hessian_variety_model(&f, &[1, 2, 3], &mut rng).unwrap();
    for (e, piece) in &model.pieces {
        println!("degree {e} piece of the ideal (dimension {}):", piece.dim());
        for b in piece.basis_forms() {
            println!("  {b}");
        }
    }
    println!(
        "monotone under multiplication by linear forms: {}",
        model.is_monotone()
    );
}
