//! The two binary cubics over a three-point configuration, and the
//! involution exchanging them.
//!
//! ```bash
//! cargo run --release --example fiber_and_involution
//! ```

use hessrec::linalg::FieldKind;
use hessrec::recover3::{binary_cubic_coeffs, fiber_h31, involution_iota, involution_matrix_psi};

fn main() {
    let q = FieldKind::Rational;
    let mk = |a: i64, b: i64, c: i64| vec![q.from_i64(a), q.from_i64(b), q.from_i64(c)];
    let points = [mk(1, -1, 0), mk(0, -1, 1), mk(1, 0, -1)];
    println!("three plane points: [1,-1,0], [0,-1,1], [1,0,-1]");
    let (f1, f2) = fiber_h31(&points).unwrap();
    let p1 = f1.to_poly().unwrap();
    let p2 = f2.to_poly().unwrap();
    println!("fiber: {p1}  and  {p2}");

    let a = binary_cubic_coeffs(&p1);
    let iota = involution_iota(&a).unwrap();
    println!(
        "involution of the first: [{}]",
        iota.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    let psi = involution_matrix_psi(&a);
    println!("its 2x2 matrix:\n{psi:?}");
}
