//! The group action, the induced map on symmetric matrices, and its
//! inversion.
//!
//! ```bash
//! cargo run --release --example group_action
//! ```

use hessrec::linalg::FieldKind;
use hessrec::poly::{HomogPoly, VarSet};
use hessrec::symsq::{act, hessian_map_forms, rho_inverse, rho_of, GroupElement};

fn main() {
    let q = FieldKind::Rational;
    let f = HomogPoly::parse("x0^3 + x1^3 + x2^3", VarSet::x(3), q).unwrap();
    let g = GroupElement::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[2, 0, 1]], q).unwrap();
    let gf = act(&g, &f);
    println!("act(g, F) = {gf}");

    let r = rho_of(&g);
    println!("induced action on the six symmetric coordinates:\n{r:?}");
    let back = rho_inverse(&r).unwrap();
    println!("inverted group element (up to scalar):\n{:?}", back.0);
    assert!(back.proportional(&g));

    // the Hessian map of act(g, F) is the transformed Hessian map of F
    let lhs = hessian_map_forms(&gf);
    let hf = hessian_map_forms(&f);
    let composed: Vec<_> = hf.forms.iter().map(|c| act(&g, c)).collect();
    for (row, lf) in lhs.forms.iter().enumerate() {
        let mut acc = HomogPoly::zero(VarSet::x(3), 1, q);
        for (col, cf) in composed.iter().enumerate() {
            acc = acc.add(&cf.scale(r.at(row, col)));
        }
        assert_eq!(&acc, lf);
    }
    println!("equivariance identity holds exactly");
}
