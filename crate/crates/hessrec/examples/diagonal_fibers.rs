//! Diagonal forms: the image hypersurface and the full fiber.
//!
//! ```bash
//! cargo run --release --example diagonal_fibers
//! ```

use hessrec::linalg::FieldKind;
use hessrec::waring::{fiber_enumerate, image_degree, image_polynomial, DiagonalForm};
use rand::SeedableRng;

fn main() {
    let q = FieldKind::Rational;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for (d, k) in [(3u32, 3usize), (4, 2), (5, 2)] {
        let f = DiagonalForm::new(d, vec![q.one(); k]).unwrap();
        let img = image_polynomial(&f, 20).unwrap();
        println!(
            "d = {d}, k = {k}: image degree {} (formula {}), image polynomial {img}",
            img.degree,
            image_degree(d, k)
        );
        let fiber = fiber_enumerate(&f, 20, &mut rng).unwrap();
        println!("  fiber size {}:", fiber.len());
        for g in &fiber {
            println!("    {}", g.as_poly());
        }
    }
}
