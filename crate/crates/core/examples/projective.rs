//! Reversers squaring to ±I: every element of PSp(n,1) is a product of two involutions.

use qhi::generate::{random_element, ElementRecipe};
use qhi::reversibility::{projective_reverser, reversal_residual, ReverserSquare};
use qhi::Kind;

fn main() {
    for kind in Kind::ALL {
        for n in 2..=3 {
            let g = random_element(&ElementRecipe::new(kind, n, 21)).unwrap().element;
            let h = projective_reverser(&g, 1e-9).unwrap();
            println!(
                "{:<28} n={n}: h^2 = {:?}, reversal {:.1e}",
                kind.name(),
                ReverserSquare::of(&h.mat, 1e-10),
                reversal_residual(&g.mat, &h.mat)
            );
        }
    }
}
