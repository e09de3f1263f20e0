//! Every element of Sp(n,1) and Sp(n) is conjugate to its inverse.

use qhi::generate::{random_element, ElementRecipe};
use qhi::reversibility::{reversal_residual, reverser_spn, reverser_spn1, ReverserSquare};
use qhi::Kind;

fn main() {
    for kind in Kind::ALL {
        let g = random_element(&ElementRecipe::new(kind, 3, 5)).unwrap().element;
        let h = reverser_spn1(&g, 1e-9).unwrap();
        println!(
            "{:<28} reversal {:.1e}, h^2 = {:?}",
            kind.name(),
            reversal_residual(&g.mat, &h.mat),
            ReverserSquare::of(&h.mat, 1e-9)
        );
    }
    let g = random_element(&ElementRecipe::compact(4, 5)).unwrap().element;
    let h = reverser_spn(&g, 1e-9).unwrap();
    println!("Sp(4) reversal {:.1e}, h^2 = {:?}", reversal_residual(&g.mat, &h.mat), ReverserSquare::of(&h.mat, 1e-9));
}
