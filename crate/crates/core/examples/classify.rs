//! Classify a random element of every kind and certify the normal form.

use qhi::classify::{classify, conjugacy_invariant};
use qhi::generate::{random_element, ElementRecipe};
use qhi::Kind;

fn main() {
    for kind in Kind::ALL {
        let g = random_element(&ElementRecipe::new(kind, 2, 17)).unwrap().element;
        let class = classify(&g, 1e-9).unwrap();
        println!(
            "{:<28} normal form residual {:.1e}, conjugator residual {:.1e}",
            class.kind.name(),
            class.normal_form_residual,
            class.conjugator_residual
        );
        let inv = conjugacy_invariant(&g, 1e-9).unwrap();
        println!("    invariant classes {:?}", inv.classes.iter().map(|c| (c.rep, c.multiplicity)).collect::<Vec<_>>());
    }
}
