//! Eigenvalue classes with their types, diagonalization and the Jordan split.

use qhi::generate::{random_element, ElementRecipe};
use qhi::spectral::{diagonalize, eigen_classes, jordan_decompose};
use qhi::Kind;

fn main() {
    let g = random_element(&ElementRecipe::new(Kind::Elliptic, 3, 4)).unwrap().element;
    for c in eigen_classes(&g, 1e-9).unwrap() {
        println!("class {:.4} multiplicity {} type {:?}", c.rep, c.multiplicity, c.geom_type);
    }
    let d = diagonalize(&g, 1e-9).unwrap();
    println!("diagonal {:?}", d.diagonal);
    println!("diagonalization residual {:.1e}", d.residual);

    let g = random_element(&ElementRecipe::new(Kind::NonUnipotent3, 2, 4)).unwrap().element;
    let jp = jordan_decompose(&g, 1e-9).unwrap();
    println!(
        "jordan: degree {}, commutator {:.1e}, product {:.1e}",
        jp.degree, jp.commutator_residual, jp.product_residual
    );
}
