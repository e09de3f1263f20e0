//! Elements of Sp(2m) as products of four involutions.

use qhi::generate::{random_element, ElementRecipe};
use qhi::reversibility::{four_involution_factorization, involution_residual};
use qhi::QMatrix;

fn main() {
    for m in 1..=3 {
        let g = random_element(&ElementRecipe::compact(2 * m, 9)).unwrap().element;
        let fs = four_involution_factorization(&g, 1e-9).unwrap();
        let prod = fs.iter().fold(QMatrix::identity(2 * m), |a, f| &a * &f.mat);
        let sq: Vec<String> = fs.iter().map(|f| format!("{:.1e}", involution_residual(&f.mat))).collect();
        println!("Sp({}): f^2-I [{}], product residual {:.1e}", 2 * m, sq.join(", "), prod.dist(&g.mat));
    }
    let g = random_element(&ElementRecipe::compact(3, 9)).unwrap().element;
    println!("Sp(3): {}", four_involution_factorization(&g, 1e-9).unwrap_err());
}
