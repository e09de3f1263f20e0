//! Strong reversibility verdicts with the deciding clause and a witness involution.

use num_complex::Complex64;
use qhi::classify::{hyperbolic_block, non_vertical_block, vertical_block};
use qhi::reversibility::{involution_residual, reversal_residual, strongly_reversible_spn, strongly_reversible_spn1};
use qhi::{FormContext, GroupElement, QMatrix, Quaternion};

fn main() {
    let one = Complex64::new(1.0, 0.0);
    let lam = Complex64::from_polar(1.0, 1.0);
    let cases = [
        ("u_V", GroupElement::new(vertical_block(one, Quaternion::I), FormContext::Siegel, 1e-12)),
        (
            "u_NV",
            GroupElement::new(non_vertical_block(one, Quaternion::real(0.5), Quaternion::ONE), FormContext::Siegel, 1e-12),
        ),
        ("diag(2, 1/2)", GroupElement::new(hyperbolic_block(2.0, 0.0), FormContext::Siegel, 1e-12)),
        (
            "diag(-1, l, l)",
            GroupElement::new(QMatrix::complex_diag(&[-one, lam, lam]), FormContext::Ball, 1e-12),
        ),
    ];
    for (name, g) in cases {
        let g = g.unwrap();
        let v = strongly_reversible_spn1(&g, 1e-9).unwrap();
        print!("{name:<16} {} (clause {}: {})", v.strongly_reversible, v.criterion.clause, v.criterion.detail);
        if let Some(w) = v.witness {
            print!(", witness w^2-I {:.1e}, reversal {:.1e}", involution_residual(&w.mat), reversal_residual(&g.mat, &w.mat));
        }
        println!();
    }
    let g = GroupElement::new(QMatrix::complex_diag(&[Complex64::i(), lam]), FormContext::Positive, 1e-12).unwrap();
    let v = strongly_reversible_spn(&g, 1e-9).unwrap();
    println!("diag(i, e^i) in Sp(2): {} ({})", v.strongly_reversible, v.criterion.detail);
}
