//! Complex adjoint, the three Hermitian forms and the Cayley change of model.

use qhi::generate::random_group_matrix;
use qhi::qmat::{ball_to_siegel, cayley, is_in_group, membership_residual};
use qhi::{FormContext, QMatrix, Quaternion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = QMatrix::from_fn(2, 2, |r, c| Quaternion::new(r as f64, 1.0, c as f64, -1.0));
    let b = QMatrix::from_fn(2, 2, |r, c| Quaternion::new(1.0, c as f64, 0.5, r as f64));
    let hom = ((&a * &b).complex_adjoint() - a.complex_adjoint() * b.complex_adjoint()).norm();
    println!("|phi(AB) - phi(A)phi(B)| = {hom:.1e}");

    let (p, _) = cayley(3).unwrap();
    let lhs = &(&p.star() * &FormContext::Ball.form(3)) * &p;
    println!("|P* J P - J_hat| = {:.1e}", lhs.dist(&FormContext::Siegel.form(3)));

    let g = random_group_matrix(FormContext::Ball, 3, &mut rng);
    println!("ball residual {:.1e}", membership_residual(&g, FormContext::Ball).unwrap());
    let gs = ball_to_siegel(&g).unwrap();
    println!("siegel residual {:.1e}", membership_residual(&gs, FormContext::Siegel).unwrap());
    let (ok, res) = is_in_group(&g, FormContext::Siegel, 1e-9).unwrap();
    println!("ball element in Siegel group: {ok} (residual {res:.1e})");
}
