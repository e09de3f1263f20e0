//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qhi::classify::{classify, conjugacy_invariant, hyperbolic_block, non_vertical_block, vertical_block};
use qhi::generate::{random_compact_matrix, random_element, random_group_matrix, ElementRecipe, RecipeParams};
use qhi::qmat::{cayley, form_inverse, membership_residual};
use qhi::reversibility::{
    anti_involution_residual, four_involution_factorization, involution_residual, projective_reverser,
    reversal_residual, reverser_spn, reverser_spn1, strongly_reversible_spn, strongly_reversible_spn1,
};
use qhi::{Error, FormContext, GroupElement, Kind, QMatrix, Quaternion};

const TOL: f64 = 1e-9;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Kinds and sizes exercised for `Sp(n,1)`, alternating the two hyperbolic forms.
fn hyperbolic_recipes(seeds: u64) -> Vec<ElementRecipe> {
    let kinds = [
        Kind::Elliptic,
        Kind::Hyperbolic,
        Kind::Vertical,
        Kind::NonVertical,
        Kind::NonUnipotent2,
        Kind::NonUnipotent3,
    ];
    let mut out = Vec::new();
    for kind in kinds {
        for n in 1..=4 {
            if kind.unipotent_degree() == 3 && n < 2 {
                continue;
            }
            for seed in 0..seeds {
                let ctx = match (kind, seed % 2) {
                    (Kind::Elliptic, 1) => FormContext::Siegel,
                    (_, 1) => FormContext::Ball,
                    _ if kind == Kind::Elliptic => FormContext::Ball,
                    _ => FormContext::Siegel,
                };
                out.push(ElementRecipe::new(kind, n, 1000 * n as u64 + seed).with_context(ctx));
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let recipes = hyperbolic_recipes(50);
    let (mut worst_rev, mut worst_mem) = (0.0f64, 0.0f64);
    for r in &recipes {
        let g = random_element(r).map_err(|e| format!("{r:?}: {e}"))?.element;
        let h = reverser_spn1(&g, TOL).map_err(|e| format!("{:?} n={} seed={}: {e}", r.kind, r.n, r.seed))?;
        let rev = reversal_residual(&g.mat, &h.mat);
        let mem = membership_residual(&h.mat, g.ctx).unwrap();
        ensure(rev < 1e-8 && mem < 1e-9, || {
            format!("{:?} n={} seed={}: reversal {rev:e}, membership {mem:e}", r.kind, r.n, r.seed)
        })?;
        worst_rev = worst_rev.max(rev);
        worst_mem = worst_mem.max(mem);
    }
    Ok(format!(
        "{} elements, max reversal {worst_rev:.1e}, max membership {worst_mem:.1e}",
        recipes.len()
    ))
}

fn criterion_2() -> Outcome {
    let (mut worst_rev, mut worst_sq) = (0.0f64, 0.0f64);
    for seed in 0..200u64 {
        let n = 1 + (seed % 5) as usize;
        let g = random_element(&ElementRecipe::compact(n, seed)).map_err(|e| e.to_string())?.element;
        let h = reverser_spn(&g, TOL).map_err(|e| format!("n={n} seed={seed}: {e}"))?;
        let rev = reversal_residual(&g.mat, &h.mat);
        let sq = anti_involution_residual(&h.mat);
        ensure(rev < 1e-8 && sq < 1e-10, || format!("n={n} seed={seed}: reversal {rev:e}, h²+I {sq:e}"))?;
        worst_rev = worst_rev.max(rev);
        worst_sq = worst_sq.max(sq);
    }
    Ok(format!("200 elements, max reversal {worst_rev:.1e}, max ‖h²+I‖ {worst_sq:.1e}"))
}

/// Diagonal whose non-real classes all have even multiplicity.
fn paired_classes(n: usize, rng: &mut ChaCha8Rng) -> Vec<[f64; 2]> {
    let mut d = Vec::with_capacity(n);
    while d.len() < n {
        if n - d.len() >= 2 && rng.gen_bool(0.7) {
            let t: f64 = rng.gen_range(0.2..PI - 0.2);
            d.push([t.cos(), t.sin()]);
            d.push([t.cos(), t.sin()]);
        } else {
            d.push(if rng.gen_bool(0.5) { [1.0, 0.0] } else { [-1.0, 0.0] });
        }
    }
    d
}

fn compact_with_classes(classes: Vec<[f64; 2]>, seed: u64) -> qhi::Result<GroupElement> {
    let n = classes.len();
    let params = RecipeParams {
        classes: Some(classes),
        ..Default::default()
    };
    let recipe = ElementRecipe::compact(n, seed).with_params(params).with_conjugation(true);
    Ok(random_element(&recipe)?.element)
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_sq, mut worst_rev) = (0.0f64, 0.0f64);
    for seed in 0..100u64 {
        let n = 1 + (seed % 5) as usize;
        let g = compact_with_classes(paired_classes(n, &mut rng), seed).map_err(|e| e.to_string())?;
        let v = strongly_reversible_spn(&g, TOL).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(v.strongly_reversible, || format!("seed {seed}: verdict false ({})", v.criterion.detail))?;
        let w = v.witness.unwrap();
        let sq = involution_residual(&w.mat);
        let rev = reversal_residual(&g.mat, &w.mat);
        ensure(sq < 1e-10 && rev < 1e-8, || format!("seed {seed}: w²-I {sq:e}, reversal {rev:e}"))?;
        worst_sq = worst_sq.max(sq);
        worst_rev = worst_rev.max(rev);
    }
    let sp = |d: &[Complex64]| GroupElement::new(QMatrix::complex_diag(d), FormContext::Positive, TOL).unwrap();
    for d in [vec![c(0.0, 1.0)], vec![c(0.0, 1.0), Complex64::from_polar(1.0, 1.0)]] {
        let v = strongly_reversible_spn(&sp(&d), TOL).map_err(|e| e.to_string())?;
        ensure(!v.strongly_reversible && v.witness.is_none(), || format!("diag{d:?} judged strongly reversible"))?;
    }
    Ok(format!(
        "100 positive cases, max ‖w²-I‖ {worst_sq:.1e}, max reversal {worst_rev:.1e}; 2 negative fixed points"
    ))
}

fn criterion_4() -> Outcome {
    let (mut worst_sq, mut worst_prod) = (0.0f64, 0.0f64);
    for seed in 0..100u64 {
        let n = 2 * (1 + (seed % 3) as usize);
        let g = random_element(&ElementRecipe::compact(n, seed)).map_err(|e| e.to_string())?.element;
        let fs = four_involution_factorization(&g, TOL).map_err(|e| format!("n={n} seed={seed}: {e}"))?;
        ensure(fs.len() == 4, || format!("{} factors", fs.len()))?;
        let prod = fs.iter().fold(QMatrix::identity(n), |acc, f| &acc * &f.mat).dist(&g.mat);
        let sq = fs.iter().map(|f| involution_residual(&f.mat)).fold(0.0, f64::max);
        let mem = fs
            .iter()
            .map(|f| membership_residual(&f.mat, FormContext::Positive).unwrap())
            .fold(0.0, f64::max);
        ensure(sq < 1e-9 && prod < 1e-8 && mem < 1e-9, || {
            format!("n={n} seed={seed}: square {sq:e}, product {prod:e}, membership {mem:e}")
        })?;
        worst_sq = worst_sq.max(sq);
        worst_prod = worst_prod.max(prod);
    }
    for n in [1, 3, 5] {
        let g = random_element(&ElementRecipe::compact(n, 7)).unwrap().element;
        match four_involution_factorization(&g, TOL) {
            Err(Error::OddDimension { n: m }) if m == n => {}
            other => return Err(format!("odd n={n}: expected OddDimension, got {other:?}")),
        }
    }
    Ok(format!(
        "100 even cases, max ‖f²-I‖ {worst_sq:.1e}, max product {worst_prod:.1e}; odd n gives OddDimension"
    ))
}

fn criterion_5() -> Outcome {
    let siegel = |m: QMatrix| GroupElement::new(m, FormContext::Siegel, TOL).unwrap();
    let ball = |m: QMatrix| GroupElement::new(m, FormContext::Ball, TOL).unwrap();
    let lam = Complex64::from_polar(1.0, 1.0);
    let cases: Vec<(&str, GroupElement, bool, u8)> = vec![
        ("u_V", siegel(vertical_block(c(1.0, 0.0), Quaternion::I)), false, 3),
        (
            "u_NV",
            siegel(non_vertical_block(c(1.0, 0.0), Quaternion::real(0.5), Quaternion::ONE)),
            true,
            4,
        ),
        ("diag(2, 1/2)", siegel(hyperbolic_block(2.0, 0.0)), true, 1),
        ("diag(2e^{iπ/4}, e^{iπ/4}/2)", siegel(hyperbolic_block(2.0, PI / 4.0)), false, 1),
        ("diag(-1, λ, λ)", ball(QMatrix::complex_diag(&[c(-1.0, 0.0), lam, lam])), true, 2),
        (
            "diag(i, 1, 1)",
            ball(QMatrix::complex_diag(&[c(0.0, 1.0), c(1.0, 0.0), c(1.0, 0.0)])),
            false,
            2,
        ),
    ];
    for (name, g, expected, clause) in &cases {
        let v = strongly_reversible_spn1(g, TOL).map_err(|e| format!("{name}: {e}"))?;
        ensure(v.strongly_reversible == *expected && v.criterion.clause == *clause, || {
            format!("{name}: verdict {} clause {}", v.strongly_reversible, v.criterion.clause)
        })?;
        if let Some(w) = &v.witness {
            let sq = involution_residual(&w.mat);
            let rev = reversal_residual(&g.mat, &w.mat);
            let mem = membership_residual(&w.mat, g.ctx).unwrap();
            ensure(sq < 1e-10 && rev < 1e-8 && mem < 1e-9, || {
                format!("{name}: witness square {sq:e}, reversal {rev:e}, membership {mem:e}")
            })?;
        }
        ensure(v.witness.is_some() == *expected, || format!("{name}: witness presence"))?;
    }
    let w = strongly_reversible_spn1(&cases[2].1, TOL).unwrap().witness.unwrap();
    let mut swap = QMatrix::zeros(2, 2);
    swap[(0, 1)] = Quaternion::ONE;
    swap[(1, 0)] = Quaternion::ONE;
    ensure(w.mat.dist(&swap) < 1e-12, || format!("diag(2, 1/2) witness is not ((0,1),(1,0)): {:?}", w.mat))?;
    Ok(format!("{} fixed cases", cases.len()))
}

fn criterion_6() -> Outcome {
    let recipes = hyperbolic_recipes(50);
    let (mut worst_sq, mut worst_rev) = (0.0f64, 0.0f64);
    for r in &recipes {
        let g = random_element(r).map_err(|e| e.to_string())?.element;
        let h = projective_reverser(&g, TOL).map_err(|e| format!("{:?} n={} seed={}: {e}", r.kind, r.n, r.seed))?;
        let sq = involution_residual(&h.mat).min(anti_involution_residual(&h.mat));
        let rev = reversal_residual(&g.mat, &h.mat);
        ensure(sq < 1e-10 && rev < 1e-8, || {
            format!("{:?} n={} seed={}: h²∓I {sq:e}, reversal {rev:e}", r.kind, r.n, r.seed)
        })?;
        worst_sq = worst_sq.max(sq);
        worst_rev = worst_rev.max(rev);
    }
    Ok(format!(
        "{} elements, max ‖h²∓I‖ {worst_sq:.1e}, max reversal {worst_rev:.1e}",
        recipes.len()
    ))
}

/// Complex adjoint built entry by entry: `a + b j ↦ ((a, b), (-b̄, ā))`.
fn adjoint_oracle(m: &QMatrix) -> DMatrix<Complex64> {
    let (r, k) = (m.rows(), m.cols());
    let mut out = DMatrix::zeros(2 * r, 2 * k);
    for p in 0..r {
        for q in 0..k {
            let e = m[(p, q)];
            let a = c(e.w, e.x);
            let b = c(e.y, e.z);
            out[(p, q)] = a;
            out[(p, q + k)] = b;
            out[(p + r, q)] = -b.conj();
            out[(p + r, q + k)] = a.conj();
        }
    }
    out
}

fn random_qmatrix(n: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    QMatrix::from_fn(n, n, |_, _| {
        Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    })
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_hom = 0.0f64;
    for k in 0..100 {
        let n = 1 + k % 4;
        let (a, b) = (random_qmatrix(n, &mut rng), random_qmatrix(n, &mut rng));
        let lhs = adjoint_oracle(&(&a * &b));
        let rhs = adjoint_oracle(&a) * adjoint_oracle(&b);
        let hom = (&lhs - &rhs).norm();
        let lib = (a.complex_adjoint() - adjoint_oracle(&a)).norm();
        ensure(hom < 1e-10 && lib < 1e-15, || format!("pair {k}: homomorphism {hom:e}, library vs oracle {lib:e}"))?;
        worst_hom = worst_hom.max(hom);
    }
    let mut worst_cayley = 0.0f64;
    for dim in 2..=5 {
        let (p, _) = cayley(dim).unwrap();
        let mut j = QMatrix::identity(dim);
        j[(0, 0)] = Quaternion::real(-1.0);
        let mut jhat = QMatrix::identity(dim);
        jhat[(0, 0)] = Quaternion::ZERO;
        jhat[(1, 1)] = Quaternion::ZERO;
        jhat[(0, 1)] = Quaternion::real(-1.0);
        jhat[(1, 0)] = Quaternion::real(-1.0);
        let d = (&(&p.star() * &j) * &p).dist(&jhat);
        ensure(d <= 1e-15, || format!("dim {dim}: ᵗP J P - Ĵ = {d:e}"))?;
        worst_cayley = worst_cayley.max(d);
    }
    let mut members = 0;
    for k in 0..200u64 {
        let n = 1 + (k % 4) as usize;
        let mut m = random_compact_matrix(n, &mut rng);
        if k % 2 == 1 {
            let scale = [1e-3, 1e-1, 1.0][(k / 2 % 3) as usize];
            m = m.add(&random_qmatrix(n, &mut rng).map(|q| q.scale(scale)));
        }
        let quaternionic = membership_residual(&m, FormContext::Positive).unwrap() < TOL;
        let cm = adjoint_oracle(&m);
        let id = DMatrix::<Complex64>::identity(2 * n, 2 * n);
        let unitary = (cm.adjoint() * &cm - &id).norm() < TOL;
        let mut omega = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
        for p in 0..n {
            omega[(p, p + n)] = c(1.0, 0.0);
            omega[(p + n, p)] = c(-1.0, 0.0);
        }
        let symplectic = (cm.transpose() * &omega * &cm - &omega).norm() < TOL;
        ensure(quaternionic == unitary && unitary == symplectic, || {
            format!("matrix {k}: Sp(n) {quaternionic}, unitary {unitary}, symplectic {symplectic}")
        })?;
        members += quaternionic as usize;
    }
    ensure(members == 100, || format!("{members} members among 200"))?;
    Ok(format!(
        "max homomorphism {worst_hom:.1e}; max ‖ᵗPJP-Ĵ‖ {worst_cayley:.1e}; 200/200 agree (100 members)"
    ))
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    for k in 0..1000u64 {
        let kind = Kind::ALL[(k % Kind::ALL.len() as u64) as usize];
        let n = 1 + ((k / 7) % 4) as usize;
        let n = if kind.unipotent_degree() == 3 { n.max(2) } else { n };
        let recipe = ElementRecipe::new(kind, n, k);
        let g = random_element(&recipe).map_err(|e| format!("{recipe:?}: {e}"))?.element;
        let class = classify(&g, TOL).map_err(|e| format!("{kind:?} n={n} seed={k}: {e}"))?;
        ensure(class.kind == kind, || format!("{kind:?} n={n} seed={k}: classified as {:?}", class.kind))?;
        count += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bases = 0;
    for kind in Kind::ALL {
        for ctx in [FormContext::Ball, FormContext::Siegel] {
            let g = random_element(&ElementRecipe::new(kind, 3, 42).with_context(ctx)).unwrap().element;
            let base = conjugacy_invariant(&g, TOL).map_err(|e| e.to_string())?;
            for t in 0..50 {
                let x = random_group_matrix(ctx, g.dim(), &mut rng);
                let conj = &(&x * &g.mat) * &form_inverse(&x, ctx);
                let h = GroupElement::new(conj, ctx, TOL).map_err(|e| e.to_string())?;
                let inv = conjugacy_invariant(&h, TOL).map_err(|e| format!("{kind:?} conjugate {t}: {e}"))?;
                ensure(inv.approx_eq(&base, 1e-6), || format!("{kind:?} {ctx:?} conjugate {t}: invariant changed"))?;
            }
            bases += 1;
        }
    }
    let ball = |d: &[Complex64]| GroupElement::new(QMatrix::complex_diag(d), FormContext::Ball, TOL).unwrap();
    let siegel = |m: QMatrix| GroupElement::new(m, FormContext::Siegel, TOL).unwrap();
    let pairs = [
        (
            ball(&[c(0.0, 1.0), c(1.0, 0.0), c(1.0, 0.0)]),
            ball(&[c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]),
        ),
        (
            siegel(vertical_block(c(1.0, 0.0), Quaternion::I).direct_sum(&QMatrix::identity(1))),
            siegel(non_vertical_block(c(1.0, 0.0), Quaternion::real(0.5), Quaternion::ONE)),
        ),
    ];
    for (k, (a, b)) in pairs.iter().enumerate() {
        let (ia, ib) = (conjugacy_invariant(a, TOL).unwrap(), conjugacy_invariant(b, TOL).unwrap());
        ensure(!ia.approx_eq(&ib, 1e-6), || format!("distinguishing pair {k} has equal invariants"))?;
    }
    Ok(format!(
        "{count} recipes classified correctly; {bases} bases x 50 conjugates stable; {} pairs distinguished",
        pairs.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("universal reversibility in Sp(n,1)", criterion_1),
        ("Sp(n) reversers square to -I", criterion_2),
        ("Sp(n) strong reversibility criterion", criterion_3),
        ("four-involution factorization of Sp(2m)", criterion_4),
        ("Sp(n,1) strong reversibility fixed cases", criterion_5),
        ("projective reversers square to ±I", criterion_6),
        ("embedding and form identities", criterion_7),
        ("classification soundness", criterion_8),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.1}s]", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {detail} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!("acceptance: {}/8 criteria passed", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
