//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Checks recompute what they can from raw matrices
//! instead of trusting the library's own reports.

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use orthocartan::cartan::{
    family_orthogonal_cartan, generic_element, standard_cartan, verify_cartan, verify_orthogonal,
};
use orthocartan::coxeter::{
    cartan_in_bracket_image, coxeter_fixed_point_check, coxeter_lift_su, regular_strengthening_report,
    restricted_action, strengthen_to_regular,
};
use orthocartan::descent::{
    descend_to_complement, kostant_projection_check, one_and_half_span, root_space_decomposition, span_report,
    GotoSolver, Strategy,
};
use orthocartan::liealg::{symplectic_j, Algebra, AlgebraDescriptor, Family};
use orthocartan::numkernel::{
    commutator, frobenius, identity, mat_exp, numerical_rank, DenseMatrix, RealMatrix, ONE,
};
use orthocartan_cli::{run, Cli};

type Outcome = Result<String, String>;

fn sizes() -> Vec<(Family, usize)> {
    let mut v: Vec<_> = (2..=8).map(|n| (Family::Su, n)).collect();
    v.extend((1..=4).map(|n| (Family::Sp, n)));
    v.extend((3..=10).map(|n| (Family::So, n)));
    v
}

fn alg(f: Family, n: usize) -> Algebra {
    Algebra::new(AlgebraDescriptor::new(f, n).unwrap()).unwrap()
}

fn expected_rank(f: Family, n: usize) -> usize {
    match f {
        Family::Su => n - 1,
        Family::Sp => n,
        Family::So => n / 2,
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn laplace_det(m: &[Vec<f64>]) -> f64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<f64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][j] * laplace_det(&minor)
        })
        .sum()
}

/// Residual of `g` being in the compact group of `f`, from the defining equations.
fn group_residual(f: Family, n: usize, g: &DenseMatrix) -> f64 {
    let size = g.nrows();
    let unitary = frobenius(&(g.adjoint() * g - identity(size)));
    unitary
        + match f {
            Family::Su => (g.determinant() - ONE).norm(),
            Family::So => g.iter().map(|z| z.im.abs()).sum::<f64>() + (g.determinant() - ONE).norm(),
            Family::Sp => {
                let j = symplectic_j(n);
                frobenius(&(g.transpose() * &j * g - j))
            }
        }
}

fn c1_orthogonal_pairs() -> Outcome {
    let mut worst = 0.0_f64;
    for (f, n) in sizes() {
        let a = alg(f, n);
        let c = standard_cartan(&a).unwrap();
        let p = family_orthogonal_cartan(&a).map_err(|e| format!("{f}({n}): {e}"))?;
        let r = verify_cartan(&a, &p).unwrap();
        ensure(p.dim() == expected_rank(f, n), || format!("{f}({n}): dim {}", p.dim()))?;
        // abelian, recomputed from the generators
        let els = p.elements(&a);
        let mut comm = 0.0_f64;
        for x in &els {
            for y in &els {
                comm = comm.max(frobenius(&commutator(x.matrix(), y.matrix())));
            }
        }
        let orth = verify_orthogonal(&a, &c, &p).unwrap();
        worst = worst.max(comm).max(r.self_centralizing_residual).max(orth);
        ensure(comm < 1e-8 && r.self_centralizing_residual < 1e-8 && orth < 1e-8 && r.self_centralizing, || {
            format!("{f}({n}): comm {comm:.2e} self-centr {:.2e} orth {orth:.2e}", r.self_centralizing_residual)
        })?;
    }
    Ok(format!("23 algebras, worst residual {worst:.2e}"))
}

fn c2_coxeter_lifts() -> Outcome {
    let mut worst = 0.0_f64;
    for m in 2..=8 {
        let a = alg(Family::Su, m);
        let lift = coxeter_lift_su(&a).unwrap();
        let exp_n = frobenius(&(mat_exp(lift.big_n.matrix()).unwrap() - &lift.n_mat));
        let ginv = lift.g_mat.clone().try_inverse().unwrap();
        let gdg = frobenius(&(&lift.g_mat * &lift.d * &ginv - &lift.n_mat));
        let exp_l = frobenius(&(mat_exp(lift.lambda.matrix()).unwrap() - &lift.d));
        worst = worst.max(exp_n).max(gdg).max(exp_l);
        ensure(exp_n < 1e-9 && gdg < 1e-9 && exp_l < 1e-9, || {
            format!("m={m}: exp(N) {exp_n:.2e} gDg⁻¹ {gdg:.2e} exp(Λ) {exp_l:.2e}")
        })?;
    }
    Ok(format!("m=2..8, worst {worst:.2e}"))
}

fn c3_no_fixed_points() -> Outcome {
    let mut dets = Vec::new();
    for m in 2..=8 {
        let a = alg(Family::Su, m);
        let c = standard_cartan(&a).unwrap();
        let lift = coxeter_lift_su(&a).unwrap();
        let (action, _) = restricted_action(&a, &lift.n_mat, &c);
        let r = action.nrows();
        let rows: Vec<Vec<f64>> = (0..r)
            .map(|i| (0..r).map(|j| action[(i, j)] - if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let det = laplace_det(&rows).abs();
        let lib = coxeter_fixed_point_check(&a, &lift, &c).unwrap().residuals["abs_det"];
        ensure((det - lib).abs() < 1e-9, || format!("m={m}: oracle {det} vs library {lib}"))?;
        ensure(det > 0.5, || format!("m={m}: |det| = {det}"))?;
        if m <= 3 {
            // Cartan matrix of type A_{m-1}
            let k = m - 1;
            let cartan: Vec<Vec<f64>> = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| match i.abs_diff(j) {
                            0 => 2.0,
                            1 => -1.0,
                            _ => 0.0,
                        })
                        .collect()
                })
                .collect();
            let target = laplace_det(&cartan);
            ensure((det - target).abs() < 1e-6, || format!("m={m}: {det} vs {target}"))?;
        }
        dets.push(format!("{det:.6}"));
    }
    Ok(format!("|det| for m=2..8: {}", dets.join(" ")))
}

fn c4_bracket_image() -> Outcome {
    let mut worst = 0.0_f64;
    for m in 2..=8 {
        let a = alg(Family::Su, m);
        let c = standard_cartan(&a).unwrap();
        let lift = coxeter_lift_su(&a).unwrap();
        let img = cartan_in_bracket_image(&a, &c, &lift.big_n).unwrap();
        let res = img.report.residuals["max_residual"];
        // witnesses: [N, w_i] reproduces each Cartan basis vector
        for (h, w) in c.elements(&a).iter().zip(&img.witnesses) {
            let back = commutator(lift.big_n.matrix(), w.matrix());
            let err = a.norm(&a.element(back).unwrap().sub(h).unwrap());
            ensure(err < 1e-8, || format!("m={m}: witness residual {err:.2e}"))?;
        }
        let reg = strengthen_to_regular(&a, &lift.big_n, 0).unwrap();
        let s = regular_strengthening_report(&a, &lift.big_n, &reg, &c).unwrap();
        let (ci, ii) = (s.residuals["cartan_in_image"], s.residuals["image_containment"]);
        worst = worst.max(res).max(ci).max(ii);
        ensure(res < 1e-8 && ci < 1e-8 && ii < 1e-8 && s.verdicts["regular"], || {
            format!("m={m}: C⊆[N,L] {res:.2e}, C⊆[a,L] {ci:.2e}, image {ii:.2e}")
        })?;
    }
    Ok(format!("m=2..8, worst {worst:.2e}"))
}

fn c5_complement_is_image() -> Outcome {
    let mut worst = 0.0_f64;
    for (f, n) in sizes() {
        let a = alg(f, n);
        for seed in 0..20 {
            let x = a.random_element(seed);
            let z = a.centralizer(&x).unwrap().orthogonal_complement();
            let d = z.distance(&a.ad_image(&x).unwrap()).unwrap();
            worst = worst.max(d);
            ensure(d < 1e-8, || format!("{f}({n}) seed {seed}: {d:.2e}"))?;
        }
    }
    Ok(format!("20 elements x 23 algebras, worst {worst:.2e}"))
}

fn c6_root_relations() -> Outcome {
    let mut worst = 0.0_f64;
    for (f, n) in sizes() {
        let a = alg(f, n);
        let c = standard_cartan(&a).unwrap();
        let roots = root_space_decomposition(&a, &c).unwrap();
        let rel = roots.relations(&a).unwrap();
        // [h, u] = α(h) v and [h, v] = −α(h) u, recomputed for one generic h
        let h = generic_element(&a, &c, 17);
        let hc = c.space.coordinates(&a.coords(&h).unwrap());
        for r in &roots.roots {
            let ah = r.alpha.dot(&hc);
            let hu = commutator(h.matrix(), r.u.matrix()) - r.v.matrix() * (ONE * ah);
            let hv = commutator(h.matrix(), r.v.matrix()) + r.u.matrix() * (ONE * ah);
            let e = frobenius(&hu).max(frobenius(&hv));
            worst = worst.max(e);
            ensure(e < 1e-8, || format!("{f}({n}): rotation relation {e:.2e}"))?;
        }
        worst = worst.max(rel.max_residual());
        ensure(rel.holds(1e-8), || format!("{f}({n}): {rel:?}"))?;
        ensure(roots.roots.len() == (a.dim() - a.rank()) / 2, || format!("{f}({n}): root count"))?;
    }
    Ok(format!("23 algebras, worst {worst:.2e}"))
}

fn c7_descent() -> Outcome {
    let mut worst_step = 0.0_f64;
    let mut iters = 0;
    for (f, n) in sizes() {
        let a = alg(f, n);
        let c = standard_cartan(&a).unwrap();
        let roots = root_space_decomposition(&a, &c).unwrap();
        for seed in 0..50 {
            let x = a.random_element(seed);
            let (g, fin, trace) = descend_to_complement(&a, &roots, &x).map_err(|e| format!("{f}({n}) seed {seed}: {e}"))?;
            let scale = a.norm(&x).max(1.0);
            let proj = c.space.coordinates(&a.coords(&fin).unwrap()).norm();
            let moved = frobenius(&(&g * x.matrix() * g.adjoint() - fin.matrix()));
            let member = group_residual(f, n, &g);
            ensure(proj < 1e-8 * scale, || format!("{f}({n}) seed {seed}: ‖proj_C‖ {proj:.2e}"))?;
            ensure(moved < 1e-8 * scale, || format!("{f}({n}) seed {seed}: g x g⁻¹ off by {moved:.2e}"))?;
            ensure(member < 1e-8, || format!("{f}({n}) seed {seed}: membership {member:.2e}"))?;
            ensure(trace.iterations <= 10_000, || format!("{f}({n}): {} iterations", trace.iterations))?;
            for s in &trace.steps {
                ensure(s.after < s.before, || format!("{f}({n}) seed {seed}: step does not decrease"))?;
                worst_step = worst_step.max(s.decrement_residual());
                ensure(s.decrement_residual() < 1e-9, || {
                    format!("{f}({n}) seed {seed}: decrement off by {:.2e}", s.decrement_residual())
                })?;
            }
            iters += trace.iterations;
        }
    }
    Ok(format!("1150 descents, {iters} steps, worst decrement error {worst_step:.2e}"))
}

fn c8_factorization() -> Outcome {
    let mut worst = 0.0_f64;
    for (f, n) in sizes() {
        let a = alg(f, n);
        let mut solvers = vec![GotoSolver::new(&a, Strategy::Descent, 0).unwrap()];
        if f == Family::Su {
            solvers.push(GotoSolver::new(&a, Strategy::Coxeter, 0).unwrap());
        }
        for seed in 0..50 {
            let x = a.random_element(1_000 + seed);
            let scale = a.norm(&x).max(1.0);
            let mut valid = Vec::new();
            for s in &solvers {
                let ok = match s.factorize(&a, &x) {
                    Ok(w) => {
                        let back = commutator(w.a.matrix(), w.b.matrix());
                        let err = a.norm(&a.element(back).unwrap().sub(&x).unwrap()) / scale;
                        let ad = a.ad_matrix(&w.a).unwrap();
                        let regular = a.dim() - numerical_rank(&ad, 1e-9) == a.rank();
                        worst = worst.max(err);
                        err < 1e-7 && regular
                    }
                    Err(_) => false,
                };
                valid.push(ok);
            }
            ensure(valid[0], || format!("{f}({n}) seed {seed}: descent witness invalid"))?;
            ensure(valid.iter().all(|&v| v == valid[0]), || format!("{f}({n}) seed {seed}: strategies disagree"))?;
        }
    }
    Ok(format!("1150 witnesses (+350 coxeter), worst relative residual {worst:.2e}"))
}

fn c9_span() -> Outcome {
    let mut worst = 0.0_f64;
    for (f, n) in sizes() {
        let a = alg(f, n);
        for seed in 0..10 {
            let x = a.random_regular(seed).unwrap();
            let b = one_and_half_span(&a, &x, seed).map_err(|e| format!("{f}({n}): {e}"))?;
            let r = span_report(&a, &x, &b).unwrap();
            let inner = a.inner(&x, &b).unwrap().abs();
            let cross = r.residuals["centralizer_cross_inner"];
            // rank of [ad a | ad b] equals dim L
            let (ada, adb) = (a.ad_matrix(&x).unwrap(), a.ad_matrix(&b).unwrap());
            let d = a.dim();
            let both = RealMatrix::from_fn(d, 2 * d, |i, j| if j < d { ada[(i, j)] } else { adb[(i, j - d)] });
            let rank = numerical_rank(&both, 1e-9);
            worst = worst.max(inner).max(cross);
            ensure(inner < 1e-8 && cross < 1e-8 && rank == d && r.verdicts["spans"], || {
                format!("{f}({n}) seed {seed}: inner {inner:.2e} cross {cross:.2e} rank {rank}/{d}")
            })?;
        }
    }
    Ok(format!("230 regular elements, worst {worst:.2e}"))
}

fn c10_kostant() -> Outcome {
    let mut out = Vec::new();
    for n in [2, 3] {
        let a = alg(Family::Su, n);
        let c = standard_cartan(&a).unwrap();
        let x = generic_element(&a, &c, 5);
        let r = kostant_projection_check(&a, &x, 200, 0).unwrap();
        ensure(r.samples == 200 && r.max_distance < 1e-7 && r.zero_distance < 1e-7, || {
            format!("su({n}): {r:?}")
        })?;
        out.push(format!("su({n}) max {:.2e}", r.max_distance));
    }
    Ok(out.join(", "))
}

fn c11_determinism() -> Outcome {
    let certify = |args: &[&str]| {
        let mut full = vec!["orthocartan", "suite"];
        full.extend_from_slice(args);
        let cli = Cli::try_parse_from(full).unwrap();
        let mut cert = serde_json::to_value(run(&cli).certificate).unwrap();
        cert["timestamp"] = serde_json::Value::Null;
        serde_json::to_string(&cert).unwrap()
    };
    let runs: [&[&str]; 3] = [
        &["--family", "su", "--n", "2,3,4", "--seed", "7", "--jobs", "3"],
        &["--family", "so", "--n", "5,6", "--seed", "3"],
        &["--family", "sp", "--n", "1,2", "--seed", "11", "--jobs", "2"],
    ];
    for args in runs {
        let (first, second) = (certify(args), certify(args));
        ensure(first == second, || format!("suite {args:?} differs between runs"))?;
    }
    Ok("su 2,3,4 / so 5,6 / sp 1,2 certificates identical".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("orthogonal Cartan pairs", c1_orthogonal_pairs),
        ("Coxeter lifts", c2_coxeter_lifts),
        ("no fixed points on the Cartan", c3_no_fixed_points),
        ("Cartan inside the bracket image", c4_bracket_image),
        ("centralizer complement equals bracket image", c5_complement_is_image),
        ("root space relations", c6_root_relations),
        ("descent into the complement", c7_descent),
        ("bracket factorization", c8_factorization),
        ("orthogonal pair spans", c9_span),
        ("convexity sampling", c10_kostant),
        ("suite determinism", c11_determinism),
    ];
    let start = Instant::now();
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| {
                s.spawn(move || {
                    let t = Instant::now();
                    let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (out, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (out, secs))) in criteria.iter().zip(results).enumerate() {
        match out {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of 11 passed in {:.1}s", 11 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
