use orthocartan::cartan::standard_cartan;
use orthocartan::descent::{descend_to_complement, goto_factorize, root_space_decomposition, Strategy as Method};
use orthocartan::liealg::{Algebra, AlgebraDescriptor, Family};
use orthocartan::numkernel::{frobenius, mat_exp};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = (Family, usize)> {
    prop_oneof![
        (2usize..=5).prop_map(|n| (Family::Su, n)),
        (3usize..=7).prop_map(|n| (Family::So, n)),
        (1usize..=3).prop_map(|n| (Family::Sp, n)),
    ]
}

fn alg(f: Family, n: usize) -> Algebra {
    Algebra::new(AlgebraDescriptor::new(f, n).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jacobi_and_ad_invariance((f, n) in family(), seed in any::<u64>()) {
        let a = alg(f, n);
        let [x, y, z] = [0, 1, 2].map(|k| a.random_element(seed.wrapping_add(k)));
        let br = |p: &_, q: &_| a.bracket(p, q).unwrap();
        let jac = br(&x, &br(&y, &z)).add(&br(&y, &br(&z, &x))).unwrap().add(&br(&z, &br(&x, &y))).unwrap();
        prop_assert!(a.norm(&jac) < 1e-10 * (1.0 + a.norm(&x) * a.norm(&y) * a.norm(&z)));
        // <[x, y], z> = -<y, [x, z]>
        let lhs = a.inner(&br(&x, &y), &z).unwrap();
        let rhs = -a.inner(&y, &br(&x, &z)).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn conjugation_is_an_isometry((f, n) in family(), seed in any::<u64>()) {
        let a = alg(f, n);
        let x = a.random_element(seed);
        let g = mat_exp(a.random_element(seed ^ 0x55).matrix()).unwrap();
        prop_assert!(a.descriptor().group_membership_residual(&g) < 1e-10);
        let y = a.conjugate(&g, &x).unwrap();
        prop_assert!((a.norm(&y) - a.norm(&x)).abs() < 1e-10 * a.norm(&x).max(1.0));
    }

    #[test]
    fn descent_lands_orthogonal_to_the_cartan((f, n) in family(), seed in any::<u64>()) {
        let a = alg(f, n);
        let c = standard_cartan(&a).unwrap();
        let roots = root_space_decomposition(&a, &c).unwrap();
        let x = a.random_element(seed);
        let (g, fin, trace) = descend_to_complement(&a, &roots, &x).unwrap();
        let scale = a.norm(&x).max(1.0);
        prop_assert!(c.space.coordinates(&a.coords(&fin).unwrap()).norm() < 1e-8 * scale);
        prop_assert!(frobenius(&(&g * x.matrix() * g.adjoint() - fin.matrix())) < 1e-8 * scale);
        prop_assert!(trace.strictly_decreasing());
    }

    #[test]
    fn factorization_reconstructs((f, n) in family(), seed in any::<u64>()) {
        let a = alg(f, n);
        let x = a.random_element(seed).scale(3.0);
        let w = goto_factorize(&a, &x, Method::Descent, seed).unwrap();
        let back = a.bracket(&w.a, &w.b).unwrap();
        prop_assert!(a.norm(&back.sub(&x).unwrap()) < 1e-7 * a.norm(&x).max(1.0));
        prop_assert!(w.a_regular);
    }
}
