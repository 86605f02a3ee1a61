use multinet::circular::is_circular_net;
use multinet::net::PointNet;
use multinet::qnets::{is_multi_q_net, is_q_net};
use multinet::samples::{self, Torus};
use multinet::subdivision::{adapted_q_patch, subdivide_circular, subdivide_q, SeedPolicy};
use multinet::Exec;
use proptest::prelude::*;
use rand::Rng;

fn stride_exact(coarse: &PointNet, fine: &PointNet, su: usize, sv: usize) -> bool {
    let (nu, nv) = coarse.dims();
    (0..nu).all(|i| (0..nv).all(|j| coarse.at(i, j) == fine.at(su * i, sv * j)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn q_rounds_keep_vertices_and_planarity(seed in any::<u64>(), n_u in 1usize..4, n_v in 1usize..4) {
        let net = samples::random_q_net(&mut samples::rng(seed), 3, 4).unwrap();
        let one = subdivide_q(&net, n_u, n_v, 1, &SeedPolicy::Uniform, Exec::default()).unwrap();
        let two = subdivide_q(&net, n_u, n_v, 2, &SeedPolicy::Uniform, Exec::Sequential).unwrap();
        prop_assert_eq!(one.dims(), (2 * n_u + 1, 3 * n_v + 1));
        prop_assert!(stride_exact(&net, &one, n_u, n_v));
        prop_assert!(stride_exact(&one, &two, n_u, n_v));
        prop_assert!(is_q_net(&one) && is_q_net(&two));
    }

    #[test]
    fn patches_ignore_homogeneous_scaling(seed in any::<u64>(), n in 2usize..5, m in 2usize..5) {
        let net = samples::random_q_net(&mut samples::rng(seed), 2, 2).unwrap();
        let fine = subdivide_q(&net, n, m, 1, &SeedPolicy::Uniform, Exec::Sequential).unwrap();
        let row = |l: usize| (0..=n).map(|k| fine.at(k, l)).collect::<Vec<_>>();
        let col = |k: usize| (0..=m).map(|l| fine.at(k, l)).collect::<Vec<_>>();
        let quad = net.quad(0, 0);
        let patch = adapted_q_patch(&quad, &row(0), &row(m), &col(0), &col(n)).unwrap();
        prop_assert!(is_multi_q_net(&patch));

        let mut rng = samples::rng(seed ^ 7);
        let mut scale = |v: Vec<_>| -> Vec<_> {
            v.into_iter().map(|p| p * rng.gen_range(0.2..5.0) * if rng.gen() { 1.0 } else { -1.0 }).collect()
        };
        let (p0, p1, q0, q1) = (scale(row(0)), scale(row(m)), scale(col(0)), scale(col(n)));
        let scaled = adapted_q_patch(&quad, &p0, &p1, &q0, &q1).unwrap();
        for (a, b) in patch.grid().data().iter().zip(scaled.grid().data()) {
            prop_assert!(a.proj_eq(b));
        }
    }

    #[test]
    fn refinement_composes(seed in any::<u64>()) {
        let net = samples::random_q_net(&mut samples::rng(seed), 3, 3).unwrap();
        let twice = subdivide_q(&net, 2, 2, 2, &SeedPolicy::Uniform, Exec::Sequential).unwrap();
        let once = subdivide_q(&net, 4, 4, 1, &SeedPolicy::Uniform, Exec::Sequential).unwrap();
        prop_assert_eq!(twice.dims(), once.dims());
        for (a, b) in twice.grid().data().iter().zip(once.grid().data()) {
            prop_assert!(a.proj_distance(b) < 1e-9, "{}", a.proj_distance(b));
        }
    }

    #[test]
    fn torus_patches_join_smoothly(
        big in 1.5f64..3.0,
        small in 0.3f64..0.9,
        u0 in 0.0f64..6.0,
        v0 in 0.0f64..6.0,
        du in 0.2f64..0.5,
        dv in 0.2f64..0.6,
    ) {
        let torus = Torus { big, small };
        let us = [u0, u0 + du, u0 + 2.0 * du];
        let vs = [v0, v0 + dv, v0 + 1.7 * dv];
        let (net, seeds) = torus.net(&us, &vs).unwrap();
        let out = subdivide_circular(&net, 2, 3, 1, &seeds, Exec::default()).unwrap();
        prop_assert_eq!(out.net.dims(), (5, 7));
        prop_assert!(is_circular_net(&out.net));
        prop_assert!(out.max_joint_angle < 1e-6, "joint {}", out.max_joint_angle);
        for p in out.net.grid().data() {
            prop_assert!(torus.residual(&p.finite().unwrap()) < 1e-7);
        }
    }
}
