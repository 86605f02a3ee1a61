use multinet::projective::{
    meet_lines, moebius_drop, moebius_lift, span_rank, EPoint, HPoint, ProjLine, QuadricForm,
    RankTol, Vec3,
};
use proptest::prelude::*;

fn coords(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, dim)
}

fn form(k: usize) -> QuadricForm {
    match k % 3 {
        0 => QuadricForm::moebius(),
        1 => QuadricForm::lie(),
        _ => QuadricForm::pluecker(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reflection_is_an_involution(k in 0usize..3, n in coords(6), x in coords(6)) {
        let q = form(k);
        let dim = q.dim();
        let n = HPoint::new(&n[..dim]);
        let x = HPoint::new(&x[..dim]);
        prop_assume!(n.is_ok() && x.is_ok());
        let (n, x) = (n.unwrap(), x.unwrap());
        prop_assume!(q.eval(&n, &n).unwrap().abs() > 0.1 * n.dot(&n));
        let once = q.reflect(&n, &x).unwrap();
        let twice = q.reflect(&n, &once).unwrap();
        prop_assert!(twice.proj_eq(&x));
        let (before, after) = (q.eval(&x, &x).unwrap(), q.eval(&once, &once).unwrap());
        prop_assert!((before - after).abs() <= 1e-10 * (x.dot(&x) + once.dot(&once)));
    }

    #[test]
    fn rank_ignores_scaling(
        pts in prop::collection::vec(coords(4), 2..5),
        mix in coords(3),
        lambda in prop_oneof![1e-6f64..1e6, -1e6f64..-1e-6],
        which in 0usize..5,
    ) {
        let mut pts: Vec<HPoint> = pts.iter().filter_map(|c| HPoint::new(c).ok()).collect();
        prop_assume!(pts.len() >= 2);
        // add a dependent point so that deficient ranks are exercised too
        let dep = pts[0] * mix[0] + pts[1] * mix[1];
        if let Ok(d) = HPoint::new(dep.as_slice()) {
            pts.push(d);
        }
        let tol = RankTol::default();
        let r = span_rank(&pts, tol).unwrap();
        let k = which % pts.len();
        pts[k] = pts[k] * lambda;
        prop_assert_eq!(span_rank(&pts, tol).unwrap(), r);
    }

    #[test]
    fn meet_lies_on_both_lines(a in coords(4), b in coords(4), c in coords(4), w in coords(3)) {
        let pts: Vec<HPoint> = [a, b, c].iter().filter_map(|v| HPoint::new(v).ok()).collect();
        prop_assume!(pts.len() == 3);
        prop_assume!(span_rank(&pts, RankTol::default()).unwrap() == 3);
        let d = pts[0] * w[0] + pts[1] * w[1] + pts[2] * (w[2].abs() + 0.2);
        let l1 = ProjLine::new(pts[0], pts[1]).unwrap();
        let l2 = ProjLine::new(pts[2], HPoint::new(d.as_slice()).unwrap());
        prop_assume!(l2.is_ok());
        let l2 = l2.unwrap();
        let m = meet_lines(&l1, &l2).unwrap();
        let tol = RankTol::default();
        prop_assert_eq!(span_rank(&[m, l1.a, l1.b], tol).unwrap(), 2);
        prop_assert_eq!(span_rank(&[m, l2.a, l2.b], tol).unwrap(), 2);
    }

    #[test]
    fn drop_inverts_lift(x in -1e3f64..1e3, y in -1e3f64..1e3, z in -1e3f64..1e3, s in -12i32..0) {
        let scale = 10f64.powi(s / 4);
        let p = Vec3::new(x, y, z) * scale;
        prop_assume!(p.norm() <= 1e3);
        let back = moebius_drop(&moebius_lift(&EPoint::Finite(p))).unwrap();
        prop_assert!((back.finite().unwrap() - p).norm() <= 1e-10);
    }
}
