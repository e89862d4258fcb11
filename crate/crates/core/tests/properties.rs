use proptest::prelude::*;

use pdpaths::features::{moment_features, FeaturePath, Provenance};
use pdpaths::metrics::w1_partial;
use pdpaths::persistence::{cloud_diagrams, DiagramPoint, PersistenceDiagram};
use pdpaths::regression::grid_search_cv;
use pdpaths::linalg::Matrix;
use pdpaths::signature::{discrete_signature, one_variation, DEFAULT_TENSOR_BUDGET};
use pdpaths::swarm::{simulate_from, InitialState, IntegratorOptions, Point3, SwarmParams};

fn diagram(max_points: usize) -> impl Strategy<Value = PersistenceDiagram> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 0..=max_points).prop_map(|pts| {
        let points = pts.into_iter().map(|(b, d)| {
            let (lo, hi) = if b <= d { (b, d) } else { (d, b) };
            DiagramPoint::new(lo, (hi - lo).max(1e-6))
        });
        PersistenceDiagram::new(1, 2.0, points).unwrap()
    })
}

fn cloud(max_points: usize) -> impl Strategy<Value = Vec<Point3>> {
    prop::collection::vec(prop::array::uniform3(0.0f64..1.0), 1..=max_points)
}

fn pairs(d: &PersistenceDiagram) -> Vec<(u64, u64)> {
    let mut v: Vec<_> = d.points.iter().map(|p| (p.birth.to_bits(), p.lifetime.to_bits())).collect();
    v.sort_unstable();
    v
}

fn shift_birth(d: &PersistenceDiagram, delta: f64) -> PersistenceDiagram {
    let pts = d.points.iter().map(|p| DiagramPoint::new(p.birth + delta, p.lifetime));
    PersistenceDiagram::new(d.dim, d.bound + delta.abs(), pts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn w1_is_a_metric(a in diagram(5), b in diagram(5), c in diagram(5)) {
        let d = |x: &PersistenceDiagram, y: &PersistenceDiagram| w1_partial(x, y).unwrap().0;
        let (ab, ba, bc, ac) = (d(&a, &b), d(&b, &a), d(&b, &c), d(&a, &c));
        prop_assert!(d(&a, &a).abs() <= 1e-9);
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ba).abs() <= 1e-9);
        prop_assert!(ac <= ab + bc + 1e-9);
        if ab <= 1e-12 {
            prop_assert_eq!(pairs(&a), pairs(&b));
        }
    }

    #[test]
    fn w1_birth_shift_bound(a in diagram(4), b in diagram(4), delta in 0.0f64..0.5) {
        let base = w1_partial(&a, &b).unwrap().0;
        let moved = w1_partial(&shift_birth(&a, delta), &b).unwrap().0;
        prop_assert!((moved - base).abs() <= delta.abs() * a.len() as f64 + 1e-9);
        // Shifting both sides leaves the distance unchanged.
        let both = w1_partial(&shift_birth(&a, delta), &shift_birth(&b, delta)).unwrap().0;
        prop_assert!((both - base).abs() <= 1e-9);
    }

    #[test]
    fn diagrams_ignore_point_order(pts in cloud(7), seed in any::<u64>()) {
        let mut shuffled = pts.clone();
        let n = shuffled.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = cloud_diagrams(&pts, 2, 2.0, 2.0).unwrap();
        let b = cloud_diagrams(&shuffled, 2, 2.0, 2.0).unwrap();
        for k in 0..3 {
            prop_assert_eq!(pairs(&a[k]), pairs(&b[k]));
        }
    }

    #[test]
    fn diagrams_survive_rigid_motions(pts in cloud(7), angles in prop::array::uniform3(0.0f64..6.3), shift in prop::array::uniform3(-5.0f64..5.0)) {
        let [x, y, z] = angles;
        let rot = |p: Point3| -> Point3 {
            let (s, c) = x.sin_cos();
            let p = [p[0], c * p[1] - s * p[2], s * p[1] + c * p[2]];
            let (s, c) = y.sin_cos();
            let p = [c * p[0] + s * p[2], p[1], -s * p[0] + c * p[2]];
            let (s, c) = z.sin_cos();
            [c * p[0] - s * p[1] + shift[0], s * p[0] + c * p[1] + shift[1], p[2] + shift[2]]
        };
        let moved: Vec<Point3> = pts.iter().map(|&p| rot(p)).collect();
        let a = cloud_diagrams(&pts, 2, 2.0, 2.0).unwrap();
        let b = cloud_diagrams(&moved, 2, 2.0, 2.0).unwrap();
        for k in 0..3 {
            let (pa, pb) = (a[k].sorted_points(), b[k].sorted_points());
            prop_assert_eq!(pa.len(), pb.len());
            for (p, q) in pa.iter().zip(&pb) {
                prop_assert!((p.birth - q.birth).abs() <= 1e-9 && (p.lifetime - q.lifetime).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn raising_the_threshold_keeps_finite_pairs(pts in cloud(7), t in 0.1f64..1.0) {
        let low = cloud_diagrams(&pts, 1, t, t).unwrap();
        let high = cloud_diagrams(&pts, 1, 2.0 * t + 1.0, 2.0 * t + 1.0).unwrap();
        for k in 0..2 {
            for p in low[k].points.iter().filter(|p| p.death() < t) {
                prop_assert!(high[k].points.iter().any(|q| q.birth == p.birth && q.lifetime == p.lifetime));
            }
        }
    }

    #[test]
    fn moments_add_over_disjoint_union(a in diagram(5), b in diagram(5)) {
        let union = PersistenceDiagram::new(1, 2.0, a.points.iter().chain(&b.points).copied()).unwrap();
        let fu = moment_features(&union, 6).unwrap();
        let (fa, fb) = (moment_features(&a, 6).unwrap(), moment_features(&b, 6).unwrap());
        prop_assert_eq!(fu.coeffs[0], fa.coeffs[0] + fb.coeffs[0]);
        for ((u, x), y) in fu.coeffs.iter().zip(&fa.coeffs).zip(&fb.coeffs) {
            prop_assert!((u - (x + y)).abs() <= 1e-12 * (x.abs() + y.abs()).max(1.0));
        }
    }

    #[test]
    fn moments_separate_lattice_diagrams(
        a in prop::collection::vec((0u8..5, 1u8..5), 0..=4),
        b in prop::collection::vec((0u8..5, 1u8..5), 0..=4),
    ) {
        let build = |pts: &[(u8, u8)]| {
            PersistenceDiagram::new(1, 2.0, pts.iter().map(|&(x, y)| DiagramPoint::new(x as f64 / 4.0, y as f64 / 4.0))).unwrap()
        };
        let (x, y) = (build(&a), build(&b));
        let mut sa = a.clone();
        let mut sb = b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        prop_assume!(sa != sb);
        prop_assert_ne!(moment_features(&x, 8).unwrap().coeffs, moment_features(&y, 8).unwrap().coeffs);
    }

    #[test]
    fn cv_is_seeded(targets in prop::collection::vec(-1.0f64..1.0, 8), seed in any::<u64>()) {
        let n = targets.len();
        let gram = Matrix::from_fn(n, n, |i, j| (-((i as f64 - j as f64).powi(2)) / 8.0).exp());
        let lambdas = [0.1, 1.0, 10.0];
        let eps = [1e-3, 1e-1];
        let a = grid_search_cv(&gram, &targets, &lambdas, &eps, 4, seed).unwrap();
        let b = grid_search_cv(&gram, &targets, &lambdas, &eps, 4, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}

/// Signature of a smooth planar curve sampled at `n` points, against a fine
/// reference: the error falls at first order in the mesh and sits under the
/// `ell * e^ell * max segment variation` bound.
#[test]
fn signature_discretisation_is_first_order() {
    let curve = |n: usize| {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                vec![(3.0 * t).cos(), (2.0 * t).sin() * t]
            })
            .collect();
        FeaturePath::from_rows(&rows, Provenance::Other).unwrap()
    };
    let level = 3;
    let reference = discrete_signature(&curve(8193), level, DEFAULT_TENSOR_BUDGET).unwrap();
    let ell = one_variation(&curve(8193));
    let mut errors = Vec::new();
    for n in [17, 33, 65, 129] {
        let p = curve(n);
        let s = discrete_signature(&p, level, DEFAULT_TENSOR_BUDGET).unwrap();
        let err = s
            .levels
            .iter()
            .zip(&reference.levels)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)))
            .sum::<f64>()
            .sqrt();
        let max_seg = p.rows().zip(p.rows().skip(1)).map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()).fold(0.0, f64::max);
        assert!(err <= ell * ell.exp() * max_seg, "n = {n}: {err} above bound");
        errors.push(err);
    }
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((1.6..2.5).contains(&ratio), "error ratio {ratio} is not first order: {errors:?}");
    }
}

fn pair_state(r: f64) -> InitialState {
    InitialState {
        positions: vec![[0.0, 0.0, 0.0], [r, 0.2, 0.0]],
        velocities: vec![[0.3, 0.0, 0.1], [-0.2, 0.4, 0.0]],
    }
}

fn max_gap(a: &[Vec<Point3>], b: &[Vec<Point3>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .flat_map(|(p, q)| (0..3).map(move |k| (p[k] - q[k]).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn tighter_tolerance_shrinks_the_error() {
    let params = SwarmParams::nondimensional(0.8, 0.5);
    let run = |tol: f64| {
        let opts = IntegratorOptions { atol: tol, rtol: tol, ..IntegratorOptions::default() };
        simulate_from(params, &pair_state(1.0), 10.0, 41, 0, &opts).unwrap().positions
    };
    let reference = run(1e-13);
    let errors: Vec<f64> = [1e-5, 5e-6, 2.5e-6].iter().map(|&t| max_gap(&run(t), &reference)).collect();
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        // Per-step error control on a fifth order pair gives roughly tol^(5/6)
        // globally; halving the tolerance should shrink the error by 1.3 to 2.5.
        assert!((1.3..2.6).contains(&ratio), "ratios off: {errors:?}");
    }
}

#[test]
fn dimensional_and_rescaled_runs_agree() {
    let dimensional = SwarmParams {
        mass: 2.0,
        alpha: 0.7,
        beta: 0.4,
        c_r: 3.0,
        c_a: 1.5,
        l_r: 0.8,
        l_a: 2.0,
    };
    let (unit, length, time) = dimensional.nondimensionalize();
    assert_eq!(unit.strength_ratio(), 3.0 * time * time / (2.0 * length * length));
    let init = pair_state(1.5);
    let scaled = InitialState {
        positions: init.positions.iter().map(|p| p.map(|x| x / length)).collect(),
        velocities: init.velocities.iter().map(|v| v.map(|x| x * time / length)).collect(),
    };
    let t_end = 10.0;
    let opts = IntegratorOptions { atol: 1e-11, rtol: 1e-11, ..IntegratorOptions::default() };
    let a = simulate_from(dimensional, &init, t_end, 21, 0, &opts).unwrap();
    let b = simulate_from(unit, &scaled, t_end / time, 21, 0, &opts).unwrap();
    let back: Vec<Vec<Point3>> = b.positions.iter().map(|s| s.iter().map(|p| p.map(|x| x * length)).collect()).collect();
    assert!(max_gap(&a.positions, &back) < 1e-6);
}
