mod common;

use common::in_hull;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sc_core::{
    evaluate_path, induced_embedding, sc_upper_bound, CoverCertificate, Embedding, Error, Example, Planner, SearchConfig,
    Simplex, VertexId,
};

const TOL: f64 = 1e-9;

fn circle_certificate() -> CoverCertificate {
    let cfg = SearchConfig {
        b: 1,
        c_max: 16,
        max_pieces: 2,
        max_b: 1,
        ..SearchConfig::default()
    };
    sc_upper_bound(&Example::Circle.complex(), &cfg)
        .unwrap()
        .certificate()
        .unwrap()
        .clone()
}

const EDGES: [[usize; 2]; 3] = [[0, 1], [1, 2], [0, 2]];

fn circle_points() -> Vec<Vec<f64>> {
    let e = Example::Circle.embedding();
    (0..3).map(|v| e.point(VertexId::from(v)).to_vec()).collect()
}

fn on_edge(pts: &[Vec<f64>], edge: [usize; 2], t: f64) -> Vec<f64> {
    let (a, b) = (&pts[edge[0]], &pts[edge[1]]);
    a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect()
}

fn random_point(rng: &mut ChaCha8Rng, pts: &[Vec<f64>]) -> Vec<f64> {
    on_edge(pts, EDGES[rng.gen_range(0..3)], rng.gen_range(0.0..=1.0))
}

fn on_circle(p: &[f64], pts: &[Vec<f64>]) -> bool {
    EDGES
        .iter()
        .any(|e| in_hull(p, &[pts[e[0]].clone(), pts[e[1]].clone()], TOL))
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn random_pairs_give_contained_paths() {
    let cert = circle_certificate();
    let emb = Example::Circle.embedding();
    let planner = Planner::new(&cert, &emb).unwrap();
    let pts = circle_points();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let (x, y) = (random_point(&mut rng, &pts), random_point(&mut rng, &pts));
        let path = planner.plan(&x, &y).unwrap();
        assert!(dist(&evaluate_path(&path, 0.0).unwrap(), &x) <= TOL);
        assert!(dist(&evaluate_path(&path, 1.0).unwrap(), &y) <= TOL);
        assert_eq!(path.breakpoints.len(), cert.pieces[planner.locate(&x, &y).unwrap().piece].chain.len() + 3);
        for p in &path.breakpoints {
            assert!(on_circle(p, &pts), "breakpoint {p:?} off the circle");
        }
        let samples = path.samples(1000);
        assert_eq!(samples.len(), 1000);
        for (t, p) in samples {
            assert!(on_circle(&p, &pts), "sample at t = {t} is {p:?}");
        }
    }
}

#[test]
fn vertex_pairs_locate_at_vertices() {
    let cert = circle_certificate();
    let emb = Example::Circle.embedding();
    let planner = Planner::new(&cert, &emb).unwrap();
    let pts = circle_points();
    for u in 0..3 {
        for v in 0..3 {
            let loc = planner.locate(&pts[u], &pts[v]).unwrap();
            assert_eq!(loc.carrier.len(), 1);
            assert!((loc.weights[0] - 1.0).abs() <= TOL);
            if u == v {
                assert_eq!(loc.piece, 0, "diagonal pairs sit in the diagonal piece");
            }
        }
    }
}

#[test]
fn points_off_the_circle_are_rejected() {
    let cert = circle_certificate();
    let emb = Example::Circle.embedding();
    let planner = Planner::new(&cert, &emb).unwrap();
    let pts = circle_points();
    assert!(matches!(planner.locate(&[0.0, 0.0], &pts[0]), Err(Error::OutsideRealization)));
    assert!(matches!(planner.plan(&pts[1], &[5.0, 5.0]), Err(Error::OutsideRealization)));
    assert!(matches!(planner.locate(&[1.0], &pts[0]), Err(Error::DimensionMismatch { .. })));
}

/// Lipschitz constant of `a ↦ Σ w_i(a) p_i` on one carrier: the weights
/// move by at most `|Δa| / σ_min` of the carrier's edge matrix, and each
/// weight moves a breakpoint by at most the base diameter.
fn carrier_constant(top: &Embedding, carrier: &Simplex, base: &[Vec<f64>]) -> f64 {
    let vs = carrier.vertices();
    if vs.len() == 1 {
        return 0.0;
    }
    let origin = top.point(vs[0]);
    let a = DMatrix::from_fn(top.dim(), vs.len() - 1, |r, c| top.point(vs[c + 1])[r] - origin[r]);
    let sigma = a.singular_values().min();
    let diam = base
        .iter()
        .flat_map(|p| base.iter().map(move |q| dist(p, q)))
        .fold(0.0, f64::max);
    ((vs.len() - 1) as f64).sqrt() * diam / sigma
}

/// Inside one carrier the rule is affine in `(x, y)`: breakpoints move by at
/// most the carrier's constant times the input perturbation, and midpoints
/// map to midpoints.
#[test]
fn rule_is_locally_affine() {
    let cert = circle_certificate();
    let emb = Example::Circle.embedding();
    let planner = Planner::new(&cert, &emb).unwrap();
    let pts = circle_points();
    let top = induced_embedding(&cert.tower().unwrap(), &emb).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut compared = 0;
    for _ in 0..200 {
        let (ex, ey) = (EDGES[rng.gen_range(0..3)], EDGES[rng.gen_range(0..3)]);
        let (s, t) = (rng.gen_range(0.1..0.9), rng.gen_range(0.1..0.9));
        let eps = 1e-6;
        let base = (on_edge(&pts, ex, s), on_edge(&pts, ey, t));
        let near = (on_edge(&pts, ex, s + eps), on_edge(&pts, ey, t - eps));
        let mid = (on_edge(&pts, ex, s + eps / 2.0), on_edge(&pts, ey, t - eps / 2.0));
        let locs = [&base, &near, &mid].map(|(x, y)| planner.locate(x, y).unwrap());
        if locs.iter().any(|l| l.piece != locs[0].piece || l.carrier != locs[0].carrier) {
            continue;
        }
        let paths = [&base, &near, &mid].map(|(x, y)| planner.plan(x, y).unwrap());
        let input = (dist(&base.0, &near.0).powi(2) + dist(&base.1, &near.1).powi(2)).sqrt();
        let lipschitz = carrier_constant(&top, &locs[0].carrier, &pts);
        for ((a, b), m) in paths[0].breakpoints.iter().zip(&paths[1].breakpoints).zip(&paths[2].breakpoints) {
            assert!(dist(a, b) <= lipschitz * input + TOL);
            let halfway: Vec<f64> = a.iter().zip(b).map(|(p, q)| (p + q) / 2.0).collect();
            assert!(dist(&halfway, m) <= TOL);
        }
        compared += 1;
    }
    assert!(compared > 100);
}

#[test]
fn locate_is_deterministic() {
    let cert = circle_certificate();
    let emb = Example::Circle.embedding();
    let pts = circle_points();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let (x, y) = (random_point(&mut rng, &pts), random_point(&mut rng, &pts));
        let a = Planner::new(&cert, &emb).unwrap().locate(&x, &y).unwrap();
        let b = Planner::new(&cert, &emb).unwrap().locate(&x, &y).unwrap();
        assert_eq!((a.piece, &a.carrier), (b.piece, &b.carrier));
        assert_eq!(a.weights, b.weights);
    }
}
