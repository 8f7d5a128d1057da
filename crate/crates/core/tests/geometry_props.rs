use proptest::prelude::*;

use pqfreq::geometry::shapes::{axis_box, random_convex, standard_simplex};
use pqfreq::geometry::{facet_partition, Polytope};

fn convex_combination(p: &Polytope<f64>, weights: &[f64]) -> Vec<f64> {
    let vs = p.vertices();
    let total: f64 = weights.iter().take(vs.len()).sum();
    let mut x = vec![0.0; p.dim()];
    for (v, w) in vs.iter().zip(weights) {
        for k in 0..p.dim() {
            x[k] += w / total * v[k];
        }
    }
    x
}

fn body(kind: u8, seed: u64) -> Polytope<f64> {
    match kind % 4 {
        0 | 1 => random_convex(12, seed).unwrap(),
        2 => axis_box(&[1.0, 0.5 + (seed % 7) as f64 * 0.25, 2.0]).unwrap(),
        _ => standard_simplex(3).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_concave(
        kind in 0u8..4,
        seed in 0u64..500,
        wx in proptest::collection::vec(0.01f64..1.0, 32),
        wy in proptest::collection::vec(0.01f64..1.0, 32),
        t in 0.0f64..1.0,
    ) {
        let p = body(kind, seed);
        let x = convex_combination(&p, &wx);
        let y = convex_combination(&p, &wy);
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| t * a + (1.0 - t) * b).collect();
        prop_assert!(p.distance(&z) >= t * p.distance(&x) + (1.0 - t) * p.distance(&y) - 1e-12);
    }

    #[test]
    fn nearest_facet_cell_contains_the_point(
        kind in 0u8..4,
        seed in 0u64..500,
        ws in proptest::collection::vec(proptest::collection::vec(0.01f64..1.0, 32), 40),
    ) {
        let p = body(kind, seed);
        let cells = facet_partition(&p).unwrap();
        for w in &ws {
            let x = convex_combination(&p, w);
            let (i, _) = p.nearest_facet(&x);
            let cell = cells.iter().find(|c| c.facet_index() == i).unwrap();
            prop_assert!(cell.cell().contains(&x, 1e-9 * p.scale()), "x = {:?} not in cell {}", x, i);
            // projection onto the facet hyperplane stays in the closed facet
            let y = cell.project(&x);
            let tol = 1e-9 * p.scale();
            prop_assert!(p.facets()[i].slack(&y).abs() <= tol);
            prop_assert!(p.facets().iter().all(|h| h.slack(&y) >= -tol), "projection {:?} leaves facet {}", y, i);
        }
    }

    #[test]
    fn facets_meet_only_on_their_relative_boundaries(kind in 0u8..4, seed in 0u64..500) {
        let p = body(kind, seed);
        let tol = 1e-9 * p.scale();
        for i in 0..p.facets().len() {
            // the facet's vertex centroid is relatively interior to it ...
            let vs: Vec<&[f64]> = p.facet_vertices(i).collect();
            let c: Vec<f64> = (0..p.dim()).map(|k| vs.iter().map(|v| v[k]).sum::<f64>() / vs.len() as f64).collect();
            let on: Vec<usize> = (0..p.facets().len()).filter(|&j| p.facets()[j].slack(&c).abs() <= tol).collect();
            prop_assert_eq!(on, vec![i]);
            // ... while every vertex lies on at least `dim` facets
            for v in &vs {
                let n = p.facets().iter().filter(|h| h.slack(v).abs() <= tol).count();
                prop_assert!(n >= p.dim());
            }
        }
    }

    #[test]
    fn inradius_is_attained_at_a_cell_vertex(kind in 0u8..4, seed in 0u64..500) {
        let p = body(kind, seed);
        let best = facet_partition(&p)
            .unwrap()
            .iter()
            .flat_map(|c| c.cell().vertices().to_vec())
            .map(|v| p.distance(&v))
            .fold(0.0f64, f64::max);
        prop_assert!((best - p.inradius().0).abs() <= 1e-9 * p.scale(), "{} vs {}", best, p.inradius().0);
    }

    #[test]
    fn cells_tile_the_body(kind in 0u8..4, seed in 0u64..500) {
        let p = body(kind, seed);
        let total: f64 = facet_partition(&p).unwrap().iter().map(|c| c.volume()).sum();
        prop_assert!((total / p.volume() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn scaled_bodies_scale_their_metrics() {
    let p = random_convex(12, 3).unwrap();
    for s in [0.5, 2.0] {
        let q = p.scaled(s).unwrap();
        assert!((q.inradius().0 / p.inradius().0 - s).abs() < 1e-12);
        assert!((q.volume() / p.volume() - s * s).abs() < 1e-12);
        assert!((q.diameter() / p.diameter() - s).abs() < 1e-12);
    }
}
