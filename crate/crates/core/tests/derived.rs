use std::sync::Arc;

use strata_core::derived::knit_hom;
use strata_core::{MeshCategory, Quiver, RepQuiver, Window, Q};

fn knitting_matches_sweep(q: Quiver, lo: i64, hi: i64) {
    let rq = Arc::new(RepQuiver::repetition(Arc::new(q), Window::new(lo, hi).unwrap()));
    let cat = MeshCategory::<Q>::new(rq.clone());
    for x in 0..rq.vertices().len() {
        let knitted = knit_hom(&rq, x).unwrap();
        let swept: Vec<usize> = (0..rq.vertices().len()).map(|y| cat.dim(x, y)).collect();
        assert_eq!(knitted, swept, "from {}", rq.vertex_key(rq.vertex(x)));
    }
}

#[test]
fn kronecker_knitting_matches_sweep() {
    knitting_matches_sweep(Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap(), 0, 5);
}

#[test]
fn three_kronecker_knitting_matches_sweep() {
    let q = Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2"), ("c", "1", "2")]).unwrap();
    knitting_matches_sweep(q, 0, 2);
}

#[test]
fn affine_a2_knitting_matches_sweep() {
    let q = Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")]).unwrap();
    knitting_matches_sweep(q, 0, 4);
}

#[test]
fn knitting_refuses_dynkin() {
    let q = Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap());
    let rq = RepQuiver::repetition(q, Window::new(0, 3).unwrap());
    assert!(knit_hom(&rq, 0).is_err());
}
