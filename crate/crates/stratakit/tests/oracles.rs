use std::sync::Arc;

use proptest::prelude::*;
use stratakit::oracle::{cartan_apply_dense, check_cartan_solve, compare_hom, PathHom};
use strata_core::derived::{cartan_apply, VertexVector};
use strata_core::{Configuration, MeshCategory, Quiver, RepQuiver, RepVertex, Window, Q};

fn quivers() -> Vec<Arc<Quiver>> {
    vec![
        Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap()),
        Arc::new(Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap()),
        Arc::new(Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")]).unwrap()),
    ]
}

#[test]
fn affine_a2_framed_hom_matches_paths() {
    let q = quivers()[2].clone();
    let rq = Arc::new(RepQuiver::new(q.clone(), true, Window::new(0, 2).unwrap(), Configuration::All));
    let cat = MeshCategory::<Q>::new(rq.clone());
    let r = compare_hom(&cat);
    assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
    let a = rq.index_of(RepVertex::frozen(0, 0)).unwrap();
    let b = rq.index_of(RepVertex::frozen(1, 1)).unwrap();
    assert_eq!(PathHom::new(&rq, a, b).dim(), cat.dim(a, b));
}

#[test]
fn periodic_configuration_hom_matches_paths() {
    let q = quivers()[0].clone();
    let c = Configuration::listed([RepVertex::new(0, 0), RepVertex::new(1, 1)], Some(2)).unwrap();
    let rq = Arc::new(RepQuiver::new(q, true, Window::new(0, 4).unwrap(), c));
    let r = compare_hom(&MeshCategory::<Q>::new(rq));
    assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
}

fn vectors() -> impl Strategy<Value = VertexVector> {
    prop::collection::btree_map((0usize..3, 0i64..5), -2i64..=2, 0..5)
        .prop_map(|m| m.into_iter().filter(|(_, c)| *c != 0).map(|((i, p), c)| (RepVertex::new(i, p), c)).collect())
}

proptest! {
    #[test]
    fn forward_substitution_matches_dense_solve(k in 0usize..3, m in vectors(), hi in 2i64..6) {
        let q = &quivers()[k];
        let m: VertexVector = m.into_iter().filter(|(x, _)| x.node < q.vertex_count() && x.level <= hi).collect();
        let w = Window::new(0, hi).unwrap();
        prop_assert_eq!(check_cartan_solve(q, &m, w), Ok(()));
    }

    #[test]
    fn dense_cartan_matches_apply(k in 0usize..3, v in vectors()) {
        let q = &quivers()[k];
        let v: VertexVector = v.into_iter().filter(|(x, _)| x.node < q.vertex_count()).collect();
        prop_assert_eq!(cartan_apply_dense(q, &v, Window::new(0, 4).unwrap()), cartan_apply(q, &v));
    }
}
