use std::sync::Arc;

use strata_core::sing::build_sing_quiver;
use strata_core::{Configuration, Quiver, RepVertex, Window};

/// The zigzag line of ZA2: v(2p) = (1, p), v(2p + 1) = (2, p).
fn zigzag(a: i64) -> RepVertex {
    RepVertex::new(a.rem_euclid(2) as usize, a.div_euclid(2))
}

#[test]
fn a2_arrows_and_relations() {
    let q = Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap());
    let s = build_sing_quiver(q, &Configuration::All, Window::new(0, 9).unwrap()).unwrap();
    let complete: Vec<RepVertex> = s.vertices.iter().filter(|(_, &c)| c).map(|(&v, _)| v).collect();
    assert!(complete.len() >= 4, "{complete:?}");
    for &v in &complete {
        assert_eq!(s.arrows_from(v), 2, "{v:?}");
    }
    for a in 0..20 {
        let x = zigzag(a);
        let sx = x.sigma();
        if !s.vertices.get(&sx).copied().unwrap_or(false) {
            continue;
        }
        for b in a..a + 12 {
            let sy = zigzag(b).sigma();
            if !s.vertices.contains_key(&sy) {
                continue;
            }
            let arrows = usize::from(b == a + 2 || b == a + 3);
            let relations = usize::from(b == a + 5 || b == a + 6);
            assert_eq!(s.arrow_count(sx, sy), arrows, "arrows {a} -> {b}");
            assert_eq!(s.relation_count(sx, sy), relations, "relations {a} -> {b}");
        }
    }
}

#[test]
fn d4_double_arrow() {
    let q = Arc::new(Quiver::new(&["0", "1", "2", "3"], &[("a", "0", "1"), ("b", "0", "2"), ("c", "0", "3")]).unwrap());
    let s = build_sing_quiver(q, &Configuration::All, Window::new(0, 5).unwrap()).unwrap();
    let x = RepVertex::new(0, 1);
    let y = x.tau_inv().tau_inv();
    assert_eq!(s.arrow_count(x.sigma(), y.sigma()), 2);
}

#[test]
fn kronecker_has_no_relations() {
    for k in [2, 3] {
        let arrows: Vec<(String, String, String)> = (0..k).map(|i| (format!("a{i}"), "1".into(), "2".into())).collect();
        let q = Arc::new(Quiver::new(&["1".to_string(), "2".to_string()], &arrows).unwrap());
        let s = build_sing_quiver(q, &Configuration::All, Window::new(0, 6).unwrap()).unwrap();
        assert!(s.relations.is_empty());
        assert!(!s.arrows.is_empty());
    }
}
