use std::sync::Arc;

use strata_core::config::{check_configuration, Verdict};
use strata_core::{Configuration, Quiver, RepVertex, Window};

fn a2() -> Arc<Quiver> {
    Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap())
}

/// Position on the zigzag line of ZA2: (1, p) -> 2p, (2, p) -> 2p + 1.
fn zigzag(v: RepVertex) -> i64 {
    2 * v.level + v.node as i64
}

fn configurations() -> Vec<Configuration> {
    vec![
        Configuration::listed([RepVertex::new(0, 0)], Some(2)).unwrap(),
        Configuration::listed([RepVertex::new(0, 0)], Some(1)).unwrap(),
        Configuration::listed([RepVertex::new(1, 0)], Some(1)).unwrap(),
        Configuration::listed([RepVertex::new(0, 0)], Some(3)).unwrap(),
        Configuration::listed([RepVertex::new(0, 0), RepVertex::new(1, 1)], Some(2)).unwrap(),
        Configuration::listed([RepVertex::new(0, 1), RepVertex::new(1, 3), RepVertex::new(0, 4)], None).unwrap(),
    ]
}

#[test]
fn condition_r_matches_the_zigzag_on_a2() {
    // Hom(v_a, -) in k(ZA2) is spanned by the identity and the arrow v_a -> v_(a+1)
    let w = Window::new(0, 6).unwrap();
    for c in configurations() {
        let r = check_configuration(a2(), &c, w).unwrap();
        for check in &r.vertices {
            let a = zigzag(check.vertex);
            let near = [a, a + 1].map(|b| RepVertex::new((b % 2) as usize, b.div_euclid(2)));
            let expected = if near.iter().any(|&v| v.level <= w.hi && c.contains(v)) {
                Verdict::Holds
            } else if near[1].level > w.hi && !matches!(c, Configuration::Listed { period: None, .. }) {
                Verdict::Undetermined
            } else {
                Verdict::Fails
            };
            assert_eq!(check.condition_r, expected, "{c:?} at {:?}", check.vertex);
        }
    }
}

#[test]
fn condition_r_gives_left_exactness() {
    // (R) on all of ZQ is sufficient for both sequences to be exact
    let w = Window::new(0, 6).unwrap();
    let mut exercised = 0;
    for c in configurations() {
        let r = check_configuration(a2(), &c, w).unwrap();
        if r.vertices.iter().any(|v| v.condition_r == Verdict::Fails) {
            continue;
        }
        exercised += 1;
        for v in &r.vertices {
            assert_ne!(v.exact_out, Verdict::Fails, "{c:?} at {:?}", v.vertex);
            assert_ne!(v.exact_in, Verdict::Fails, "{c:?} at {:?}", v.vertex);
        }
        assert!(r.vertices.iter().any(|v| v.exact_out == Verdict::Holds && v.exact_in == Verdict::Holds));
    }
    assert!(exercised >= 2);
}

#[test]
fn empty_configuration_is_not_left_exact() {
    let empty = Configuration::listed([], None).unwrap();
    let r = check_configuration(a2(), &empty, Window::new(0, 6).unwrap()).unwrap();
    assert_eq!(r.condition_r(), Some(false));
    assert_eq!(r.left_exact(), Some(false));
}

#[test]
fn all_vertices_on_d4() {
    let q = Arc::new(Quiver::new(&["0", "1", "2", "3"], &[("a", "0", "1"), ("b", "0", "2"), ("c", "0", "3")]).unwrap());
    let r = check_configuration(q, &Configuration::All, Window::new(0, 4).unwrap()).unwrap();
    assert_eq!(r.condition_r(), Some(true));
    assert!(r.vertices.iter().all(|v| v.exact_in != Verdict::Fails && v.exact_out != Verdict::Fails));
}
