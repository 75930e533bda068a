use std::sync::Arc;

use strata_core::derived::DerivedCategory;
use strata_core::rep::SModule;
use strata_core::resolve::{ext_oracle, ext_row, ext_row_local, injective_ext};
use strata_core::{Configuration, Error, MeshCategory, Quiver, RepQuiver, RepVertex, Window, Q};

fn check_ext_against_derived(q: Quiver, lo: i64, hi: i64) -> usize {
    let q = Arc::new(q);
    let window = Window::new(lo, hi).unwrap();
    let cat = MeshCategory::<Q>::new(Arc::new(RepQuiver::new(q.clone(), true, window, Configuration::All)));
    let dq = DerivedCategory::new(q.clone(), window).unwrap();
    let n = q.vertex_count();
    let mut checked = 0;
    for p in 1..=2 {
        for xl in lo + 1..=hi {
            for yl in lo + 1..=hi {
                for i in 0..n {
                    for j in 0..n {
                        let (x, y) = (RepVertex::new(i, xl), RepVertex::new(j, yl));
                        let expected = match dq.hom_dq(x, p, y) {
                            Ok(d) => d,
                            Err(Error::WindowInsufficient(_)) => continue,
                            Err(e) => panic!("{e}"),
                        };
                        let got = ext_oracle(&cat, x.sigma(), y.sigma(), p as usize).unwrap();
                        assert_eq!(got, expected, "p={p} x={x:?} y={y:?}");
                        checked += 1;
                    }
                }
            }
        }
    }
    checked
}

#[test]
fn a2_ext_matches_derived_category() {
    let checked = check_ext_against_derived(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap(), 0, 7);
    assert!(checked >= 50, "{checked}");
}

#[test]
fn a3_ext_matches_derived_category() {
    let q = Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
    let checked = check_ext_against_derived(q, 0, 6);
    assert!(checked >= 50, "{checked}");
}

#[test]
fn a2_injectives_have_no_second_extension_with_simples() {
    let q = Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap());
    let cat = MeshCategory::<Q>::new(Arc::new(RepQuiver::new(q, true, Window::new(0, 12).unwrap(), Configuration::All)));
    for s in [RepVertex::frozen(0, 2), RepVertex::frozen(1, 3)] {
        for u in [RepVertex::frozen(0, 3), RepVertex::frozen(1, 4)] {
            let m = SModule::semisimple(&[(u, 1)].into_iter().collect());
            assert_eq!(injective_ext(&cat, s, &m, 2, 1).unwrap(), 0);
            assert_eq!(injective_ext(&cat, s, &m, 3, 1).unwrap(), 0);
        }
    }
}

fn check_local_rows(q: Quiver, lo: i64, hi: i64, depth: i64) {
    let rq = Arc::new(RepQuiver::new(Arc::new(q), true, Window::new(lo, hi).unwrap(), Configuration::All));
    let cat = MeshCategory::<Q>::new(rq.clone());
    for x in rq.frozen_vertices() {
        for p in 1..=2 {
            let full = ext_row(&cat, x, p).unwrap();
            let local = ext_row_local::<Q>(&rq, x, p, depth).unwrap();
            let inside: Vec<_> = full.iter().filter(|(y, _)| y.level >= x.level - depth).collect();
            assert_eq!(inside, local.iter().collect::<Vec<_>>(), "x={x:?} p={p}");
        }
    }
}

#[test]
fn ext_rows_agree_on_level_intervals() {
    check_local_rows(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap(), 0, 7, 3);
    check_local_rows(Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap(), 0, 3, 1);
}
