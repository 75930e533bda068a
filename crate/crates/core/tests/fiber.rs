use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strata_core::fiber::{fiber, fiber_by_subrepresentations, FiberStatus};
use strata_core::rep::{random_rep, DimVector, SModule, WindowRep};
use strata_core::{Configuration, Fp, MeshCategory, Quiver, RepQuiver, Window};

type F2 = Fp<2>;

fn a2() -> Arc<Quiver> {
    Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap())
}

fn sample(rq: &Arc<RepQuiver>, seed: u64) -> WindowRep<F2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims: Vec<usize> = rq
        .vertices()
        .iter()
        .map(|v| if (2..=3).contains(&v.level) { rng.gen_range(0..=2) } else { 0 })
        .collect();
    random_rep(rq.clone(), &dims, 0.6, &mut rng).stabilize()
}

/// All vectors componentwise between zero and `top`.
fn below(top: &DimVector) -> Vec<DimVector> {
    let mut out = vec![DimVector::new()];
    for (&k, &n) in top {
        out = out
            .into_iter()
            .flat_map(|d| {
                (0..=n).map(move |c| {
                    let mut e = d.clone();
                    if c > 0 {
                        e.insert(k, c);
                    }
                    e
                })
            })
            .collect();
    }
    out
}

fn plus(a: &DimVector, b: &DimVector) -> DimVector {
    let mut out = a.clone();
    for (&k, &n) in b {
        *out.entry(k).or_insert(0) += n;
    }
    out
}

#[test]
fn fibers_agree_with_direct_search_on_a2() {
    let rq = Arc::new(RepQuiver::new(a2(), true, Window::new(0, 7).unwrap(), Configuration::All));
    let cat = MeshCategory::<F2>::new(rq.clone());
    let mut checked = 0;
    let mut largest = 0;
    for seed in 0..40 {
        let l = sample(&rq, seed);
        let m = SModule::restrict(&l, &cat);
        let base = fiber(&cat, &m, &DimVector::new(), 8).unwrap();
        let total: usize = base.ck.values().sum();
        if total > 8 {
            continue;
        }
        // the zero submodule is always there
        assert!(base.attained.contains(&DimVector::new()));
        let v0_fiber = fiber(&cat, &m, &base.v0, 8).unwrap();
        assert_eq!(v0_fiber.is_nonempty(), Some(true));
        // the given point's own stable representation lies in its fiber
        assert!(base.attained.iter().any(|u| plus(&base.v0, u) == l.v()));
        let attained: BTreeSet<DimVector> = base.attained.clone();
        for u in below(&base.ck) {
            let v = plus(&base.v0, &u);
            let report = fiber(&cat, &m, &v, 8).unwrap();
            let direct = fiber_by_subrepresentations(&cat, &m, &v).unwrap();
            assert_eq!(report.is_nonempty(), Some(attained.contains(&u)), "seed {seed} u {u:?}");
            assert_eq!(direct.is_some(), attained.contains(&u), "seed {seed} u {u:?}");
            if let FiberStatus::Nonempty(w) = &report.status {
                assert_eq!(w.v(), v);
                assert_eq!(w.w(), l.w());
            }
        }
        checked += 1;
        largest = largest.max(total);
    }
    assert!(checked >= 10, "only {checked} samples within the bound");
    assert!(largest >= 6, "quotients stayed small: {largest}");
}

#[test]
fn negative_difference_is_empty() {
    let rq = Arc::new(RepQuiver::new(a2(), true, Window::new(0, 7).unwrap(), Configuration::All));
    let cat = MeshCategory::<F2>::new(rq.clone());
    let l = sample(&rq, 1);
    let m = SModule::restrict(&l, &cat);
    let base = fiber(&cat, &m, &DimVector::new(), 8).unwrap();
    if let Some((&k, &n)) = base.v0.iter().next() {
        let mut v = base.v0.clone();
        v.insert(k, n - 1);
        assert_eq!(fiber(&cat, &m, &v, 8).unwrap().is_nonempty(), Some(false));
    }
}

#[test]
fn bound_exceeded_is_undetermined() {
    let rq = Arc::new(RepQuiver::new(a2(), true, Window::new(0, 7).unwrap(), Configuration::All));
    let cat = MeshCategory::<F2>::new(rq.clone());
    for seed in 0..6 {
        let m = SModule::restrict(&sample(&rq, seed), &cat);
        let base = fiber(&cat, &m, &DimVector::new(), 0).unwrap();
        if base.ck.values().sum::<usize>() > 0 {
            let v = plus(&base.v0, &base.ck);
            assert_eq!(fiber(&cat, &m, &v, 0).unwrap().is_nonempty(), None);
            return;
        }
    }
    panic!("no sample with a nonzero quotient");
}
