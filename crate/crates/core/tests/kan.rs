use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strata_core::kan::{kan_intermediate, kan_left, kan_right, phi_of};
use strata_core::rep::{random_rep, SModule, WindowRep};
use strata_core::{Configuration, Field, MeshCategory, Quiver, RepQuiver, RepVertex, Window, Q};

fn framed(q: &Arc<Quiver>, lo: i64, hi: i64) -> Arc<RepQuiver> {
    Arc::new(RepQuiver::new(q.clone(), true, Window::new(lo, hi).unwrap(), Configuration::All))
}

fn stable_rep(rq: &Arc<RepQuiver>, levels: (i64, i64), seed: u64) -> WindowRep<Q> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims: Vec<usize> = rq
        .vertices()
        .iter()
        .map(|v| if v.level >= levels.0 && v.level <= levels.1 { 1 + (seed as usize + v.node) % 2 } else { 0 })
        .collect();
    random_rep(rq.clone(), &dims, 0.7, &mut rng).stabilize()
}

fn check_kan_dimensions(q: Arc<Quiver>, seed: u64) {
    let rq = framed(&q, 0, 7);
    let cat = MeshCategory::<Q>::new(rq.clone());
    let plain = MeshCategory::<Q>::new(Arc::new(RepQuiver::repetition(q.clone(), rq.window())));
    let l = stable_rep(&rq, (2, 4), seed);
    let m = SModule::restrict(&l, &cat);
    let kr = kan_right(&cat, &m).unwrap();
    let klr = kan_intermediate(&cat, &m).unwrap();
    let kl = kan_left(&cat, &m).unwrap();
    kr.validate().unwrap();
    klr.validate().unwrap();
    kl.rep.validate().unwrap();
    assert!(kr.is_stable());
    assert!(klr.is_stable() && klr.is_costable());
    assert!(kl.rep.is_costable());
    assert_eq!(SModule::restrict(&kr, &cat), m);
    assert_eq!(SModule::restrict(&kl.rep, &cat), m);
    let phi = phi_of(&klr).unwrap();
    let hom = |a: RepVertex, b: RepVertex| plain.dim_between(a, b).unwrap_or(0);
    for (idx, &x) in rq.vertices().iter().enumerate() {
        if x.frozen {
            continue;
        }
        let ck: usize = phi.multiplicities.iter().map(|(&y, &c)| c * hom(y, x)).sum();
        assert_eq!(kr.dim(idx) - klr.dim(idx), ck, "CK at {x:?}");
        let rank = kl.canonical[idx].rank();
        assert_eq!(rank, klr.dim(idx), "image of can at {x:?}");
        let kk: usize = phi.multiplicities.iter().map(|(&y, &c)| c * hom(x, y.tau())).sum();
        assert_eq!(kl.rep.dim(idx) - rank, kk, "KK at {x:?}");
    }
    // the stable representation sits between the two extensions
    for (idx, _) in rq.vertices().iter().enumerate() {
        assert!(klr.dim(idx) <= l.dim(idx) && l.dim(idx) <= kr.dim(idx));
    }
}

#[test]
fn a2_kan_dimensions() {
    let q = Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap());
    for seed in 0..4 {
        check_kan_dimensions(q.clone(), seed);
    }
}

#[test]
fn a3_kan_dimensions() {
    let q = Arc::new(Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "3", "2")]).unwrap());
    for seed in 0..3 {
        check_kan_dimensions(q.clone(), seed);
    }
}

#[test]
fn can_is_identity_on_frozen() {
    let q = Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap());
    let rq = framed(&q, 0, 8);
    let cat = MeshCategory::<Q>::new(rq.clone());
    let l = stable_rep(&rq, (2, 4), 7);
    let m = SModule::restrict(&l, &cat);
    let kl = kan_left(&cat, &m).unwrap();
    for (idx, v) in rq.vertices().iter().enumerate() {
        if v.frozen && m.dim(*v) > 0 {
            let c = &kl.canonical[idx];
            let id = strata_core::Matrix::<Q>::identity(m.dim(*v));
            assert_eq!(c, &id);
            assert!(c.entries().iter().all(|e| e.is_zero() || e.is_one()));
        }
    }
}
