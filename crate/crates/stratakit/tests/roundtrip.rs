use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stratakit::format::{ConfigJson, QuiverJson, RepJson};
use strata_core::rep::random_rep;
use strata_core::{Configuration, Quiver, RepQuiver, RepVertex, Window, Q};

fn quiver(k: usize) -> Arc<Quiver> {
    Arc::new(match k {
        0 => Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap(),
        1 => Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "3", "2")]).unwrap(),
        _ => Quiver::new(&["x", "y"], &[("p", "x", "y"), ("q", "x", "y")]).unwrap(),
    })
}

fn configuration(members: Vec<(usize, i64)>, period: Option<i64>, all: bool, n: usize) -> Configuration {
    if all {
        return Configuration::All;
    }
    let members = members.into_iter().map(|(i, p)| RepVertex::new(i % n, p));
    Configuration::listed(members, period).unwrap()
}

proptest! {
    #[test]
    fn quiver_json_round_trips(k in 0usize..3) {
        let q = quiver(k);
        let text = serde_json::to_string(&QuiverJson::of(&q)).unwrap();
        let back = serde_json::from_str::<QuiverJson>(&text).unwrap().build().unwrap();
        prop_assert_eq!(&*back, &*q);
    }

    #[test]
    fn configuration_json_round_trips(
        k in 0usize..3,
        members in prop::collection::vec((0usize..3, -2i64..4), 0..5),
        period in prop::option::of(1i64..4),
        all in any::<bool>(),
    ) {
        let q = quiver(k);
        let c = configuration(members, period, all, q.vertex_count());
        let text = serde_json::to_string(&ConfigJson::of(&c, &q)).unwrap();
        let back = serde_json::from_str::<ConfigJson>(&text).unwrap().build(&q).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn representation_json_round_trips(
        k in 0usize..3,
        seed in any::<u64>(),
        framed in any::<bool>(),
        lo in -2i64..2,
        dims in prop::collection::vec(0usize..3, 40),
    ) {
        let q = quiver(k);
        let rq = Arc::new(RepQuiver::new(q, framed, Window::new(lo, lo + 3).unwrap(), Configuration::All));
        let d: Vec<usize> = (0..rq.vertices().len()).map(|i| dims[i % dims.len()]).collect();
        let rep = random_rep::<Q, _>(rq, &d, 0.7, &mut ChaCha8Rng::seed_from_u64(seed));
        let json = RepJson::of(&rep);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: RepJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&parsed, &json);
        prop_assert_eq!(parsed.build().unwrap(), rep);
    }
}
