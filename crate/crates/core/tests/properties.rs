use std::sync::Arc;

use proptest::prelude::*;
use strata_core::derived::{cartan_apply, cartan_solve, CartanSolution, VertexVector};
use strata_core::{Configuration, Field, Fp, Matrix, MeshCategory, Quiver, RepQuiver, RepVertex, Window, Q};

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Q>> {
    prop::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |v| Matrix::from_fn(rows, cols, |r, c| Q::from_i64(v[r * cols + c])))
}

fn shaped() -> impl Strategy<Value = Matrix<Q>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| small_matrix(r, c))
}

fn quivers() -> Vec<Arc<Quiver>> {
    vec![
        Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap()),
        Arc::new(Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "3", "2")]).unwrap()),
        Arc::new(Quiver::new(&["0", "1", "2", "3"], &[("a", "0", "1"), ("b", "0", "2"), ("c", "0", "3")]).unwrap()),
        Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap()),
    ]
}

fn vertex_vector(n: usize) -> impl Strategy<Value = VertexVector> {
    prop::collection::btree_map((0..n, 0i64..4), -2i64..=2, 0..6)
        .prop_map(|m| m.into_iter().filter(|(_, c)| *c != 0).map(|((i, p), c)| (RepVertex::new(i, p), c)).collect())
}

proptest! {
    #[test]
    fn rank_nullity(m in shaped()) {
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.cols(), m.cols());
        prop_assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_certifies_both_ways(m in shaped(), seed in prop::collection::vec(-2i64..=2, 6)) {
        let b: Vec<Q> = (0..m.rows()).map(|r| Q::from_i64(seed[r])).collect();
        match m.solve(&b) {
            Ok(x) => prop_assert_eq!(m.mul_vec(&x), b),
            Err(y) => {
                prop_assert!(m.transpose().mul_vec(&y).iter().all(Q::is_zero));
                let dot = y.iter().zip(&b).fold(Q::zero(), |acc, (p, q)| acc.add(&p.mul(q)));
                prop_assert!(!dot.is_zero());
            }
        }
    }

    #[test]
    fn inverse_is_two_sided(m in (1usize..5).prop_flat_map(|n| small_matrix(n, n))) {
        if let Some(inv) = m.inverse() {
            let id = Matrix::identity(m.rows());
            prop_assert_eq!(m.mul(&inv), id.clone());
            prop_assert_eq!(inv.mul(&m), id);
        } else {
            prop_assert!(m.rank() < m.rows());
        }
    }

    #[test]
    fn prime_field_inverses(a in 1i64..1_000_003) {
        let x = Fp::<1_000_003>::new(a);
        prop_assert!(x.mul(&x.inv()).is_one());
        let y = Fp::<7>::new(a);
        if !y.is_zero() {
            prop_assert!(y.mul(&y.inv()).is_one());
        }
    }

    #[test]
    fn sigma_squared_is_tau(i in 0usize..3, p in -5i64..5, frozen in any::<bool>()) {
        let v = if frozen { RepVertex::frozen(i, p) } else { RepVertex::new(i, p) };
        prop_assert_eq!(v.sigma().sigma(), v.tau());
        prop_assert_eq!(v.sigma().sigma_inv(), v);
    }

    #[test]
    fn cartan_solve_inverts_apply(k in 0usize..4, v in vertex_vector(4)) {
        let q = &quivers()[k];
        let v: VertexVector = v.into_iter().filter(|(x, _)| x.node < q.vertex_count()).collect();
        let m = cartan_apply(q, &v);
        let window = Window::new(0, 5).unwrap();
        prop_assert_eq!(cartan_solve(q, &m, window).unwrap(), CartanSolution::Solved(v));
    }

    #[test]
    fn composition_is_associative(
        k in 0usize..3,
        framed in any::<bool>(),
        picks in prop::collection::vec(0usize..1000, 4),
        coeffs in prop::collection::vec(-2i64..=2, 48),
    ) {
        let q = quivers()[k].clone();
        let rq = Arc::new(RepQuiver::new(q, framed, Window::new(0, 3).unwrap(), Configuration::All));
        let cat = MeshCategory::<Q>::new(rq.clone());
        let n = rq.vertices().len();
        let mut objs: Vec<usize> = picks.iter().map(|p| p % n).collect();
        objs.sort();
        let [a, b, c, d] = [objs[0], objs[1], objs[2], objs[3]];
        let elem = |x: usize, y: usize, off: usize| -> Vec<Q> {
            (0..cat.dim(x, y)).map(|i| Q::from_i64(coeffs[(off + i) % coeffs.len()])).collect()
        };
        let (f, g, h) = (elem(a, b, 0), elem(b, c, 16), elem(c, d, 32));
        let left = cat.compose(a, c, d, &cat.compose(a, b, c, &f, &g), &h);
        let right = cat.compose(a, b, d, &f, &cat.compose(b, c, d, &g, &h));
        prop_assert_eq!(left, right);
    }
}
