//! Brute-force oracles. Nothing here goes through the level sweep or forward
//! substitution of `strata-core`; both are checked against plain Gaussian
//! elimination.

use std::collections::{BTreeMap, HashMap};

use strata_core::derived::{cartan_solve, CartanSolution, VertexVector};
use strata_core::{Field, MeshCategory, Quiver, RepQuiver, RepVertex, Window, Q};

/// Row echelon span over `Q`, grown one vector at a time.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Q>)>,
}

impl Echelon {
    fn reduce(&self, v: &mut [Q]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&c.mul(r));
                }
            }
        }
    }

    /// Adds `v` to the span; false if it was already there.
    fn insert(&mut self, mut v: Vec<Q>) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[p].inv();
        for x in v.iter_mut() {
            *x = x.mul(&inv);
        }
        // keep earlier rows reduced against the new pivot
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = x.sub(&c.mul(r));
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    fn contains(&self, v: &[Q]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(Q::is_zero)
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Every path from `a` to `b` as a list of arrow indices, the trivial path included.
pub fn paths(rq: &RepQuiver, a: usize, b: usize) -> Vec<Vec<usize>> {
    fn walk(rq: &RepQuiver, at: usize, b: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == b {
            out.push(cur.clone());
        }
        for &arrow in rq.outgoing(at) {
            let t = rq.ends(arrow).1;
            if t <= b {
                cur.push(arrow);
                walk(rq, t, b, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if a <= b {
        walk(rq, a, b, &mut Vec::new(), &mut out);
    }
    out
}

/// `Hom(a, b)` computed as the span of all paths modulo the two-sided ideal of mesh relators.
pub struct PathHom {
    pub paths: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    ideal: Echelon,
}

impl PathHom {
    pub fn new(rq: &RepQuiver, a: usize, b: usize) -> Self {
        let all = paths(rq, a, b);
        let index: HashMap<Vec<usize>, usize> = all.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut ideal = Echelon::default();
        for t in 0..rq.vertices().len() {
            if !rq.has_mesh(t) || t > b {
                continue;
            }
            let Some(tau) = rq.index_of(rq.vertex(t).tau()) else { continue };
            let terms = rq.mesh_terms(t);
            let before = paths(rq, a, tau);
            let after = paths(rq, t, b);
            for p in &before {
                for q in &after {
                    let mut v = vec![Q::zero(); all.len()];
                    for &(into, closing) in &terms {
                        let mut w = p.clone();
                        w.push(closing);
                        w.push(into);
                        w.extend_from_slice(q);
                        v[index[&w]] = v[index[&w]].add(&Q::one());
                    }
                    ideal.insert(v);
                }
            }
        }
        PathHom { paths: all, index, ideal }
    }

    pub fn dim(&self) -> usize {
        self.paths.len() - self.ideal.rank()
    }

    fn vector(&self, path: &[usize]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.paths.len()];
        v[self.index[path]] = Q::one();
        v
    }

    /// The paths in `basis` are independent modulo the ideal and span the quotient.
    pub fn is_basis(&self, basis: &[Vec<usize>]) -> bool {
        if basis.len() != self.dim() {
            return false;
        }
        let mut span = Echelon { rows: self.ideal.rows.clone() };
        basis.iter().all(|p| self.index.contains_key(p) && span.insert(self.vector(p)))
    }

    /// `path - sum c_k basis_k` lies in the ideal.
    pub fn reduces_to(&self, path: &[usize], basis: &[Vec<usize>], coords: &[Q]) -> bool {
        let mut v = self.vector(path);
        for (b, c) in basis.iter().zip(coords) {
            let i = self.index[b];
            v[i] = v[i].sub(c);
        }
        self.ideal.contains(&v)
    }
}

/// Outcome of comparing the sweep with the path oracle on a window.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomComparison {
    pub pairs: usize,
    pub mismatches: Vec<String>,
}

/// Compares dimensions, basis paths and the reduction of every path on all pairs of the window.
pub fn compare_hom(cat: &MeshCategory<Q>) -> HomComparison {
    let rq = cat.quiver();
    let n = rq.vertices().len();
    let mut out = HomComparison::default();
    for a in 0..n {
        let h = cat.functor(a);
        for b in a..n {
            let oracle = PathHom::new(rq, a, b);
            let basis = cat.basis(a, b);
            let name = || format!("{} -> {}", rq.vertex_key(rq.vertex(a)), rq.vertex_key(rq.vertex(b)));
            out.pairs += 1;
            if oracle.dim() != cat.dim(a, b) {
                out.mismatches.push(format!("{}: sweep {}, paths {}", name(), cat.dim(a, b), oracle.dim()));
                continue;
            }
            if !oracle.is_basis(&basis) {
                out.mismatches.push(format!("{}: basis paths are not a basis", name()));
                continue;
            }
            let bad = oracle.paths.iter().find(|p| !oracle.reduces_to(p, &basis, &h.push(&[Q::one()], p)));
            if let Some(p) = bad {
                out.mismatches.push(format!("{}: path {p:?} reduces wrongly", name()));
            }
        }
    }
    out
}

/// Arrows of the repetition quiver, spelled out from the arrows of `q`.
fn zq_arrows(q: &Quiver, level: i64) -> Vec<(RepVertex, RepVertex)> {
    q.arrows()
        .iter()
        .flat_map(|a| {
            [
                (RepVertex::new(a.source, level), RepVertex::new(a.target, level)),
                (RepVertex::new(a.target, level), RepVertex::new(a.source, level + 1)),
            ]
        })
        .collect()
}

/// `C` as a dense matrix from vectors on `window` to vectors on `window` plus one level.
pub fn cartan_matrix(q: &Quiver, window: Window) -> (Vec<RepVertex>, Vec<RepVertex>, Vec<Vec<Q>>) {
    let n = q.vertex_count();
    let cols: Vec<RepVertex> = window.levels().flat_map(|p| (0..n).map(move |i| RepVertex::new(i, p))).collect();
    let rows: Vec<RepVertex> =
        (window.lo..=window.hi + 1).flat_map(|p| (0..n).map(move |i| RepVertex::new(i, p))).collect();
    let row: BTreeMap<RepVertex, usize> = rows.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let col: BTreeMap<RepVertex, usize> = cols.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let mut a = vec![vec![Q::zero(); cols.len()]; rows.len()];
    let mut bump = |x: RepVertex, y: RepVertex, c: i64| {
        if let (Some(&r), Some(&k)) = (row.get(&x), col.get(&y)) {
            a[r][k] = a[r][k].add(&Q::from_i64(c));
        }
    };
    for &y in &cols {
        bump(y, y, 1);
        bump(y.tau_inv(), y, 1);
    }
    for p in window.lo - 1..=window.hi + 1 {
        for (s, t) in zq_arrows(q, p) {
            bump(t, s, -1);
        }
    }
    (rows, cols, a)
}

pub fn cartan_apply_dense(q: &Quiver, v: &VertexVector, window: Window) -> VertexVector {
    let (rows, cols, a) = cartan_matrix(q, window);
    rows.iter()
        .zip(&a)
        .filter_map(|(&x, r)| {
            let s: i64 = cols.iter().zip(r).map(|(y, c)| v.get(y).copied().unwrap_or(0) * to_i64(c)).sum();
            (s != 0).then_some((x, s))
        })
        .collect()
}

fn to_i64(c: &Q) -> i64 {
    assert!(c.denom() == &1.into(), "integral entry expected");
    i64::try_from(c.numer().clone()).expect("small entry")
}

/// Solves `C d = m` with `d` supported on `window` by dense elimination.
pub fn cartan_solve_dense(q: &Quiver, m: &VertexVector, window: Window) -> Option<VertexVector> {
    let (rows, cols, a) = cartan_matrix(q, window);
    let k = cols.len();
    let mut aug: Vec<Vec<Q>> = rows
        .iter()
        .zip(&a)
        .map(|(x, r)| {
            let mut r = r.clone();
            r.push(Q::from_i64(m.get(x).copied().unwrap_or(0)));
            r
        })
        .collect();
    if m.keys().any(|x| !rows.contains(x)) {
        return None;
    }
    let mut pivots = Vec::new();
    let mut r0 = 0;
    for c in 0..k {
        let Some(p) = (r0..aug.len()).find(|&r| !aug[r][c].is_zero()) else { continue };
        aug.swap(r0, p);
        let inv = aug[r0][c].inv();
        for x in aug[r0].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..aug.len() {
            if r != r0 && !aug[r][c].is_zero() {
                let f = aug[r][c].clone();
                let pivot_row = aug[r0].clone();
                for (x, y) in aug[r].iter_mut().zip(&pivot_row) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r0 += 1;
    }
    if aug[r0..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut d = VertexVector::new();
    for (r, &c) in pivots.iter().enumerate() {
        if !aug[r][k].is_zero() {
            d.insert(cols[c], to_i64(&aug[r][k]));
        }
    }
    Some(d)
}

/// Forward substitution agrees with the dense solve, including on unsolvable input.
pub fn check_cartan_solve(q: &Quiver, m: &VertexVector, window: Window) -> Result<(), String> {
    let fast = cartan_solve(q, m, window).map_err(|e| e.to_string())?;
    let dense = cartan_solve_dense(q, m, window);
    match (fast, dense) {
        (CartanSolution::Solved(d), Some(e)) if d == e => Ok(()),
        (CartanSolution::NoSolutionInWindow { certificate }, None) => {
            let pairing: i64 = certificate.iter().map(|(x, c)| c * m.get(x).copied().unwrap_or(0)).sum();
            if pairing == 0 {
                return Err("certificate does not pair with m".into());
            }
            let (rows, cols, a) = cartan_matrix(q, window);
            for (k, _) in cols.iter().enumerate() {
                let s: i64 = rows.iter().zip(&a).map(|(x, r)| certificate.get(x).copied().unwrap_or(0) * to_i64(&r[k])).sum();
                if s != 0 {
                    return Err("certificate is not a left null vector".into());
                }
            }
            Ok(())
        }
        (fast, dense) => Err(format!("forward substitution {fast:?}, dense {dense:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;
    use strata_core::Configuration;

    fn a2() -> Arc<Quiver> {
        Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap())
    }

    #[test]
    fn a2_paths_and_mesh() {
        let rq = RepQuiver::repetition(a2(), Window::new(0, 2).unwrap());
        let a = rq.index_of(RepVertex::new(0, 0)).unwrap();
        let b = rq.index_of(RepVertex::new(0, 1)).unwrap();
        assert_eq!(paths(&rq, a, b).len(), 1);
        assert_eq!(PathHom::new(&rq, a, b).dim(), 0);
    }

    #[test]
    fn framed_a2_window_agrees() {
        let rq = Arc::new(RepQuiver::new(a2(), true, Window::new(0, 3).unwrap(), Configuration::All));
        let r = compare_hom(&MeshCategory::<Q>::new(rq));
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
        assert!(r.pairs > 50);
    }

    #[test]
    fn dense_cartan_matches_apply() {
        let q = a2();
        let w = Window::new(0, 3).unwrap();
        let v: VertexVector = [(RepVertex::new(0, 1), 2), (RepVertex::new(1, 2), -1)].into_iter().collect();
        assert_eq!(cartan_apply_dense(&q, &v, w), strata_core::derived::cartan_apply(&q, &v));
        let m = strata_core::derived::cartan_apply(&q, &v);
        assert_eq!(cartan_solve_dense(&q, &m, w), Some(v));
        let lone: VertexVector = [(RepVertex::new(0, 1), 1)].into_iter().collect();
        check_cartan_solve(&q, &lone, w).unwrap();
    }
}
