//! The bounded derived category of a Dynkin or non-Dynkin quiver, seen
//! through the mesh category of its repetition quiver.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use once_cell::race::OnceBox;

use crate::error::{Error, Result};
use crate::field::{Field, Q};
use crate::linalg::Matrix;
use crate::mesh::MeshCategory;
use crate::quiver::{ArrowKind, Quiver, RepArrow, RepQuiver, RepVertex, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

impl DynkinType {
    pub fn coxeter_number(self) -> usize {
        match self {
            DynkinType::A(n) => n + 1,
            DynkinType::D(n) => 2 * n - 2,
            DynkinType::E(6) => 12,
            DynkinType::E(7) => 18,
            DynkinType::E(_) => 30,
        }
    }

    pub fn rank(self) -> usize {
        match self {
            DynkinType::A(n) | DynkinType::D(n) | DynkinType::E(n) => n,
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

/// ADE type of each connected component, `None` for a non-Dynkin component.
pub fn classify(q: &Quiver) -> Vec<Option<DynkinType>> {
    q.components().iter().map(|comp| classify_component(q, comp)).collect()
}

fn classify_component(q: &Quiver, comp: &[usize]) -> Option<DynkinType> {
    let n = comp.len();
    let mut edges = BTreeSet::new();
    let mut count = 0;
    for a in q.arrows() {
        if comp.contains(&a.source) {
            count += 1;
            edges.insert((a.source.min(a.target), a.source.max(a.target)));
        }
    }
    // multiple edges or loops make it non-simply-laced; cycles make it non-tree
    if count != edges.len() || edges.iter().any(|(a, b)| a == b) || count + 1 != n {
        return None;
    }
    let degree = |v: usize| edges.iter().filter(|(a, b)| *a == v || *b == v).count();
    let branch: Vec<usize> = comp.iter().copied().filter(|&v| degree(v) >= 3).collect();
    match branch.as_slice() {
        [] => Some(DynkinType::A(n)),
        [c] if degree(*c) == 3 => {
            let mut arms: Vec<usize> = edges
                .iter()
                .filter_map(|&(a, b)| if a == *c { Some(b) } else if b == *c { Some(a) } else { None })
                .map(|start| {
                    let (mut prev, mut cur, mut len) = (*c, start, 1);
                    loop {
                        let next = edges.iter().find_map(|&(a, b)| {
                            if a == cur && b != prev {
                                Some(b)
                            } else if b == cur && a != prev {
                                Some(a)
                            } else {
                                None
                            }
                        });
                        match next {
                            Some(nx) => {
                                prev = cur;
                                cur = nx;
                                len += 1;
                            }
                            None => break len,
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            match (arms[0], arms[1], arms[2]) {
                (1, 1, _) => Some(DynkinType::D(n)),
                (1, 2, 2) => Some(DynkinType::E(6)),
                (1, 2, 3) => Some(DynkinType::E(7)),
                (1, 2, 4) => Some(DynkinType::E(8)),
                _ => None,
            }
        }
        _ => None,
    }
}

pub fn is_dynkin(q: &Quiver) -> bool {
    q.vertex_count() > 0 && classify(q).iter().all(Option::is_some)
}

/// Sparse integer vector on vertices of the repetition quiver.
pub type VertexVector = BTreeMap<RepVertex, i64>;

/// The Nakayama permutation `nu` of a Dynkin repetition quiver, stored as
/// `nu(i, 0)` for every vertex `i`; `nu` commutes with `tau`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nakayama {
    images: Vec<RepVertex>,
}

impl Nakayama {
    /// Searches `nu(i, 0)` as the unique `z` with `dim Hom(y, z) = dim Hom((i, 0), y)` for all `y`.
    pub fn compute(q: &Arc<Quiver>) -> Result<Self> {
        if !is_dynkin(q) {
            return Err(Error::NotDynkin("the Nakayama permutation".into()));
        }
        // the level shift of nu is below the number of vertices; keep a halo on each side
        let span = q.vertex_count() as i64;
        let window = Window::new(-span - 1, span + 1)?;
        let cat: MeshCategory<Q> = MeshCategory::new(Arc::new(RepQuiver::repetition(q.clone(), window)));
        let images = (0..q.vertex_count())
            .map(|i| nu_search(&cat, RepVertex::new(i, 0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Nakayama { images })
    }

    pub fn nu(&self, x: RepVertex) -> RepVertex {
        self.images[x.node].shift(x.level)
    }

    pub fn nu_inv(&self, x: RepVertex) -> RepVertex {
        let i = self.images.iter().position(|z| z.node == x.node).expect("nu is a permutation");
        RepVertex::new(i, x.level - self.images[i].level)
    }

    /// `Sigma^p (x)` with `Sigma = tau^-1 nu`.
    pub fn sigma_shift(&self, x: RepVertex, p: i64) -> RepVertex {
        let mut v = x;
        for _ in 0..p.unsigned_abs() {
            v = if p > 0 { self.nu(v).tau_inv() } else { self.nu_inv(v.tau()) };
        }
        v
    }
}

/// `nu(x)` by the Serre duality property, computed on the category's own window.
pub fn nu_search<F: Field>(cat: &MeshCategory<F>, x: RepVertex) -> Result<RepVertex> {
    let rq = cat.quiver();
    let xi = cat.index(x)?;
    let hx = cat.functor(xi);
    let support: Vec<usize> = (0..rq.vertices().len()).filter(|&y| hx.dim(y) > 0).collect();
    if support.iter().any(|&y| rq.vertex(y).level == rq.window().hi) {
        return Err(Error::WindowInsufficient(format!(
            "Hom({}, -) reaches the top of window {}",
            rq.vertex_key(x),
            rq.window()
        )));
    }
    let matches: Vec<usize> = support
        .iter()
        .copied()
        .filter(|&z| (0..rq.vertices().len()).all(|y| cat.dim(y, z) == hx.dim(y)))
        .collect();
    match matches.as_slice() {
        [z] => Ok(rq.vertex(*z)),
        _ => Err(Error::WindowInsufficient(format!("no unique nu({}) in window {}", rq.vertex_key(x), rq.window()))),
    }
}

/// `nu^-1(x)` by the dual search.
pub fn nu_inv_search<F: Field>(cat: &MeshCategory<F>, x: RepVertex) -> Result<RepVertex> {
    let rq = cat.quiver();
    let xi = cat.index(x)?;
    let n = rq.vertices().len();
    let support: Vec<usize> = (0..n).filter(|&y| cat.dim(y, xi) > 0).collect();
    if support.iter().any(|&y| rq.vertex(y).level == rq.window().lo) {
        return Err(Error::WindowInsufficient(format!(
            "Hom(-, {}) reaches the bottom of window {}",
            rq.vertex_key(x),
            rq.window()
        )));
    }
    let matches: Vec<usize> = support
        .iter()
        .copied()
        .filter(|&z| (0..n).all(|y| cat.dim(z, y) == cat.dim(y, xi)))
        .collect();
    match matches.as_slice() {
        [z] => Ok(rq.vertex(*z)),
        _ => Err(Error::WindowInsufficient(format!("no unique nu^-1({}) in window {}", rq.vertex_key(x), rq.window()))),
    }
}

/// Hom spaces of the derived category between images of vertices of the
/// repetition quiver, evaluated on an explicit window.
pub struct DerivedCategory {
    cat: MeshCategory<Q>,
    nakayama: Option<Nakayama>,
    knitted: Vec<OnceBox<Vec<usize>>>,
}

impl DerivedCategory {
    pub fn new(q: Arc<Quiver>, window: Window) -> Result<Self> {
        let nakayama = if is_dynkin(&q) { Some(Nakayama::compute(&q)?) } else { None };
        let cat = MeshCategory::new(Arc::new(RepQuiver::repetition(q, window)));
        let knitted = (0..cat.quiver().vertices().len()).map(|_| OnceBox::new()).collect();
        Ok(DerivedCategory { cat, nakayama, knitted })
    }

    pub fn mesh(&self) -> &MeshCategory<Q> {
        &self.cat
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        self.cat.quiver().quiver()
    }

    pub fn window(&self) -> Window {
        self.cat.quiver().window()
    }

    pub fn is_dynkin(&self) -> bool {
        self.nakayama.is_some()
    }

    pub fn nakayama(&self) -> Option<&Nakayama> {
        self.nakayama.as_ref()
    }

    /// `dim k(ZQ)(x, y)`. Off Dynkin type the dimension is knitted rather than
    /// swept, since explicit bases grow exponentially with the level distance.
    pub fn hom(&self, x: RepVertex, y: RepVertex) -> Result<usize> {
        if self.nakayama.is_some() {
            return self.cat.dim_between(x, y);
        }
        let (xi, yi) = (self.cat.index(x)?, self.cat.index(y)?);
        if let Some(table) = self.knitted[xi].get() {
            return Ok(table[yi]);
        }
        let table = knit_hom(self.cat.quiver(), xi)?;
        Ok(self.knitted[xi].get_or_init(|| alloc::boxed::Box::new(table))[yi])
    }

    pub fn sigma_shift(&self, x: RepVertex, p: i64) -> Result<RepVertex> {
        match &self.nakayama {
            Some(nk) => Ok(nk.sigma_shift(x, p)),
            None => Err(Error::NotDynkin("the shift on vertices".into())),
        }
    }

    /// `dim Hom(H x, Sigma^p H y)` in the derived category.
    pub fn hom_dq(&self, x: RepVertex, p: i64, y: RepVertex) -> Result<usize> {
        match (p, &self.nakayama) {
            (0, _) => self.hom(x, y),
            (1, _) => self.hom(y, x.tau()),
            (_, Some(nk)) => self.hom(x, nk.sigma_shift(y, p)),
            (_, None) => Ok(0),
        }
    }
}

/// `dim k(ZQ)(x, -)` by knitting: for `y != x` the mesh ending at `y` stays
/// exact under `Hom(x, -)`, so the dimensions are additive on meshes.
/// Valid off Dynkin type, where no mesh ever reaches a shifted copy of `x`.
pub fn knit_hom(rq: &RepQuiver, x: usize) -> Result<Vec<usize>> {
    if is_dynkin(rq.quiver()) {
        return Err(Error::InvalidInput("knitting stops being exact in Dynkin type".into()));
    }
    let mut h = alloc::vec![0i64; rq.vertices().len()];
    h[x] = 1;
    for y in x + 1..rq.vertices().len() {
        let v = rq.vertex(y);
        let mut d: i64 = rq.incoming(y).iter().map(|&a| h[rq.ends(a).0]).sum();
        if let Some(t) = rq.index_of(v.tau()) {
            d -= h[t];
        }
        if d < 0 {
            return Err(Error::Inconsistent(format!("negative knitted dimension at {}", rq.vertex_key(v))));
        }
        h[y] = d;
    }
    Ok(h.into_iter().map(|d| d as usize).collect())
}

/// Arrows of the repetition quiver leaving `y`, with multiplicity.
fn arrows_out_of(q: &Quiver, y: RepVertex) -> Vec<RepVertex> {
    let mut out = Vec::new();
    for (a, arr) in q.arrows().iter().enumerate() {
        if arr.source == y.node {
            out.push(RepArrow { level: y.level, kind: ArrowKind::Inherited(a) }.target(q));
        }
        if arr.target == y.node {
            out.push(RepArrow { level: y.level + 1, kind: ArrowKind::Reversed(a) }.target(q));
        }
    }
    out
}

/// `(C v)(x) = v(x) - sum over arrows y -> x of v(y) + v(tau x)`.
pub fn cartan_apply(q: &Quiver, v: &VertexVector) -> VertexVector {
    let mut out = VertexVector::new();
    let mut add = |x: RepVertex, c: i64| {
        let e = out.entry(x).or_insert(0);
        *e += c;
    };
    for (&y, &c) in v {
        if c == 0 {
            continue;
        }
        add(y, c);
        for z in arrows_out_of(q, y) {
            add(z, -c);
        }
        add(y.tau_inv(), c);
    }
    out.retain(|_, c| *c != 0);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CartanSolution {
    Solved(VertexVector),
    /// No solution is supported inside the window. The certificate `y`
    /// satisfies `y . C = 0` on window-supported vectors and `y . m != 0`.
    NoSolutionInWindow { certificate: VertexVector },
}

/// Solves `C d = m` by forward substitution, level by level.
pub fn cartan_solve(q: &Quiver, m: &VertexVector, window: Window) -> Result<CartanSolution> {
    let m: VertexVector = m.iter().filter(|(_, &c)| c != 0).map(|(&k, &c)| (k, c)).collect();
    if let Some(bad) = m.keys().find(|x| x.frozen || !window.contains(x.level)) {
        return Err(Error::WindowInsufficient(format!("{} lies outside window {window}", bad.key(q))));
    }
    let Some(first) = m.keys().map(|x| x.level).min() else {
        return Ok(CartanSolution::Solved(VertexVector::new()));
    };
    let last = m.keys().map(|x| x.level).max().unwrap_or(first);
    let mut nodes: Vec<usize> = (0..q.vertex_count()).collect();
    nodes.sort_by_key(|&i| q.rank(i));
    let mut d = VertexVector::new();
    for level in first..=window.hi {
        let mut level_zero = true;
        for &i in &nodes {
            let x = RepVertex::new(i, level);
            let mut val = m.get(&x).copied().unwrap_or(0) - d.get(&x.tau()).copied().unwrap_or(0);
            for arr in crate::quiver::repetition_arrows_into(q, x) {
                val += d.get(&arr.source(q)).copied().unwrap_or(0);
            }
            if val != 0 {
                d.insert(x, val);
                level_zero = false;
            }
        }
        if level_zero && level >= last {
            return Ok(CartanSolution::Solved(d));
        }
    }
    Ok(CartanSolution::NoSolutionInWindow { certificate: cartan_certificate(q, &m, window) })
}

/// Left null vector of the window-restricted Cartan system that pairs nontrivially with `m`.
fn cartan_certificate(q: &Quiver, m: &VertexVector, window: Window) -> VertexVector {
    let n = q.vertex_count();
    let unknowns: Vec<RepVertex> =
        window.levels().flat_map(|p| (0..n).map(move |i| RepVertex::new(i, p))).collect();
    let equations: Vec<RepVertex> =
        (window.lo..=window.hi + 1).flat_map(|p| (0..n).map(move |i| RepVertex::new(i, p))).collect();
    let row_of: BTreeMap<RepVertex, usize> = equations.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let mut a: Matrix<Q> = Matrix::zeros(equations.len(), unknowns.len());
    for (c, &u) in unknowns.iter().enumerate() {
        let col = cartan_apply(q, &VertexVector::from([(u, 1)]));
        for (x, v) in col {
            let r = row_of[&x];
            a.set(r, c, Q::from_i64(v));
        }
    }
    let rhs: Vec<Q> = equations.iter().map(|x| Q::from_i64(m.get(x).copied().unwrap_or(0))).collect();
    match a.solve(&rhs) {
        Ok(_) => panic!("forward substitution and the window system disagree"),
        Err(y) => {
            // clear denominators so the certificate is integral
            let mut lcm = num_bigint::BigInt::from(1);
            for v in &y {
                lcm = num_integer_lcm(&lcm, v.denom());
            }
            equations
                .iter()
                .zip(&y)
                .filter(|(_, v)| !v.is_zero())
                .map(|(&x, v)| {
                    let scaled = v.0.clone() * num_rational::BigRational::from_integer(lcm.clone());
                    let int = scaled.to_integer();
                    (x, i64::try_from(int).expect("certificate entry fits in i64"))
                })
                .collect()
        }
    }
}

fn num_integer_lcm(a: &num_bigint::BigInt, b: &num_bigint::BigInt) -> num_bigint::BigInt {
    use num_traits::{Signed, Zero};
    let (mut x, mut y) = (a.abs(), b.abs());
    let prod = &x * &y;
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    prod / x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec;

    fn quiver(n: &[&str], a: &[(&str, &str, &str)]) -> Arc<Quiver> {
        Arc::new(Quiver::new(n, a).unwrap())
    }

    fn a2() -> Arc<Quiver> {
        quiver(&["1", "2"], &[("a", "1", "2")])
    }

    #[test]
    fn classifies_ade() {
        let d4 = quiver(&["0", "1", "2", "3"], &[("a", "0", "1"), ("b", "0", "2"), ("c", "0", "3")]);
        assert_eq!(classify(&d4), vec![Some(DynkinType::D(4))]);
        let e6 = quiver(
            &["1", "2", "3", "4", "5", "6"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4"), ("d", "4", "5"), ("e", "3", "6")],
        );
        assert_eq!(classify(&e6), vec![Some(DynkinType::E(6))]);
        let kron = quiver(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]);
        assert!(!is_dynkin(&kron));
        let cyc = quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")]);
        assert!(!is_dynkin(&cyc));
    }

    #[test]
    fn nakayama_on_a2() {
        let nk = Nakayama::compute(&a2()).unwrap();
        // on the zigzag line 1@0 -> 2@0 -> 1@1 -> 2@1 -> ... nu is one step forward
        assert_eq!(nk.nu(RepVertex::new(0, 0)), RepVertex::new(1, 0));
        assert_eq!(nk.nu(RepVertex::new(1, 0)), RepVertex::new(0, 1));
        assert_eq!(nk.sigma_shift(RepVertex::new(1, 0), 1), RepVertex::new(0, 2));
        assert_eq!(nk.sigma_shift(nk.sigma_shift(RepVertex::new(1, 0), 1), -1), RepVertex::new(1, 0));
    }

    #[test]
    fn nu_search_needs_room() {
        let cat: MeshCategory<Q> = MeshCategory::new(Arc::new(RepQuiver::repetition(a2(), Window::new(0, 0).unwrap())));
        assert!(matches!(nu_search(&cat, RepVertex::new(1, 0)), Err(Error::WindowInsufficient(_))));
    }

    #[test]
    fn cartan_round_trip() {
        let q = a2();
        let v = VertexVector::from([(RepVertex::new(0, 1), 1)]);
        let m = cartan_apply(&q, &v);
        let w = Window::new(0, 6).unwrap();
        assert_eq!(cartan_solve(&q, &m, w).unwrap(), CartanSolution::Solved(v));
    }

    #[test]
    fn cartan_single_vertex_has_no_solution() {
        let q = a2();
        let m = VertexVector::from([(RepVertex::new(0, 1), 1)]);
        let w = Window::new(0, 5).unwrap();
        let CartanSolution::NoSolutionInWindow { certificate } = cartan_solve(&q, &m, w).unwrap() else {
            panic!("e_x is not in the image of C");
        };
        let pairing: i64 = certificate.iter().map(|(x, y)| y * m.get(x).copied().unwrap_or(0)).sum();
        assert_ne!(pairing, 0);
    }

    #[test]
    fn non_dynkin_has_no_shift() {
        let kron = quiver(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]);
        let dq = DerivedCategory::new(kron, Window::new(0, 4).unwrap()).unwrap();
        assert!(matches!(dq.sigma_shift(RepVertex::new(0, 0), 1), Err(Error::NotDynkin(_))));
        assert_eq!(dq.hom_dq(RepVertex::new(0, 0), 2, RepVertex::new(0, 1)).unwrap(), 0);
        assert_eq!(dq.hom_dq(RepVertex::new(0, 0), -1, RepVertex::new(0, 1)).unwrap(), 0);
    }
}
