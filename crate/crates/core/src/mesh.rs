//! Hom spaces of mesh categories by a level sweep.
//!
//! For a fixed source `u` the functor `Hom(u, -)` is built vertex by vertex in
//! topological order: at `x` it is the direct sum of `Hom(u, y)` over arrows
//! `y -> x`, divided by the image of `Hom(u, tau x)` under the mesh relator
//! when `x` carries one. Basis vectors are the standard coordinates that the
//! quotient keeps, so every basis element is represented by a single path.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use once_cell::race::OnceBox;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Quotient};
use crate::quiver::{RepQuiver, RepVertex};

/// Which mesh category a window describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    /// The mesh category of the repetition quiver.
    Repetition,
    /// The framed mesh category with the frozen vertices outside `sigma^-1(C)` removed.
    Framed,
    /// Its full subcategory on the retained frozen vertices.
    Singular,
}

/// `Hom(u, -)` on a window, as a covariant representation.
#[derive(Debug)]
pub struct HomFunctor<F: Field> {
    source: usize,
    dims: Vec<usize>,
    /// For each basis element: the arrow it ends with and the basis index it
    /// extends at the arrow's source. `None` for the identity.
    origin: Vec<Vec<Option<(usize, usize)>>>,
    /// Postcomposition with each arrow, `dim(target) x dim(source)`.
    arrow_maps: Vec<Matrix<F>>,
}

impl<F: Field> HomFunctor<F> {
    fn sweep(rq: &RepQuiver, source: usize) -> Self {
        let n = rq.vertices().len();
        let mut dims = vec![0usize; n];
        let mut origin: Vec<Vec<Option<(usize, usize)>>> = vec![Vec::new(); n];
        let mut arrow_maps: Vec<Matrix<F>> = rq.arrows().iter().map(|_| Matrix::zeros(0, 0)).collect();
        dims[source] = 1;
        origin[source] = vec![None];
        for t in source + 1..n {
            let incoming = rq.incoming(t);
            let offsets: Vec<usize> = incoming
                .iter()
                .scan(0, |acc, &b| {
                    let o = *acc;
                    *acc += dims[rq.ends(b).0];
                    Some(o)
                })
                .collect();
            let total: usize = incoming.iter().map(|&b| dims[rq.ends(b).0]).sum();
            if total == 0 {
                for &b in incoming {
                    arrow_maps[b] = Matrix::zeros(0, 0);
                }
                continue;
            }
            let mut span = Matrix::zeros(total, 0);
            if rq.has_mesh(t) {
                let tau = rq.index_of(rq.vertex(t).tau()).expect("tau inside window");
                if dims[tau] > 0 {
                    let terms = rq.mesh_terms(t);
                    span = Matrix::zeros(total, dims[tau]);
                    for (k, &(b, s)) in terms.iter().enumerate() {
                        debug_assert_eq!(incoming[k], b);
                        let block = &arrow_maps[s];
                        span.put(offsets[k], 0, block);
                    }
                }
            }
            let quo = Quotient::new(&span);
            dims[t] = quo.dim();
            origin[t] = quo
                .kept
                .iter()
                .map(|&c| {
                    let k = (0..incoming.len())
                        .find(|&k| offsets[k] <= c && c < offsets[k] + dims[rq.ends(incoming[k]).0])
                        .expect("coordinate inside some block");
                    Some((incoming[k], c - offsets[k]))
                })
                .collect();
            for (k, &b) in incoming.iter().enumerate() {
                let d = dims[rq.ends(b).0];
                let cols: Vec<usize> = (offsets[k]..offsets[k] + d).collect();
                arrow_maps[b] = quo.projection.select_columns(&cols);
            }
        }
        // arrows whose source is unreachable or whose target lies before the sweep
        for (b, m) in arrow_maps.iter_mut().enumerate() {
            let (s, t) = rq.ends(b);
            if m.rows() != dims[t] || m.cols() != dims[s] {
                *m = Matrix::zeros(dims[t], dims[s]);
            }
        }
        HomFunctor { source, dims, origin, arrow_maps }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn dim(&self, target: usize) -> usize {
        self.dims[target]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Postcomposition with arrow `b`.
    pub fn arrow_map(&self, b: usize) -> &Matrix<F> {
        &self.arrow_maps[b]
    }

    /// Arrows of the path representing basis element `k` at `target`, from source to target.
    pub fn basis_path(&self, rq: &RepQuiver, target: usize, k: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let (mut v, mut k) = (target, k);
        while let Some((b, j)) = self.origin[v][k] {
            path.push(b);
            v = rq.ends(b).0;
            k = j;
        }
        path.reverse();
        path
    }

    /// Origin of basis element `k` at `target`.
    pub fn origin(&self, target: usize, k: usize) -> Option<(usize, usize)> {
        self.origin[target][k]
    }

    /// Pushes `f`, an element of `Hom(u, y)`, along a path starting at `y`.
    pub fn push(&self, f: &[F], path: &[usize]) -> Vec<F> {
        let mut v = f.to_vec();
        for &b in path {
            v = self.arrow_maps[b].mul_vec(&v);
        }
        v
    }
}

/// A mesh category on a window with an append-only cache of `Hom(u, -)`.
///
/// Cache slots are write-once; concurrent readers never observe a partially
/// built functor, and racing writers compute identical values.
pub struct MeshCategory<F: Field> {
    rq: Arc<RepQuiver>,
    cache: Vec<OnceBox<HomFunctor<F>>>,
}

impl<F: Field> core::fmt::Debug for MeshCategory<F> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("MeshCategory").field("window", &self.rq.window()).finish()
    }
}

impl<F: Field> MeshCategory<F> {
    pub fn new(rq: Arc<RepQuiver>) -> Self {
        let cache = (0..rq.vertices().len()).map(|_| OnceBox::new()).collect();
        MeshCategory { rq, cache }
    }

    pub fn quiver(&self) -> &Arc<RepQuiver> {
        &self.rq
    }

    pub fn flavor(&self) -> Flavor {
        if self.rq.framed() {
            Flavor::Framed
        } else {
            Flavor::Repetition
        }
    }

    /// `Hom(u, -)` for the vertex with index `u`.
    pub fn functor(&self, u: usize) -> &HomFunctor<F> {
        self.cache[u].get_or_init(|| alloc::boxed::Box::new(HomFunctor::sweep(&self.rq, u)))
    }

    pub fn index(&self, v: RepVertex) -> Result<usize> {
        self.rq.index_of(v).ok_or_else(|| {
            Error::WindowInsufficient(alloc::format!(
                "{} is outside window {}",
                self.rq.vertex_key(v),
                self.rq.window()
            ))
        })
    }

    pub fn dim(&self, a: usize, b: usize) -> usize {
        self.functor(a).dim(b)
    }

    pub fn dim_between(&self, a: RepVertex, b: RepVertex) -> Result<usize> {
        Ok(self.dim(self.index(a)?, self.index(b)?))
    }

    /// Basis paths of `Hom(a, b)`.
    pub fn basis(&self, a: usize, b: usize) -> Vec<Vec<usize>> {
        let h = self.functor(a);
        (0..h.dim(b)).map(|k| h.basis_path(&self.rq, b, k)).collect()
    }

    /// `g . f` for `f` in `Hom(a, b)` and `g` in `Hom(b, c)`, in coordinates.
    pub fn compose(&self, a: usize, b: usize, c: usize, f: &[F], g: &[F]) -> Vec<F> {
        let ha = self.functor(a);
        let hb = self.functor(b);
        let mut out = vec![F::zero(); ha.dim(c)];
        for (k, coeff) in g.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let path = hb.basis_path(&self.rq, c, k);
            let pushed = ha.push(f, &path);
            for (o, p) in out.iter_mut().zip(&pushed) {
                *o = o.add(&coeff.mul(p));
            }
        }
        out
    }

    /// Precomposition with `f` in `Hom(a, b)`, as maps `Hom(b, x) -> Hom(a, x)` for every `x`.
    pub fn precomposition(&self, a: usize, b: usize, f: &[F]) -> Vec<Matrix<F>> {
        let ha = self.functor(a);
        let hb = self.functor(b);
        let n = self.rq.vertices().len();
        let mut maps: Vec<Matrix<F>> = (0..n).map(|x| Matrix::zeros(ha.dim(x), hb.dim(x))).collect();
        if hb.dim(b) == 0 {
            return maps;
        }
        maps[b] = Matrix::from_columns(ha.dim(b), &[f.to_vec()]);
        for x in b + 1..n {
            let d = hb.dim(x);
            if d == 0 {
                continue;
            }
            let cols: Vec<Vec<F>> = (0..d)
                .map(|k| {
                    let (arrow, j) = hb.origin(x, k).expect("non-identity basis element");
                    let y = self.rq.ends(arrow).0;
                    ha.arrow_map(arrow).mul_vec(&maps[y].column(j))
                })
                .collect();
            maps[x] = Matrix::from_columns(ha.dim(x), &cols);
        }
        maps
    }

    /// Matrix of postcomposition along a path from `Hom(a, start)`.
    pub fn path_map(&self, a: usize, path: &[usize], start: usize) -> Matrix<F> {
        let h = self.functor(a);
        let mut m = Matrix::identity(h.dim(start));
        for &b in path {
            m = h.arrow_map(b).mul(&m);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::quiver::{Configuration, Quiver, Window};

    fn a2_rep(lo: i64, hi: i64) -> MeshCategory<Q> {
        let q = Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap());
        MeshCategory::new(Arc::new(RepQuiver::repetition(q, Window::new(lo, hi).unwrap())))
    }

    #[test]
    fn a2_consecutive_composition_vanishes() {
        let cat = a2_rep(0, 2);
        let x = cat.index(RepVertex::new(0, 0)).unwrap();
        let dims: Vec<usize> = [(0, 0), (1, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(i, p)| cat.dim(x, cat.index(RepVertex::new(i, p)).unwrap()))
            .collect();
        assert_eq!(dims, vec![1, 1, 0, 0]);
    }

    #[test]
    fn compose_identity() {
        let cat = a2_rep(0, 3);
        let a = cat.index(RepVertex::new(0, 1)).unwrap();
        let b = cat.index(RepVertex::new(1, 1)).unwrap();
        let f = vec![Q::one()];
        assert_eq!(cat.compose(a, a, b, &[Q::one()], &f), f);
        assert_eq!(cat.compose(a, b, b, &f, &[Q::one()]), f);
    }

    #[test]
    fn framed_hom_between_frozen() {
        let q = Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap());
        let rq = RepQuiver::new(q, true, Window::new(0, 1).unwrap(), Configuration::All);
        let cat: MeshCategory<Q> = MeshCategory::new(Arc::new(rq));
        let d = cat.dim_between(RepVertex::frozen(0, 0), RepVertex::frozen(1, 1)).unwrap();
        assert_eq!(d, 1);
        assert!(matches!(cat.dim_between(RepVertex::new(0, 5), RepVertex::new(0, 0)), Err(Error::WindowInsufficient(_))));
    }
}
