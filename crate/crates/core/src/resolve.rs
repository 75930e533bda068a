//! Minimal projective resolutions over directed categories with finite Hom
//! spaces, used for Ext between simple modules of the singular category and
//! for the weak Gorenstein check.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Quotient};
use crate::mesh::MeshCategory;
use alloc::sync::Arc;

use crate::quiver::{RepQuiver, RepVertex, Window};
use crate::rep::{DimVector, SModule};

/// A category with finitely many objects and finite-dimensional Hom spaces
/// in fixed bases.
pub trait Directed<F: Field> {
    fn objects(&self) -> usize;

    fn hom_dim(&self, a: usize, b: usize) -> usize;

    /// `g . f` for `f` in `Hom(a, b)` and `g` in `Hom(b, c)`.
    fn compose(&self, a: usize, b: usize, c: usize, f: &[F], g: &[F]) -> Vec<F>;

    /// Precomposition with `f` in `Hom(a, b)`, as maps `Hom(b, u) -> Hom(a, u)` for every `u`.
    fn precompose(&self, a: usize, b: usize, f: &[F]) -> Vec<Matrix<F>> {
        (0..self.objects())
            .map(|u| {
                let cols: Vec<Vec<F>> =
                    (0..self.hom_dim(b, u)).map(|k| self.compose(a, b, u, f, &unit(self.hom_dim(b, u), k))).collect();
                Matrix::from_columns(self.hom_dim(a, u), &cols)
            })
            .collect()
    }
}

fn unit<F: Field>(n: usize, k: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[k] = F::one();
    v
}

/// The full subcategory of a framed mesh category on the retained frozen vertices of its window.
pub struct FrozenPart<'a, F: Field> {
    cat: &'a MeshCategory<F>,
    members: Vec<usize>,
}

impl<'a, F: Field> FrozenPart<'a, F> {
    pub fn new(cat: &'a MeshCategory<F>) -> Self {
        let rq = cat.quiver();
        let members = (0..rq.vertices().len()).filter(|&v| rq.vertex(v).frozen).collect();
        FrozenPart { cat, members }
    }

    pub fn vertex(&self, obj: usize) -> RepVertex {
        self.cat.quiver().vertex(self.members[obj])
    }

    pub fn object(&self, v: RepVertex) -> Result<usize> {
        let idx = self.cat.index(v)?;
        self.members
            .binary_search(&idx)
            .map_err(|_| Error::InvalidInput(format!("{} is not a retained frozen vertex", self.cat.quiver().vertex_key(v))))
    }

    /// Module over this category from a module given on frozen vertices.
    pub fn module(&self, m: &SModule<F>) -> Result<Module<F>> {
        let mut dims = vec![0; self.members.len()];
        for (&v, &d) in m.dims() {
            dims[self.object(v)?] = d;
        }
        let mut actions = BTreeMap::new();
        for a in 0..self.objects() {
            for b in 0..self.objects() {
                let h = self.hom_dim(a, b);
                if a == b || h == 0 || dims[a] == 0 || dims[b] == 0 {
                    continue;
                }
                let (va, vb) = (self.vertex(a), self.vertex(b));
                actions.insert((a, b), (0..h).map(|k| m.act(va, vb, &unit(h, k))).collect());
            }
        }
        Ok(Module { dims, actions })
    }
}

impl<F: Field> Directed<F> for FrozenPart<'_, F> {
    fn objects(&self) -> usize {
        self.members.len()
    }

    fn hom_dim(&self, a: usize, b: usize) -> usize {
        self.cat.dim(self.members[a], self.members[b])
    }

    fn compose(&self, a: usize, b: usize, c: usize, f: &[F], g: &[F]) -> Vec<F> {
        self.cat.compose(self.members[a], self.members[b], self.members[c], f, g)
    }

    fn precompose(&self, a: usize, b: usize, f: &[F]) -> Vec<Matrix<F>> {
        let all = self.cat.precomposition(self.members[a], self.members[b], f);
        self.members.iter().map(|&u| all[u].clone()).collect()
    }
}

/// The opposite category.
pub struct Opposite<'a, C>(pub &'a C);

impl<F: Field, C: Directed<F>> Directed<F> for Opposite<'_, C> {
    fn objects(&self) -> usize {
        self.0.objects()
    }

    fn hom_dim(&self, a: usize, b: usize) -> usize {
        self.0.hom_dim(b, a)
    }

    fn compose(&self, a: usize, b: usize, c: usize, f: &[F], g: &[F]) -> Vec<F> {
        self.0.compose(c, b, a, g, f)
    }
}

/// A right module: a contravariant functor to vector spaces, given by the
/// matrices of the basis morphisms. `f: a -> b` acts by a `dim a x dim b` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module<F: Field> {
    pub dims: Vec<usize>,
    pub actions: BTreeMap<(usize, usize), Vec<Matrix<F>>>,
}

impl<F: Field> Module<F> {
    pub fn simple(objects: usize, at: usize) -> Self {
        let mut dims = vec![0; objects];
        dims[at] = 1;
        Module { dims, actions: BTreeMap::new() }
    }

    /// The representable `Hom(-, u)`.
    pub fn representable<C: Directed<F>>(cat: &C, u: usize) -> Self {
        let n = cat.objects();
        let dims: Vec<usize> = (0..n).map(|a| cat.hom_dim(a, u)).collect();
        let mut actions = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                let h = cat.hom_dim(a, b);
                if a == b || h == 0 || dims[a] == 0 || dims[b] == 0 {
                    continue;
                }
                actions.insert((a, b), (0..h).map(|k| cat.precompose(a, b, &unit(h, k))[u].clone()).collect());
            }
        }
        Module { dims, actions }
    }

    /// The dual, a right module over the opposite category.
    pub fn dual(&self) -> Self {
        let actions =
            self.actions.iter().map(|(&(a, b), ms)| ((b, a), ms.iter().map(Matrix::transpose).collect())).collect();
        Module { dims: self.dims.clone(), actions }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Action of `f` in `Hom(a, b)`.
    pub fn act(&self, a: usize, b: usize, f: &[F]) -> Matrix<F> {
        if a == b {
            return Matrix::identity(self.dims[a]).scale(&f[0]);
        }
        let mut out = Matrix::zeros(self.dims[a], self.dims[b]);
        if let Some(ms) = self.actions.get(&(a, b)) {
            for (m, c) in ms.iter().zip(f) {
                if !c.is_zero() {
                    out = out.add(&m.scale(c));
                }
            }
        }
        out
    }

    /// Dimension of the top at each object.
    pub fn top(&self, hom_dim: impl Fn(usize, usize) -> usize) -> Vec<usize> {
        (0..self.dims.len())
            .map(|u| self.dims[u] - self.radical(u, &hom_dim).rank())
            .collect()
    }

    fn radical(&self, u: usize, hom_dim: &impl Fn(usize, usize) -> usize) -> Matrix<F> {
        let mut blocks = Vec::new();
        for b in 0..self.dims.len() {
            let h = hom_dim(u, b);
            if b == u || h == 0 || self.dims[b] == 0 {
                continue;
            }
            blocks.extend((0..h).map(|k| self.act(u, b, &unit(h, k))));
        }
        let refs: Vec<&Matrix<F>> = blocks.iter().collect();
        Matrix::hstack(self.dims[u], &refs)
    }
}

/// One step of a minimal projective resolution.
#[derive(Clone, Debug)]
pub struct Term<F: Field> {
    /// Objects of the indecomposable projective summands, with repetition.
    pub generators: Vec<usize>,
    /// For each generator at `v`, its image in the previous term evaluated at `v`,
    /// in the coordinates `sum over previous generators g of Hom(v, g)`.
    /// Empty for the first term.
    pub images: Vec<Vec<F>>,
}

impl<F: Field> Term<F> {
    pub fn multiplicity(&self, obj: usize) -> usize {
        self.generators.iter().filter(|&&g| g == obj).count()
    }
}

fn layout<F: Field, C: Directed<F>>(cat: &C, gens: &[usize], a: usize) -> Vec<usize> {
    let mut offs = Vec::with_capacity(gens.len() + 1);
    let mut acc = 0;
    for &g in gens {
        offs.push(acc);
        acc += cat.hom_dim(a, g);
    }
    offs.push(acc);
    offs
}

/// The first `length + 1` terms `P_0, ..., P_length` of a minimal projective resolution.
pub fn minimal_resolution<F: Field, C: Directed<F>>(cat: &C, n: &Module<F>, length: usize) -> Vec<Term<F>> {
    let objs = cat.objects();
    let mut precomp: BTreeMap<(usize, usize, usize), Vec<Matrix<F>>> = BTreeMap::new();
    let mut pre = |a: usize, b: usize, k: usize| -> Vec<Matrix<F>> {
        precomp.entry((a, b, k)).or_insert_with(|| cat.precompose(a, b, &unit(cat.hom_dim(a, b), k))).clone()
    };
    let mut module = n.clone();
    // embedding of the current module into the previous projective, per object
    let mut embed: Option<Vec<Matrix<F>>> = None;
    let mut terms = Vec::new();
    for _ in 0..=length {
        // generators lift a basis of the top
        let mut gens: Vec<(usize, Vec<F>)> = Vec::new();
        for u in 0..objs {
            if module.dims[u] == 0 {
                continue;
            }
            let rad = module.radical(u, &|a, b| cat.hom_dim(a, b));
            let quo = Quotient::new(&rad);
            gens.extend(quo.kept.iter().map(|&k| (u, unit(module.dims[u], k))));
        }
        let generators: Vec<usize> = gens.iter().map(|(u, _)| *u).collect();
        let images = match &embed {
            Some(e) => gens.iter().map(|(u, v)| e[*u].mul_vec(v)).collect(),
            None => Vec::new(),
        };
        terms.push(Term { generators: generators.clone(), images });
        if gens.is_empty() {
            break;
        }
        // kernel of the cover, pointwise
        let mut kernels: Vec<Matrix<F>> = Vec::with_capacity(objs);
        for a in 0..objs {
            let offs = layout(cat, &generators, a);
            let size = offs[offs.len() - 1];
            let mut cover = Matrix::zeros(module.dims[a], size);
            for (g, (u, v)) in gens.iter().enumerate() {
                let h = cat.hom_dim(a, *u);
                for l in 0..h {
                    let col = module.act(a, *u, &unit(h, l)).mul_vec(v);
                    for (r, x) in col.into_iter().enumerate() {
                        cover.set(r, offs[g] + l, x);
                    }
                }
            }
            kernels.push(cover.kernel());
        }
        let dims: Vec<usize> = kernels.iter().map(Matrix::cols).collect();
        if dims.iter().all(|&d| d == 0) {
            if terms.len() <= length {
                terms.push(Term { generators: Vec::new(), images: Vec::new() });
            }
            break;
        }
        // action on the kernel: restriction of precomposition on the projective
        let mut actions = BTreeMap::new();
        for a in 0..objs {
            for b in 0..objs {
                let h = cat.hom_dim(a, b);
                if a == b || h == 0 || dims[a] == 0 || dims[b] == 0 {
                    continue;
                }
                let (oa, ob) = (layout(cat, &generators, a), layout(cat, &generators, b));
                let mats = (0..h)
                    .map(|k| {
                        let maps = pre(a, b, k);
                        let mut pf = Matrix::zeros(oa[oa.len() - 1], ob[ob.len() - 1]);
                        for (g, &u) in generators.iter().enumerate() {
                            pf.put(oa[g], ob[g], &maps[u]);
                        }
                        kernels[a]
                            .solve_matrix(&pf.mul(&kernels[b]))
                            .expect("kernel of a module map is a submodule")
                    })
                    .collect();
                actions.insert((a, b), mats);
            }
        }
        module = Module { dims, actions };
        embed = Some(kernels);
    }
    terms
}

/// `dim Ext^p(N, X)` from a minimal projective resolution of `N` with at least `p + 2` terms.
pub fn ext_from_resolution<F: Field, C: Directed<F>>(cat: &C, terms: &[Term<F>], x: &Module<F>, p: usize) -> usize {
    let hom_space = |t: &Term<F>| -> Vec<usize> {
        let mut offs = Vec::with_capacity(t.generators.len() + 1);
        let mut acc = 0;
        for &g in &t.generators {
            offs.push(acc);
            acc += x.dims[g];
        }
        offs.push(acc);
        offs
    };
    // delta_q: Hom(P_q, X) -> Hom(P_{q+1}, X)
    let delta = |q: usize| -> Matrix<F> {
        let empty = Term { generators: Vec::new(), images: Vec::new() };
        let (src, dst) = (&terms[q], terms.get(q + 1).unwrap_or(&empty));
        let (so, dso) = (hom_space(src), hom_space(dst));
        let mut m = Matrix::zeros(dso[dso.len() - 1], so[so.len() - 1]);
        for (gi, (&v, image)) in dst.generators.iter().zip(&dst.images).enumerate() {
            let offs = layout(cat, &src.generators, v);
            for (g, &u) in src.generators.iter().enumerate() {
                let c = &image[offs[g]..offs[g + 1]];
                if c.iter().all(Field::is_zero) {
                    continue;
                }
                m.put(dso[gi], so[g], &x.act(v, u, c));
            }
        }
        m
    };
    let hp = hom_space(&terms[p]);
    let dim = hp[hp.len() - 1];
    let ker = dim - delta(p).rank();
    let im = if p == 0 { 0 } else { delta(p - 1).rank() };
    ker - im
}

/// `dim Ext^p(S_x, S_y)` over the singular category, read off as the multiplicity
/// of the projective at `y` in the `p`-th term of a minimal resolution of `S_x`.
pub fn ext_oracle<F: Field>(cat: &MeshCategory<F>, x: RepVertex, y: RepVertex, p: usize) -> Result<usize> {
    let frozen = FrozenPart::new(cat);
    frozen.object(y)?;
    Ok(ext_row(cat, x, p)?.get(&y).copied().unwrap_or(0))
}

/// `dim Ext^p(S_x, S_y)` for every frozen `y` of the window at once.
pub fn ext_row<F: Field>(cat: &MeshCategory<F>, x: RepVertex, p: usize) -> Result<DimVector> {
    let frozen = FrozenPart::new(cat);
    let xo = frozen.object(x)?;
    let terms = minimal_resolution(&frozen, &Module::simple(frozen.objects(), xo), p);
    let mut row = DimVector::new();
    if let Some(t) = terms.get(p) {
        for &g in &t.generators {
            *row.entry(frozen.vertex(g)).or_insert(0) += 1;
        }
    }
    Ok(row)
}

/// `ext_row` computed on the levels `[level(x) - depth, level(x)]` only.
///
/// A level interval is convex (every path between two of its vertices stays
/// inside), and Ext groups between simples of a convex subcategory of a
/// directed category agree with those of the whole category. So the row is
/// exact for every `y` in the interval, at a fraction of the cost.
pub fn ext_row_local<F: Field>(rq: &RepQuiver, x: RepVertex, p: usize, depth: i64) -> Result<DimVector> {
    let w = rq.window();
    if !w.contains(x.level) {
        return Err(Error::WindowInsufficient(format!("{} is outside window {w}", rq.vertex_key(x))));
    }
    let sub = Window::new((x.level - depth).max(w.lo), x.level)?;
    let cat = MeshCategory::<F>::new(Arc::new(rq.with_window(sub)));
    ext_row(&cat, x, p)
}

/// Generator vertices of the first terms of a minimal projective resolution of `S_x`.
pub fn simple_resolution<F: Field>(cat: &MeshCategory<F>, x: RepVertex, length: usize) -> Result<Vec<Vec<RepVertex>>> {
    let frozen = FrozenPart::new(cat);
    let xo = frozen.object(x)?;
    let terms = minimal_resolution(&frozen, &Module::simple(frozen.objects(), xo), length);
    Ok(terms.iter().map(|t| t.generators.iter().map(|&g| frozen.vertex(g)).collect()).collect())
}

/// `dim Ext^p(I, M)` for the injective `I` cogenerated at the frozen vertex `s`,
/// computed as `Ext^p(DM, Hom(s, -))` over the opposite category.
///
/// Fails with window insufficiency when a projective summand of the resolution
/// comes within `margin` levels of the top of the window.
pub fn injective_ext<F: Field>(cat: &MeshCategory<F>, s: RepVertex, m: &SModule<F>, p: usize, margin: i64) -> Result<usize> {
    let frozen = FrozenPart::new(cat);
    let so = frozen.object(s)?;
    let dm = frozen.module(m)?.dual();
    let op = Opposite(&frozen);
    let terms = minimal_resolution(&op, &dm, p + 1);
    let hi = cat.quiver().window().hi;
    for (q, t) in terms.iter().enumerate() {
        if let Some(&g) = t.generators.iter().find(|&&g| frozen.vertex(g).level > hi - margin) {
            return Err(Error::WindowInsufficient(format!(
                "term {q} of the resolution reaches {}",
                cat.quiver().vertex_key(frozen.vertex(g))
            )));
        }
    }
    let x = Module::representable(&op, so);
    Ok(ext_from_resolution(&op, &terms, &x, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::quiver::{Configuration, Quiver, RepQuiver, Window};
    use alloc::sync::Arc;

    fn cat(q: Quiver, lo: i64, hi: i64) -> MeshCategory<Q> {
        let rq = RepQuiver::new(Arc::new(q), true, Window::new(lo, hi).unwrap(), Configuration::All);
        MeshCategory::new(Arc::new(rq))
    }

    #[test]
    fn a1_simple_has_projective_dimension_one_step_per_level() {
        // for A1 the singular category is a line of arrows with zero compositions
        let c = cat(Quiver::new(&["1"], &[]).unwrap(), 0, 6);
        let res = simple_resolution(&c, RepVertex::frozen(0, 4), 3).unwrap();
        assert_eq!(res[0], alloc::vec![RepVertex::frozen(0, 4)]);
        assert_eq!(res[1], alloc::vec![RepVertex::frozen(0, 3)]);
        assert_eq!(res[2], alloc::vec![RepVertex::frozen(0, 2)]);
    }

    #[test]
    fn kronecker_second_syzygy_vanishes() {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
        let c = cat(q, 0, 5);
        let res = simple_resolution(&c, RepVertex::frozen(0, 5), 2).unwrap();
        assert!(!res[1].is_empty());
        assert!(res[2].is_empty());
    }

    #[test]
    fn dual_of_dual_is_identity() {
        let c = cat(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap(), 0, 3);
        let frozen = FrozenPart::new(&c);
        let p = Module::representable(&frozen, 5);
        assert_eq!(p.dual().dual(), p);
    }
}
