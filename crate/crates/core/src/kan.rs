//! Kan extensions along the inclusion of the frozen vertices, and the
//! stratum data read off from them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::derived::{cartan_apply, cartan_solve, is_dynkin, CartanSolution, VertexVector};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Quotient};
use crate::mesh::MeshCategory;
use crate::quiver::{ArrowKind, RepArrow, RepVertex, Window};
use crate::rep::{DimVector, SModule, WindowRep};

fn check_support<F: Field>(cat: &MeshCategory<F>, m: &SModule<F>) -> Result<Vec<usize>> {
    let rq = cat.quiver();
    m.dims()
        .keys()
        .map(|&u| {
            let idx = rq.index_of(u).ok_or_else(|| {
                Error::WindowInsufficient(format!("{} is outside window {}", rq.vertex_key(u), rq.window()))
            })?;
            if !u.frozen {
                return Err(Error::InvalidInput(format!("{} is not frozen", rq.vertex_key(u))));
            }
            Ok(idx)
        })
        .collect()
}

/// Right Kan extension `Hom(res x^, M)`, pointwise as solutions of the naturality system.
///
/// At frozen vertices the basis is chosen so that evaluation at the identity is
/// the identity, so the frozen spaces carry the coordinates of `M`.
pub fn kan_right<F: Field>(cat: &MeshCategory<F>, m: &SModule<F>) -> Result<WindowRep<F>> {
    Ok(RightKan::build(cat, m)?.rep)
}

struct RightKan<F: Field> {
    rep: WindowRep<F>,
    /// Per vertex: the frozen sources `u` whose component `eta_u` appears, with offsets.
    layouts: Vec<Vec<(usize, usize)>>,
    /// Per vertex: basis of solutions as columns in the layout coordinates.
    bases: Vec<Matrix<F>>,
}

impl<F: Field> RightKan<F> {
    fn build(cat: &MeshCategory<F>, m: &SModule<F>) -> Result<Self> {
        let rq = cat.quiver();
        let support = check_support(cat, m)?;
        let frozen: Vec<usize> = (0..rq.vertices().len()).filter(|&v| rq.vertex(v).frozen).collect();
        let dim_m = |u: usize| m.dim(rq.vertex(u));
        // precomposition with each basis morphism u' -> u, u' in the support
        let mut precomps: BTreeMap<(usize, usize), Vec<(Matrix<F>, Vec<Matrix<F>>)>> = BTreeMap::new();
        for &u1 in &support {
            for &u in &frozen {
                let h = cat.dim(u1, u);
                if u == u1 || h == 0 {
                    continue;
                }
                let list = (0..h)
                    .map(|k| {
                        let mut g = vec![F::zero(); h];
                        g[k] = F::one();
                        let act = m.act(rq.vertex(u1), rq.vertex(u), &g);
                        (act, cat.precomposition(u1, u, &g))
                    })
                    .collect();
                precomps.insert((u1, u), list);
            }
        }
        let n = rq.vertices().len();
        let mut layouts = Vec::with_capacity(n);
        let mut bases = Vec::with_capacity(n);
        for x in 0..n {
            let mut layout = Vec::new();
            let mut size = 0;
            for &u in &support {
                let h = cat.dim(u, x);
                if h > 0 {
                    layout.push((u, size));
                    size += dim_m(u) * h;
                }
            }
            let offset = |u: usize| layout.iter().find(|(v, _)| *v == u).map(|&(_, o)| o);
            let mut rows: Vec<Vec<F>> = Vec::new();
            for (&(u1, u), list) in &precomps {
                let (hx, h1x) = (cat.dim(u, x), cat.dim(u1, x));
                if hx == 0 || h1x == 0 {
                    continue;
                }
                let o1 = offset(u1).expect("u1 is in the layout");
                let ou = offset(u);
                let (d1, du) = (dim_m(u1), dim_m(u));
                for (act, pre) in list {
                    let gx = &pre[x];
                    // (eta_u1 . G)[r, c] - (M(g) . eta_u)[r, c] = 0
                    for r in 0..d1 {
                        for c in 0..hx {
                            let mut row = vec![F::zero(); size];
                            for k in 0..h1x {
                                let v = gx.get(k, c);
                                if !v.is_zero() {
                                    row[o1 + r * h1x + k] = row[o1 + r * h1x + k].add(v);
                                }
                            }
                            if let Some(ou) = ou {
                                for j in 0..du {
                                    let v = act.get(r, j);
                                    if !v.is_zero() {
                                        row[ou + j * hx + c] = row[ou + j * hx + c].sub(v);
                                    }
                                }
                            }
                            if row.iter().any(|v| !v.is_zero()) {
                                rows.push(row);
                            }
                        }
                    }
                }
            }
            let system = Matrix::from_rows(rows, size);
            let mut basis = system.kernel();
            if rq.vertex(x).frozen && basis.cols() > 0 {
                let o = offset(x).expect("frozen vertex in its own layout");
                let d = dim_m(x);
                // evaluation at the identity, which is the only basis element of Hom(x, x)
                let eval = Matrix::from_fn(d, basis.cols(), |r, c| basis.get(o + r, c).clone());
                let inv = eval.inverse().ok_or_else(|| {
                    Error::Inconsistent(format!("evaluation at {} is not bijective", rq.vertex_key(rq.vertex(x))))
                })?;
                basis = basis.mul(&inv);
            }
            layouts.push(layout);
            bases.push(basis);
        }
        let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
        let mut mats = Vec::with_capacity(rq.arrows().len());
        for b in 0..rq.arrows().len() {
            let (s, t) = rq.ends(b);
            if dims[s] == 0 || dims[t] == 0 {
                mats.push(Matrix::zeros(dims[s], dims[t]));
                continue;
            }
            // (eta . b)_u = eta_u . A_u with A_u postcomposition Hom(u, s) -> Hom(u, t)
            let size_s = bases[s].rows();
            let mut image = Matrix::zeros(size_s, dims[t]);
            for &(u, os) in &layouts[s] {
                let Some(&(_, ot)) = layouts[t].iter().find(|(v, _)| *v == u) else { continue };
                let a = cat.functor(u).arrow_map(b);
                let (hs, ht, d) = (cat.dim(u, s), cat.dim(u, t), dim_m(u));
                for col in 0..dims[t] {
                    for r in 0..d {
                        for c in 0..hs {
                            let mut acc = F::zero();
                            for k in 0..ht {
                                let e = bases[t].get(ot + r * ht + k, col);
                                if !e.is_zero() {
                                    acc = acc.add(&e.mul(a.get(k, c)));
                                }
                            }
                            image.set(os + r * hs + c, col, acc);
                        }
                    }
                }
            }
            let coords = bases[s]
                .solve_matrix(&image)
                .ok_or_else(|| Error::Inconsistent("right Kan extension is not closed under arrows".into()))?;
            mats.push(coords);
        }
        let rep = WindowRep::new(rq.clone(), dims, mats)?;
        Ok(RightKan { rep, layouts, bases })
    }

    /// Coordinates in `K_R(M)(x)` of the transformation with components `eta_u`,
    /// given as a vector in the layout at `x`.
    fn coordinates(&self, x: usize, eta: &[F]) -> Result<Vec<F>> {
        self.bases[x]
            .solve(eta)
            .map_err(|_| Error::Inconsistent("transformation is not natural".into()))
    }
}

/// Left Kan extension `M (x) res x^v`, Dynkin only, with the canonical map to the right one.
pub struct LeftKan<F: Field> {
    pub rep: WindowRep<F>,
    /// Per vertex, the canonical map into the right Kan extension in its basis.
    pub canonical: Vec<Matrix<F>>,
}

pub fn kan_left<F: Field>(cat: &MeshCategory<F>, m: &SModule<F>) -> Result<LeftKan<F>> {
    let rq = cat.quiver();
    if !is_dynkin(rq.quiver()) {
        return Err(Error::NotDynkin("the left Kan extension has unbounded support".into()));
    }
    let right = RightKan::build(cat, m)?;
    let support = check_support(cat, m)?;
    let frozen: Vec<usize> = (0..rq.vertices().len()).filter(|&v| rq.vertex(v).frozen).collect();
    let dim_m = |u: usize| m.dim(rq.vertex(u));
    let unit = |n: usize, k: usize| {
        let mut v = vec![F::zero(); n];
        v[k] = F::one();
        v
    };
    let n = rq.vertices().len();
    let mut layouts: Vec<Vec<(usize, usize)>> = Vec::with_capacity(n);
    let mut quotients: Vec<Quotient<F>> = Vec::with_capacity(n);
    for x in 0..n {
        let mut layout = Vec::new();
        let mut size = 0;
        for &u in &support {
            let h = cat.dim(x, u);
            if h > 0 {
                layout.push((u, size));
                size += dim_m(u) * h;
            }
        }
        let offset = |u: usize| layout.iter().find(|(v, _)| *v == u).map(|&(_, o)| o);
        let mut rels: Vec<Vec<F>> = Vec::new();
        for &u in &support {
            let Some(ou) = offset(u) else { continue };
            let hxu = cat.dim(x, u);
            for &u1 in &frozen {
                let (h1, hx1) = (cat.dim(u1, u), cat.dim(x, u1));
                if u1 == u || h1 == 0 || hx1 == 0 {
                    continue;
                }
                let o1 = offset(u1);
                for gk in 0..h1 {
                    let g = unit(h1, gk);
                    let act = m.act(rq.vertex(u1), rq.vertex(u), &g);
                    for fk in 0..hx1 {
                        let gf = cat.compose(x, u1, u, &unit(hx1, fk), &g);
                        for j in 0..dim_m(u) {
                            // M(g) e_j (x) f  -  e_j (x) g.f
                            let mut rel = vec![F::zero(); size];
                            if let Some(o1) = o1 {
                                for r in 0..dim_m(u1) {
                                    let v = act.get(r, j);
                                    if !v.is_zero() {
                                        rel[o1 + r * hx1 + fk] = rel[o1 + r * hx1 + fk].add(v);
                                    }
                                }
                            }
                            for (l, c) in gf.iter().enumerate() {
                                if !c.is_zero() {
                                    rel[ou + j * hxu + l] = rel[ou + j * hxu + l].sub(c);
                                }
                            }
                            if rel.iter().any(|v| !v.is_zero()) {
                                rels.push(rel);
                            }
                        }
                    }
                }
            }
        }
        let span = Matrix::from_columns(size, &rels);
        quotients.push(Quotient::new(&span));
        layouts.push(layout);
    }
    // frozen vertices: rebase so that m maps to [m (x) id]; the pair is (to_new, to_old)
    let mut rebase: Vec<Option<(Matrix<F>, Matrix<F>)>> = vec![None; n];
    for x in 0..n {
        if !rq.vertex(x).frozen || quotients[x].dim() == 0 {
            continue;
        }
        let d = dim_m(x);
        let o = layouts[x].iter().find(|(v, _)| *v == x).map(|&(_, o)| o).expect("own layout");
        let size = quotients[x].projection.cols();
        let gens = Matrix::from_fn(size, d, |r, c| if r == o + c { F::one() } else { F::zero() });
        let c = quotients[x].projection.mul(&gens);
        let inv = c.inverse().ok_or_else(|| {
            Error::Inconsistent(format!("left Kan extension at {} differs from M", rq.vertex_key(rq.vertex(x))))
        })?;
        rebase[x] = Some((inv, c));
    }
    let project = |x: usize| -> Matrix<F> {
        match &rebase[x] {
            Some((to_new, _)) => to_new.mul(&quotients[x].projection),
            None => quotients[x].projection.clone(),
        }
    };
    let lift = |x: usize| -> Matrix<F> {
        let q = &quotients[x];
        let plain = Matrix::from_fn(q.projection.cols(), q.dim(), |r, c| if q.kept[c] == r { F::one() } else { F::zero() });
        match &rebase[x] {
            Some((_, to_old)) => plain.mul(to_old),
            None => plain,
        }
    };
    let dims: Vec<usize> = quotients.iter().map(Quotient::dim).collect();
    let mut mats = Vec::with_capacity(rq.arrows().len());
    for b in 0..rq.arrows().len() {
        let (z, x) = rq.ends(b);
        if dims[z] == 0 || dims[x] == 0 {
            mats.push(Matrix::zeros(dims[z], dims[x]));
            continue;
        }
        // m (x) f  ->  m (x) f.b
        let arrow = cat.functor(z).arrow_map(b).column(0);
        let pre = cat.precomposition(z, x, &arrow);
        let (size_z, size_x) = (quotients[z].projection.cols(), quotients[x].projection.cols());
        let mut gen_map = Matrix::zeros(size_z, size_x);
        for &(u, ox) in &layouts[x] {
            let Some(&(_, oz)) = layouts[z].iter().find(|(v, _)| *v == u) else { continue };
            let (hx, hz) = (cat.dim(x, u), cat.dim(z, u));
            let p = &pre[u];
            for j in 0..dim_m(u) {
                for k in 0..hx {
                    for l in 0..hz {
                        let v = p.get(l, k);
                        if !v.is_zero() {
                            gen_map.set(oz + j * hz + l, ox + j * hx + k, v.clone());
                        }
                    }
                }
            }
        }
        mats.push(project(z).mul(&gen_map).mul(&lift(x)));
    }
    let rep = WindowRep::new(rq.clone(), dims.clone(), mats)?;
    // canonical map: e_j (x) f  ->  (h -> M(f.h) e_j)
    let mut canonical = Vec::with_capacity(n);
    for x in 0..n {
        let target_dim = right.rep.dim(x);
        if dims[x] == 0 || target_dim == 0 {
            canonical.push(Matrix::zeros(target_dim, dims[x]));
            continue;
        }
        let size = quotients[x].projection.cols();
        let size_r = right.bases[x].rows();
        let mut gen_images = Matrix::zeros(target_dim, size);
        for &(u, o) in &layouts[x] {
            let hxu = cat.dim(x, u);
            for fk in 0..hxu {
                let f = unit(hxu, fk);
                // M(f.h) for every basis morphism h: u1 -> x, u1 in the right layout
                let comps: Vec<(usize, usize, Vec<Matrix<F>>)> = right.layouts[x]
                    .iter()
                    .map(|&(u1, o1)| {
                        let h1 = cat.dim(u1, x);
                        let acts = (0..h1)
                            .map(|hk| {
                                let fh = cat.compose(u1, x, u, &unit(h1, hk), &f);
                                m.act(rq.vertex(u1), rq.vertex(u), &fh)
                            })
                            .collect();
                        (u1, o1, acts)
                    })
                    .collect();
                for j in 0..dim_m(u) {
                    let mut eta = vec![F::zero(); size_r];
                    for (u1, o1, acts) in &comps {
                        let h1 = acts.len();
                        for r in 0..dim_m(*u1) {
                            for (hk, act) in acts.iter().enumerate() {
                                eta[o1 + r * h1 + hk] = act.get(r, j).clone();
                            }
                        }
                    }
                    let coords = right.coordinates(x, &eta)?;
                    for (r, v) in coords.into_iter().enumerate() {
                        gen_images.set(r, o + j * hxu + fk, v);
                    }
                }
            }
        }
        canonical.push(gen_images.mul(&lift(x)));
    }
    Ok(LeftKan { rep, canonical })
}

/// Image of the canonical map, computed as the subrepresentation of the right
/// Kan extension generated by the frozen spaces.
pub fn kan_intermediate<F: Field>(cat: &MeshCategory<F>, m: &SModule<F>) -> Result<WindowRep<F>> {
    let right = kan_right(cat, m)?;
    let gen = right.frozen_generated();
    right.subrep(&gen)
}

/// Multiplicities of the indecomposables `H x` in the object attached to a stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phi {
    pub multiplicities: DimVector,
    pub v: DimVector,
    pub w: DimVector,
}

/// Dimension of the middle homology of `K(x) -> sum K(y) -> K(tau x)` over arrows `y -> x`
/// of the framed quiver, for `x` possibly just outside the window.
pub fn mesh_homology<F: Field>(rep: &WindowRep<F>, x: RepVertex) -> usize {
    let rq = rep.quiver();
    let q = rq.quiver();
    let mut into: Vec<RepArrow> = crate::quiver::repetition_arrows_into(q, x);
    if rq.framed() {
        into.push(RepArrow { level: x.level, kind: ArrowKind::CoFraming(x.node) });
    }
    let dim = |v: RepVertex| rep.dim_at(v);
    let (dx, dt) = (dim(x), dim(x.tau()));
    let sizes: Vec<usize> = into.iter().map(|a| dim(a.source(q))).collect();
    let total: usize = sizes.iter().sum();
    let mut d0 = Matrix::zeros(total, dx);
    let mut d1 = Matrix::zeros(dt, total);
    let mut off = 0;
    for (a, &sz) in into.iter().zip(&sizes) {
        if sz > 0 {
            if let Some(i) = rq.arrow_index(*a) {
                d0.put(off, 0, rep.mat(i));
            }
            if let Some(i) = rq.arrow_index(a.sigma()) {
                d1.put(0, off, rep.mat(i));
            }
        }
        off += sz;
    }
    let ker = total - d1.rank();
    ker - d0.rank()
}

/// Multiplicities of `Phi(M)`, by the dimension formula and by homology; they must agree.
pub fn phi<F: Field>(cat: &MeshCategory<F>, m: &SModule<F>) -> Result<Phi> {
    let klr = kan_intermediate(cat, m)?;
    phi_of(&klr)
}

/// `Phi` read from a stable and co-stable representation.
pub fn phi_of<F: Field>(klr: &WindowRep<F>) -> Result<Phi> {
    let rq = klr.quiver();
    let q = rq.quiver();
    let v = klr.v();
    let w = klr.w();
    let mut multiplicities = DimVector::new();
    let Some(span) = klr.support_levels() else {
        return Ok(Phi { multiplicities, v, w });
    };
    let vv: VertexVector = v.iter().map(|(&k, &d)| (k, d as i64)).collect();
    let cv = cartan_apply(q, &vv);
    for level in span.lo..=span.hi + 1 {
        for i in 0..q.vertex_count() {
            let x = RepVertex::new(i, level);
            let formula = w.get(&x.sigma()).copied().unwrap_or(0) as i64 - cv.get(&x).copied().unwrap_or(0);
            let homology = mesh_homology(klr, x) as i64;
            if formula != homology {
                return Err(Error::Inconsistent(format!(
                    "multiplicity at {}: formula {formula}, homology {homology}",
                    x.key(q)
                )));
            }
            if formula < 0 {
                return Err(Error::Inconsistent(format!("negative multiplicity at {}", x.key(q))));
            }
            if formula > 0 {
                multiplicities.insert(x, formula as usize);
            }
        }
    }
    Ok(Phi { multiplicities, v, w })
}

/// `M1` and `M2` lie in the same stratum. Both must have the same frozen dimensions.
pub fn same_stratum<F: Field>(cat: &MeshCategory<F>, m1: &SModule<F>, m2: &SModule<F>) -> Result<bool> {
    if m1.dims() != m2.dims() {
        return Err(Error::InvalidInput("modules have different dimension vectors".into()));
    }
    let (p1, p2) = (phi(cat, m1)?, phi(cat, m2)?);
    let by_v = p1.v == p2.v;
    if by_v != (p1.multiplicities == p2.multiplicities) {
        return Err(Error::Inconsistent("strata disagree between v and Phi".into()));
    }
    Ok(by_v)
}

/// The stratum of `M2` lies in the closure of the stratum of `M1`.
///
/// Decided by `v2 <= v1` componentwise and cross-checked by solving
/// `C d = m2 - m1` for the multiplicity vectors.
pub fn degeneration_leq<F: Field>(cat: &MeshCategory<F>, m1: &SModule<F>, m2: &SModule<F>) -> Result<bool> {
    if m1.dims() != m2.dims() {
        return Err(Error::InvalidInput("modules have different dimension vectors".into()));
    }
    let (p1, p2) = (phi(cat, m1)?, phi(cat, m2)?);
    degeneration_from_phi(cat.quiver().quiver(), cat.quiver().window(), &p1, &p2)
}

pub fn degeneration_from_phi(q: &crate::quiver::Quiver, window: Window, p1: &Phi, p2: &Phi) -> Result<bool> {
    let componentwise = p2.v.iter().all(|(k, &d)| d <= p1.v.get(k).copied().unwrap_or(0));
    let mut diff = VertexVector::new();
    for (&k, &c) in &p2.multiplicities {
        *diff.entry(k).or_insert(0) += c as i64;
    }
    for (&k, &c) in &p1.multiplicities {
        *diff.entry(k).or_insert(0) -= c as i64;
    }
    let solve_window = Window { lo: window.lo, hi: window.hi + 2 };
    let by_solve = match cartan_solve(q, &diff, solve_window)? {
        CartanSolution::Solved(d) => d.values().all(|&c| c >= 0),
        CartanSolution::NoSolutionInWindow { .. } => {
            return Err(Error::Inconsistent("multiplicity difference is not in the image of C".into()))
        }
    };
    if componentwise != by_solve {
        return Err(Error::Inconsistent("degeneration criteria disagree".into()));
    }
    Ok(componentwise)
}

/// Closed orbit in the closure of the orbit of a stable representation: the
/// intermediate extension of its restriction plus a semisimple non-frozen part.
pub fn closed_orbit<F: Field>(cat: &MeshCategory<F>, l: &WindowRep<F>) -> Result<(WindowRep<F>, DimVector)> {
    if !l.is_stable() {
        return Err(Error::InvalidInput("closed orbit needs a stable representation".into()));
    }
    let m = SModule::restrict(l, cat);
    let klr = kan_intermediate(cat, &m)?;
    let v0 = klr.v();
    let mut semisimple = DimVector::new();
    for (k, d) in l.v() {
        let d0 = v0.get(&k).copied().unwrap_or(0);
        if d0 > d {
            return Err(Error::Inconsistent(format!("intermediate extension is larger than L at {}", cat.quiver().vertex_key(k))));
        }
        if d > d0 {
            semisimple.insert(k, d - d0);
        }
    }
    if let Some(k) = v0.keys().find(|k| !l.v().contains_key(k)) {
        return Err(Error::Inconsistent(format!("intermediate extension is larger than L at {}", cat.quiver().vertex_key(*k))));
    }
    Ok((klr, semisimple))
}

/// Multiplicities in the first terms of the minimal injective and projective resolutions.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ResolutionShape {
    /// `sigma(x)^v` in `I^0`, keyed by the frozen vertex.
    pub injective0: DimVector,
    /// Summands of `I^1`: non-frozen `x^v` and frozen `sigma(x)^v`.
    pub injective1: DimVector,
    /// `sigma(x)^` in `P_0`.
    pub projective0: DimVector,
    /// Summands of `P_1`.
    pub projective1: DimVector,
}

pub fn resolution_shape<F: Field>(cat: &MeshCategory<F>, m: &SModule<F>) -> Result<ResolutionShape> {
    let rq = cat.quiver();
    let klr = kan_intermediate(cat, m)?;
    let phi = phi_of(&klr)?;
    let mut shape = ResolutionShape::default();
    let frozen: Vec<RepVertex> = m.dims().keys().copied().collect();
    let basis_elems = |a: RepVertex, b: RepVertex| -> Vec<Vec<F>> {
        let (ai, bi) = (rq.index_of(a).expect("in window"), rq.index_of(b).expect("in window"));
        let h = cat.dim(ai, bi);
        (0..h)
            .map(|k| {
                let mut v = vec![F::zero(); h];
                v[k] = F::one();
                v
            })
            .collect()
    };
    for &u in &frozen {
        let d = m.dim(u);
        // socle: common kernel of the maps out of M(u)
        let mut maps: Vec<Matrix<F>> = Vec::new();
        for &z in &frozen {
            if z != u {
                maps.extend(basis_elems(z, u).iter().map(|f| m.act(z, u, f)));
            }
        }
        let refs: Vec<&Matrix<F>> = maps.iter().collect();
        let soc = d - Matrix::vstack(d, &refs).rank();
        if soc > 0 {
            shape.injective0.insert(u, soc);
        }
        // top: cokernel of the maps into M(u)
        let mut into: Vec<Matrix<F>> = Vec::new();
        for &z in &frozen {
            if z != u {
                into.extend(basis_elems(u, z).iter().map(|f| m.act(u, z, f)));
            }
        }
        let refs: Vec<&Matrix<F>> = into.iter().collect();
        let top = d - Matrix::hstack(d, &refs).rank();
        if top > 0 {
            shape.projective0.insert(u, top);
        }
    }
    let Some(span) = klr.support_levels() else { return Ok(shape) };
    let q = rq.quiver();
    for level in span.lo - 1..=span.hi + 1 {
        for i in 0..q.vertex_count() {
            let x = RepVertex::new(i, level);
            let ext_x = phi.multiplicities.get(&x).copied().unwrap_or(0);
            if ext_x > 0 {
                shape.injective1.insert(x, ext_x);
            }
            // P_1 at x is the homology at tau^-1 x
            let p1 = mesh_homology(&klr, x.tau_inv());
            if p1 > 0 {
                shape.projective1.insert(x, p1);
            }
            let s = x.sigma();
            if rq.index_of(s).is_some() {
                let framing = rq.arrow_index(RepArrow { level: s.level, kind: ArrowKind::Framing(i) });
                let cof = rq.arrow_index(RepArrow { level: x.level, kind: ArrowKind::CoFraming(i) });
                // Ext^1(S_sigma x, K) = coker(K(sigma x) -> K(tau x))
                let dt = klr.dim_at(x.tau());
                let r = framing.map_or(0, |b| klr.mat(b).rank());
                if dt > r {
                    shape.injective1.insert(s, dt - r);
                }
                // Ext^1(K, S_sigma x) = coker of the dual of K(x) -> K(sigma x)... i.e. dim K(x) - rank
                let dx = klr.dim_at(x);
                let r = cof.map_or(0, |b| klr.mat(b).rank());
                if dx > r {
                    shape.projective1.insert(s, dx - r);
                }
            }
        }
    }
    Ok(shape)
}

/// The representable functor `Hom(-, t)` restricted to the window, as a representation.
pub fn representable<F: Field>(cat: &MeshCategory<F>, t: RepVertex) -> Result<WindowRep<F>> {
    let rq = cat.quiver();
    let ti = cat.index(t)?;
    let n = rq.vertices().len();
    let dims: Vec<usize> = (0..n).map(|z| cat.dim(z, ti)).collect();
    let mut mats = Vec::with_capacity(rq.arrows().len());
    for b in 0..rq.arrows().len() {
        let (s, x) = rq.ends(b);
        if dims[s] == 0 || dims[x] == 0 {
            mats.push(Matrix::zeros(dims[s], dims[x]));
            continue;
        }
        let arrow = cat.functor(s).arrow_map(b).column(0);
        mats.push(cat.precomposition(s, x, &arrow)[ti].clone());
    }
    WindowRep::new(rq.clone(), dims, mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::quiver::{Configuration, Quiver, RepQuiver};
    use alloc::sync::Arc;

    fn a2_cat(lo: i64, hi: i64) -> MeshCategory<Q> {
        let q = Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap());
        MeshCategory::new(Arc::new(RepQuiver::new(q, true, Window::new(lo, hi).unwrap(), Configuration::All)))
    }

    #[test]
    fn simple_frozen_phi() {
        let cat = a2_cat(0, 4);
        let x = RepVertex::new(0, 2);
        let m = SModule::semisimple(&DimVector::from([(x.sigma(), 1)]));
        let p = phi(&cat, &m).unwrap();
        assert_eq!(p.multiplicities, DimVector::from([(x, 1)]));
        assert!(p.v.is_empty());
    }

    #[test]
    fn right_kan_of_simple_is_stable_with_same_restriction() {
        let cat = a2_cat(0, 4);
        let u = RepVertex::frozen(1, 1);
        let m = SModule::semisimple(&DimVector::from([(u, 1)]));
        let kr = kan_right(&cat, &m).unwrap();
        kr.validate().unwrap();
        assert!(kr.is_stable());
        assert_eq!(SModule::restrict(&kr, &cat), m);
    }

    #[test]
    fn representable_is_valid() {
        let cat = a2_cat(0, 3);
        let p = representable(&cat, RepVertex::frozen(0, 3)).unwrap();
        p.validate().unwrap();
        assert_eq!(p.dim_at(RepVertex::frozen(0, 3)), 1);
    }

    #[test]
    fn resolution_shape_of_frozen_simple() {
        let cat = a2_cat(0, 4);
        let x = RepVertex::new(1, 2);
        let m = SModule::semisimple(&DimVector::from([(x.sigma(), 1)]));
        let shape = resolution_shape(&cat, &m).unwrap();
        assert_eq!(shape.injective0, DimVector::from([(x.sigma(), 1)]));
        assert_eq!(shape.injective1.get(&x), Some(&1));
    }
}
