//! Finite-dimensional representations of framed mesh categories on a window,
//! and their restrictions to the frozen vertices.
//!
//! Modules are contravariant: the matrix on an arrow `a: x -> y` maps the
//! space at `y` to the space at `x`, so it has `dim x` rows and `dim y` columns.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{preimage, Matrix, Quotient};
use crate::mesh::MeshCategory;
use crate::quiver::{RepQuiver, RepVertex, Window};

/// Dimension vector keyed by vertex, zero entries omitted.
pub type DimVector = BTreeMap<RepVertex, usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowRep<F: Field> {
    rq: Arc<RepQuiver>,
    dims: Vec<usize>,
    mats: Vec<Matrix<F>>,
}

impl<F: Field> WindowRep<F> {
    pub fn new(rq: Arc<RepQuiver>, dims: Vec<usize>, mats: Vec<Matrix<F>>) -> Result<Self> {
        if dims.len() != rq.vertices().len() || mats.len() != rq.arrows().len() {
            return Err(Error::DimensionMismatch("vertex or arrow count".into()));
        }
        for (b, m) in mats.iter().enumerate() {
            let (s, t) = rq.ends(b);
            if m.rows() != dims[s] || m.cols() != dims[t] {
                return Err(Error::DimensionMismatch(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    rq.arrow_key(rq.arrow(b)),
                    dims[s],
                    dims[t],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(WindowRep { rq, dims, mats })
    }

    pub fn zero(rq: Arc<RepQuiver>) -> Self {
        let dims = alloc::vec![0; rq.vertices().len()];
        let mats = rq.arrows().iter().map(|_| Matrix::zeros(0, 0)).collect();
        WindowRep { rq, dims, mats }
    }

    /// Builds a representation from dimensions and nonzero arrow matrices; other arrows get zero maps.
    pub fn from_parts(rq: Arc<RepQuiver>, dims: &DimVector, mats: BTreeMap<usize, Matrix<F>>) -> Result<Self> {
        let mut d = alloc::vec![0; rq.vertices().len()];
        for (&v, &n) in dims {
            let idx = rq.index_of(v).ok_or_else(|| {
                Error::InvalidInput(format!("{} is not a vertex of the window", rq.vertex_key(v)))
            })?;
            d[idx] = n;
        }
        let mut all = Vec::with_capacity(rq.arrows().len());
        for b in 0..rq.arrows().len() {
            let (s, t) = rq.ends(b);
            all.push(match mats.get(&b) {
                Some(m) => m.clone(),
                None => Matrix::zeros(d[s], d[t]),
            });
        }
        Self::new(rq, d, all)
    }

    pub fn quiver(&self) -> &Arc<RepQuiver> {
        &self.rq
    }

    /// The same representation with every entry mapped into another field.
    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> Result<G>) -> Result<WindowRep<G>> {
        let mats = self
            .mats
            .iter()
            .map(|m| {
                let entries: Vec<G> = m.entries().iter().map(&f).collect::<Result<_>>()?;
                Ok(Matrix::from_fn(m.rows(), m.cols(), |r, c| entries[r * m.cols() + c].clone()))
            })
            .collect::<Result<_>>()?;
        Ok(WindowRep { rq: self.rq.clone(), dims: self.dims.clone(), mats })
    }

    pub fn window(&self) -> Window {
        self.rq.window()
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at(&self, v: RepVertex) -> usize {
        self.rq.index_of(v).map_or(0, |i| self.dims[i])
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn mat(&self, arrow: usize) -> &Matrix<F> {
        &self.mats[arrow]
    }

    pub fn mats(&self) -> &[Matrix<F>] {
        &self.mats
    }

    /// Non-frozen part of the dimension vector.
    pub fn v(&self) -> DimVector {
        self.dim_vector(false)
    }

    /// Frozen part of the dimension vector.
    pub fn w(&self) -> DimVector {
        self.dim_vector(true)
    }

    fn dim_vector(&self, frozen: bool) -> DimVector {
        self.rq
            .vertices()
            .iter()
            .zip(&self.dims)
            .filter(|(v, &d)| v.frozen == frozen && d > 0)
            .map(|(&v, &d)| (v, d))
            .collect()
    }

    /// Levels carrying a nonzero space, if any.
    pub fn support_levels(&self) -> Option<Window> {
        let levels = self.rq.vertices().iter().zip(&self.dims).filter(|(_, &d)| d > 0).map(|(v, _)| v.level);
        let (lo, hi) = levels.fold((i64::MAX, i64::MIN), |(lo, hi), l| (lo.min(l), hi.max(l)));
        (lo <= hi).then_some(Window { lo, hi })
    }

    /// Vertices where the mesh relation fails.
    pub fn mesh_violations(&self) -> Vec<RepVertex> {
        let mut bad = Vec::new();
        for t in 0..self.rq.vertices().len() {
            if !self.rq.has_mesh(t) || self.dims[t] == 0 {
                continue;
            }
            let tau = self.rq.index_of(self.rq.vertex(t).tau()).expect("tau inside window");
            if self.dims[tau] == 0 {
                continue;
            }
            let mut sum = Matrix::zeros(self.dims[tau], self.dims[t]);
            for (b, s) in self.rq.mesh_terms(t) {
                sum = sum.add(&self.mats[s].mul(&self.mats[b]));
            }
            if !sum.is_zero() {
                bad.push(self.rq.vertex(t));
            }
        }
        bad
    }

    pub fn validate(&self) -> Result<()> {
        let bad = self.mesh_violations();
        if bad.is_empty() {
            Ok(())
        } else {
            let keys: Vec<String> = bad.iter().map(|&v| self.rq.vertex_key(v)).collect();
            Err(Error::RelationsViolated(keys.join(", ")))
        }
    }

    /// Matrix of a path `a_1 ... a_k` (traversed from its start to its end):
    /// `M(a_1) ... M(a_k)`, from the space at the end to the space at the start.
    pub fn path_matrix(&self, start: usize, path: &[usize]) -> Matrix<F> {
        let mut m = Matrix::identity(self.dims[start]);
        for &b in path {
            m = m.mul(&self.mats[b]);
        }
        m
    }

    /// `M(f)` for `f` in `Hom(a, b)` given in the category's basis.
    pub fn eval(&self, cat: &MeshCategory<F>, a: usize, b: usize, f: &[F]) -> Matrix<F> {
        let mut out = Matrix::zeros(self.dims[a], self.dims[b]);
        for (path, c) in cat.basis(a, b).iter().zip(f) {
            if !c.is_zero() {
                out = out.add(&self.path_matrix(a, path).scale(c));
            }
        }
        out
    }

    /// The same representation on a larger window of the same framed quiver.
    pub fn extend_to(&self, rq: Arc<RepQuiver>) -> Result<Self> {
        if !rq.window().covers(&self.window()) || rq.quiver() != self.rq.quiver() || rq.framed() != self.rq.framed() {
            return Err(Error::InvalidInput("target window does not contain the representation".into()));
        }
        let mut dims = alloc::vec![0; rq.vertices().len()];
        for (k, &v) in self.rq.vertices().iter().enumerate() {
            let idx = rq.index_of(v).ok_or_else(|| Error::InvalidInput("configurations differ".into()))?;
            dims[idx] = self.dims[k];
        }
        let mut mats = Vec::with_capacity(rq.arrows().len());
        for (b, &a) in rq.arrows().iter().enumerate() {
            let (s, t) = rq.ends(b);
            mats.push(match self.rq.arrow_index(a) {
                Some(old) => self.mats[old].clone(),
                None => Matrix::zeros(dims[s], dims[t]),
            });
        }
        Self::new(rq, dims, mats)
    }

    /// Subrepresentation on subspaces given by column bases, with maps in those bases.
    /// Full subspaces keep the ambient coordinates.
    pub fn subrep(&self, bases: &[Matrix<F>]) -> Result<Self> {
        let bases: Vec<Matrix<F>> = bases
            .iter()
            .zip(&self.dims)
            .map(|(b, &d)| if b.cols() == d { Matrix::identity(d) } else { b.clone() })
            .collect();
        let mut mats = Vec::with_capacity(self.mats.len());
        for (b, m) in self.mats.iter().enumerate() {
            let (s, t) = self.rq.ends(b);
            let image = m.mul(&bases[t]);
            let restricted = bases[s]
                .solve_matrix(&image)
                .ok_or_else(|| Error::Inconsistent("subspaces are not closed under the action".into()))?;
            mats.push(restricted);
        }
        Self::new(self.rq.clone(), bases.iter().map(Matrix::cols).collect(), mats)
    }

    /// Quotient by a subrepresentation given by column bases.
    pub fn quotient(&self, bases: &[Matrix<F>]) -> (Self, Vec<Quotient<F>>) {
        let quos: Vec<Quotient<F>> = bases.iter().map(Quotient::new).collect();
        let lifts: Vec<Matrix<F>> = quos
            .iter()
            .zip(&self.dims)
            .map(|(q, &d)| Matrix::from_fn(d, q.dim(), |r, c| if q.kept[c] == r { F::one() } else { F::zero() }))
            .collect();
        let mats = self
            .mats
            .iter()
            .enumerate()
            .map(|(b, m)| {
                let (s, t) = self.rq.ends(b);
                quos[s].projection.mul(m).mul(&lifts[t])
            })
            .collect();
        let dims = quos.iter().map(Quotient::dim).collect();
        (WindowRep { rq: self.rq.clone(), dims, mats }, quos)
    }

    /// Largest subrepresentation vanishing on frozen vertices, as column bases.
    pub fn nonfrozen_socle_part(&self) -> Vec<Matrix<F>> {
        let n = self.rq.vertices().len();
        let mut bases: Vec<Matrix<F>> = Vec::with_capacity(n);
        for t in 0..n {
            if self.rq.vertex(t).frozen {
                bases.push(Matrix::zeros(self.dims[t], 0));
                continue;
            }
            let mut dom = Matrix::identity(self.dims[t]);
            for &b in self.rq.incoming(t) {
                let (s, _) = self.rq.ends(b);
                if dom.cols() == 0 {
                    break;
                }
                dom = preimage(&self.mats[b], &dom, &bases[s]);
            }
            bases.push(dom);
        }
        bases
    }

    /// Subrepresentation generated by the frozen spaces, as column bases.
    pub fn frozen_generated(&self) -> Vec<Matrix<F>> {
        let n = self.rq.vertices().len();
        let mut bases: Vec<Matrix<F>> = (0..n).map(|v| Matrix::zeros(self.dims[v], 0)).collect();
        for v in (0..n).rev() {
            if self.rq.vertex(v).frozen {
                bases[v] = Matrix::identity(self.dims[v]);
                continue;
            }
            let mut gens: Vec<Matrix<F>> = Vec::new();
            for &b in self.rq.outgoing(v) {
                let (_, t) = self.rq.ends(b);
                gens.push(self.mats[b].mul(&bases[t]));
            }
            let refs: Vec<&Matrix<F>> = gens.iter().collect();
            bases[v] = Matrix::hstack(self.dims[v], &refs).column_space();
        }
        bases
    }

    /// No nonzero subrepresentation is supported on non-frozen vertices.
    pub fn is_stable(&self) -> bool {
        self.nonfrozen_socle_part().iter().all(|b| b.cols() == 0)
    }

    /// No nonzero quotient is supported on non-frozen vertices.
    pub fn is_costable(&self) -> bool {
        self.frozen_generated().iter().zip(&self.dims).all(|(b, &d)| b.cols() == d)
    }

    /// Quotient by the largest subrepresentation supported on non-frozen vertices.
    pub fn stabilize(&self) -> Self {
        self.quotient(&self.nonfrozen_socle_part()).0
    }

    /// Direct sum with another representation on the same window.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.rq, &other.rq) && *self.rq.vertices() != *other.rq.vertices() {
            return Err(Error::InvalidInput("direct sum of representations on different windows".into()));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
                m.put(0, 0, a);
                m.put(a.rows(), a.cols(), b);
                m
            })
            .collect();
        Self::new(self.rq.clone(), dims, mats)
    }

    /// Conjugates every space by the given invertible matrices: `M'(a) = g_s^-1 M(a) g_t`.
    pub fn change_basis(&self, g: &[Matrix<F>]) -> Result<Self> {
        let inv: Vec<Matrix<F>> = g
            .iter()
            .map(|m| m.inverse().ok_or_else(|| Error::InvalidInput("basis change is not invertible".into())))
            .collect::<Result<_>>()?;
        let mats = self
            .mats
            .iter()
            .enumerate()
            .map(|(b, m)| {
                let (s, t) = self.rq.ends(b);
                inv[s].mul(m).mul(&g[t])
            })
            .collect();
        Self::new(self.rq.clone(), self.dims.clone(), mats)
    }
}

/// Random representation satisfying the mesh relations, built in topological order.
///
/// Each new vertex picks its incoming maps column by column from the kernel of
/// the relator, with small integer coefficients; `density` is the chance a
/// coefficient is nonzero.
pub fn random_rep<F: Field, R: Rng + ?Sized>(rq: Arc<RepQuiver>, dims: &[usize], density: f64, rng: &mut R) -> WindowRep<F> {
    let n = rq.vertices().len();
    assert_eq!(dims.len(), n);
    let mut mats: Vec<Matrix<F>> = (0..rq.arrows().len()).map(|b| {
        let (s, t) = rq.ends(b);
        Matrix::zeros(dims[s], dims[t])
    }).collect();
    let coeff = |rng: &mut R| -> F {
        if rng.gen_bool(density) {
            let v = rng.gen_range(1..=2i64);
            F::from_i64(if rng.gen_bool(0.5) { v } else { -v })
        } else {
            F::zero()
        }
    };
    for t in 0..n {
        let incoming = rq.incoming(t);
        let sizes: Vec<usize> = incoming.iter().map(|&b| dims[rq.ends(b).0]).collect();
        let total: usize = sizes.iter().sum();
        if total == 0 || dims[t] == 0 {
            continue;
        }
        let tau = rq.has_mesh(t).then(|| rq.index_of(rq.vertex(t).tau()).expect("tau inside window"));
        let allowed = match tau {
            Some(tau) if dims[tau] > 0 => {
                let blocks: Vec<&Matrix<F>> = rq.mesh_terms(t).iter().map(|&(_, s)| &mats[s]).collect();
                Matrix::hstack(dims[tau], &blocks).kernel()
            }
            _ => Matrix::identity(total),
        };
        let mut stacked = Matrix::zeros(total, dims[t]);
        for c in 0..dims[t] {
            let mut col = alloc::vec![F::zero(); total];
            for k in 0..allowed.cols() {
                let a = coeff(rng);
                if a.is_zero() {
                    continue;
                }
                for (r, v) in col.iter_mut().enumerate() {
                    *v = v.add(&a.mul(allowed.get(r, k)));
                }
            }
            for (r, v) in col.into_iter().enumerate() {
                stacked.set(r, c, v);
            }
        }
        let mut off = 0;
        for (k, &b) in incoming.iter().enumerate() {
            let rows: Vec<usize> = (off..off + sizes[k]).collect();
            mats[b] = stacked.select_rows(&rows);
            off += sizes[k];
        }
    }
    WindowRep::new(rq, dims.to_vec(), mats).expect("shapes are consistent by construction")
}

/// A finite-dimensional module over the full subcategory on frozen vertices,
/// given by its spaces and the action of every basis morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SModule<F: Field> {
    dims: BTreeMap<RepVertex, usize>,
    /// For frozen `a != b` with nonzero spaces: the matrices of the basis of `Hom(a, b)`.
    actions: BTreeMap<(RepVertex, RepVertex), Vec<Matrix<F>>>,
}

impl<F: Field> SModule<F> {
    /// Restriction of a representation to the retained frozen vertices.
    pub fn restrict(rep: &WindowRep<F>, cat: &MeshCategory<F>) -> Self {
        let rq = rep.quiver();
        let frozen: Vec<usize> =
            (0..rq.vertices().len()).filter(|&v| rq.vertex(v).frozen && rep.dim(v) > 0).collect();
        let dims = frozen.iter().map(|&v| (rq.vertex(v), rep.dim(v))).collect();
        let mut actions = BTreeMap::new();
        for &a in &frozen {
            for &b in &frozen {
                if a == b || cat.dim(a, b) == 0 {
                    continue;
                }
                let mats = cat.basis(a, b).iter().map(|path| rep.path_matrix(a, path)).collect();
                actions.insert((rq.vertex(a), rq.vertex(b)), mats);
            }
        }
        SModule { dims, actions }
    }

    /// Semisimple module with the given dimensions.
    pub fn semisimple(w: &DimVector) -> Self {
        SModule { dims: w.iter().filter(|(_, &d)| d > 0).map(|(&k, &d)| (k, d)).collect(), actions: BTreeMap::new() }
    }

    pub fn dims(&self) -> &BTreeMap<RepVertex, usize> {
        &self.dims
    }

    pub fn dim(&self, v: RepVertex) -> usize {
        self.dims.get(&v).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn actions(&self) -> &BTreeMap<(RepVertex, RepVertex), Vec<Matrix<F>>> {
        &self.actions
    }

    /// Action of `f` in `Hom(a, b)`, a `dim a x dim b` matrix.
    pub fn act(&self, a: RepVertex, b: RepVertex, f: &[F]) -> Matrix<F> {
        let (da, db) = (self.dim(a), self.dim(b));
        if a == b {
            return Matrix::identity(da).scale(&f[0]);
        }
        let mut out = Matrix::zeros(da, db);
        if let Some(mats) = self.actions.get(&(a, b)) {
            for (m, c) in mats.iter().zip(f) {
                if !c.is_zero() {
                    out = out.add(&m.scale(c));
                }
            }
        }
        out
    }

    /// Levels carrying a nonzero space.
    pub fn support_levels(&self) -> Option<Window> {
        let lo = self.dims.keys().map(|v| v.level).min()?;
        let hi = self.dims.keys().map(|v| v.level).max()?;
        Some(Window { lo, hi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::quiver::{Configuration, Quiver};
    use rand::SeedableRng;

    fn a2_framed(lo: i64, hi: i64) -> Arc<RepQuiver> {
        let q = Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap());
        Arc::new(RepQuiver::new(q, true, Window::new(lo, hi).unwrap(), Configuration::All))
    }

    #[test]
    fn random_reps_satisfy_relations() {
        let rq = a2_framed(0, 3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let dims: Vec<usize> = (0..rq.vertices().len()).map(|_| rng.gen_range(0..=2)).collect();
            let rep: WindowRep<Q> = random_rep(rq.clone(), &dims, 0.7, &mut rng);
            rep.validate().unwrap();
            let st = rep.stabilize();
            st.validate().unwrap();
            assert!(st.is_stable());
        }
    }

    #[test]
    fn detects_relation_violation() {
        let rq = a2_framed(0, 1);
        // 1@0 -> 2@0 -> 1@1 with both maps nonzero breaks the mesh at 1@1
        let v10 = RepVertex::new(0, 0);
        let v20 = RepVertex::new(1, 0);
        let v11 = RepVertex::new(0, 1);
        let dims = DimVector::from([(v10, 1), (v20, 1), (v11, 1)]);
        let mut mats = BTreeMap::new();
        for b in 0..rq.arrows().len() {
            let (s, t) = rq.ends(b);
            let (s, t) = (rq.vertex(s), rq.vertex(t));
            if (s, t) == (v10, v20) || (s, t) == (v20, v11) {
                mats.insert(b, Matrix::identity(1));
            }
        }
        let rep: WindowRep<Q> = WindowRep::from_parts(rq, &dims, mats).unwrap();
        assert_eq!(rep.mesh_violations(), alloc::vec![v11]);
        assert!(matches!(rep.validate(), Err(Error::RelationsViolated(_))));
    }

    #[test]
    fn simple_nonfrozen_is_unstable() {
        let rq = a2_framed(0, 1);
        let dims = DimVector::from([(RepVertex::new(0, 1), 1)]);
        let rep: WindowRep<Q> = WindowRep::from_parts(rq, &dims, BTreeMap::new()).unwrap();
        assert!(!rep.is_stable());
        assert!(!rep.is_costable());
        assert_eq!(rep.stabilize().total_dim(), 0);
    }
}
