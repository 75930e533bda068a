//! Fibers of the desingularization map over a point of the affine variety,
//! decided over a finite field by enumerating submodules.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::derived::is_dynkin;
use crate::error::{Error, Result};
use crate::field::{FiniteField, Field};
use crate::kan::{kan_right, phi_of};
use crate::linalg::{Matrix, Quotient};
use crate::mesh::MeshCategory;
use crate::quiver::RepQuiver;
use crate::rep::{DimVector, SModule, WindowRep};

/// Every subspace of `F^n`, optionally of a fixed dimension, as column bases in reduced echelon form.
pub fn subspaces<F: FiniteField>(n: usize, dim: Option<usize>) -> Vec<Matrix<F>> {
    let elements = F::elements();
    let mut out = Vec::new();
    let ranks: Vec<usize> = match dim {
        Some(d) if d <= n => vec![d],
        Some(_) => Vec::new(),
        None => (0..=n).collect(),
    };
    for r in ranks {
        for pivots in combinations(n, r) {
            // free positions: row i, column j > pivot i, j not a pivot
            let free: Vec<(usize, usize)> = (0..r)
                .flat_map(|i| (pivots[i] + 1..n).filter(|j| !pivots.contains(j)).map(move |j| (i, j)))
                .collect();
            let mut digits = vec![0usize; free.len()];
            loop {
                let mut rows = vec![vec![F::zero(); n]; r];
                for (i, &p) in pivots.iter().enumerate() {
                    rows[i][p] = F::one();
                }
                for (k, &(i, j)) in free.iter().enumerate() {
                    rows[i][j] = elements[digits[k]].clone();
                }
                out.push(Matrix::from_columns(n, &rows));
                // odometer over the free entries
                let mut k = 0;
                while k < digits.len() {
                    digits[k] += 1;
                    if digits[k] < elements.len() {
                        break;
                    }
                    digits[k] = 0;
                    k += 1;
                }
                if k == digits.len() {
                    break;
                }
            }
        }
    }
    out
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

fn contains<F: Field>(space: &Matrix<F>, vectors: &Matrix<F>) -> bool {
    vectors.cols() == 0 || Matrix::hstack(space.rows(), &[space, vectors]).rank() == space.rank()
}

/// Subrepresentations by backtracking from the top of the window down: the
/// subspace at `t` must contain the images of the subspaces already chosen above.
/// `choices(t, forced)` lists the candidate subspaces at `t`.
fn enumerate_subreps<F: Field>(
    rep: &WindowRep<F>,
    choices: &mut dyn FnMut(usize, &Matrix<F>) -> Vec<Matrix<F>>,
    visit: &mut dyn FnMut(&[Matrix<F>]) -> bool,
) {
    let rq = rep.quiver().clone();
    let n = rq.vertices().len();
    let mut chosen: Vec<Matrix<F>> = (0..n).map(|v| Matrix::zeros(rep.dim(v), 0)).collect();
    fn step<F: Field>(
        t: usize,
        rep: &WindowRep<F>,
        chosen: &mut Vec<Matrix<F>>,
        choices: &mut dyn FnMut(usize, &Matrix<F>) -> Vec<Matrix<F>>,
        visit: &mut dyn FnMut(&[Matrix<F>]) -> bool,
    ) -> bool {
        if t == 0 {
            return visit(chosen);
        }
        let v = t - 1;
        let rq = rep.quiver();
        let images: Vec<Matrix<F>> =
            rq.outgoing(v).iter().map(|&b| rep.mat(b).mul(&chosen[rq.ends(b).1])).collect();
        let refs: Vec<&Matrix<F>> = images.iter().collect();
        let forced = Matrix::hstack(rep.dim(v), &refs);
        for candidate in choices(v, &forced) {
            chosen[v] = candidate;
            if !step(v, rep, chosen, choices, visit) {
                return false;
            }
        }
        chosen[v] = Matrix::zeros(rep.dim(v), 0);
        true
    }
    step(n, rep, &mut chosen, choices, visit);
}

#[derive(Clone, Debug)]
pub enum FiberStatus<F: Field> {
    /// A stable representation of the requested dimension restricting to the point.
    Nonempty(WindowRep<F>),
    Empty,
    Undetermined(String),
}

#[derive(Clone, Debug)]
pub struct Fiber<F: Field> {
    /// Dimension vector of the intermediate extension.
    pub v0: DimVector,
    /// Dimension vector of the quotient of the right by the intermediate extension.
    pub ck: DimVector,
    /// Dimension vectors of all submodules of that quotient.
    pub attained: BTreeSet<DimVector>,
    pub status: FiberStatus<F>,
}

impl<F: Field> Fiber<F> {
    pub fn is_nonempty(&self) -> Option<bool> {
        match self.status {
            FiberStatus::Nonempty(_) => Some(true),
            FiberStatus::Empty => Some(false),
            FiberStatus::Undetermined(_) => None,
        }
    }
}

fn to_dims<F: Field>(rep: &WindowRep<F>, bases: &[Matrix<F>]) -> DimVector {
    let rq = rep.quiver();
    bases.iter().enumerate().filter(|(v, b)| b.cols() > 0 && !rq.vertex(*v).frozen).map(|(v, b)| (rq.vertex(v), b.cols())).collect()
}

/// Whether some stable representation of non-frozen dimension `v` restricts to `m`,
/// by enumerating the submodules of `K_R(m) / K_LR(m)` over the finite field.
///
/// Witnesses are lifted to preimages inside `K_R(m)` and validated.
pub fn fiber<F: FiniteField>(cat: &MeshCategory<F>, m: &SModule<F>, v: &DimVector, bound: usize) -> Result<Fiber<F>> {
    let rq = cat.quiver();
    if !is_dynkin(rq.quiver()) {
        return Err(Error::NotDynkin("fibers need a finite-dimensional quotient".into()));
    }
    if let Some(k) = v.keys().find(|k| k.frozen) {
        return Err(Error::InvalidInput(format!("{} is frozen", rq.vertex_key(*k))));
    }
    let kr = kan_right(cat, m)?;
    let gen = kr.frozen_generated();
    let (ck, quotients) = kr.quotient(&gen);
    let v0 = to_dims(&kr, &gen);
    let ck_dims: DimVector =
        (0..ck.dims().len()).filter(|&x| ck.dim(x) > 0).map(|x| (rq.vertex(x), ck.dim(x))).collect();
    if ck_dims.keys().any(|x| x.level == rq.window().hi) {
        return Err(Error::WindowInsufficient(format!("the quotient reaches the top of window {}", rq.window())));
    }
    // the quotient must be the sum of the m(y) copies of Hom(y, -) in k(ZQ)
    let phi = phi_of(&kr.subrep(&gen)?)?;
    let plain = MeshCategory::<F>::new(Arc::new(RepQuiver::repetition(rq.quiver().clone(), rq.window())));
    for (x, &d) in rq.vertices().iter().zip(ck.dims()) {
        if x.frozen {
            continue;
        }
        let mut expected = 0;
        for (&y, &c) in &phi.multiplicities {
            expected += c * plain.dim_between(y, *x)?;
        }
        if expected != d {
            return Err(Error::Inconsistent(format!(
                "quotient has dimension {d} at {}, the decomposition predicts {expected}",
                rq.vertex_key(*x)
            )));
        }
    }
    let mut target = DimVector::new();
    let mut negative = false;
    for k in v0.keys().chain(v.keys()) {
        let (a, b) = (v.get(k).copied().unwrap_or(0), v0.get(k).copied().unwrap_or(0));
        if a < b {
            negative = true;
        } else if a > b {
            target.insert(*k, a - b);
        }
    }
    let total: usize = ck_dims.values().sum();
    if total > bound {
        let status = if negative {
            FiberStatus::Empty
        } else {
            FiberStatus::Undetermined(format!("quotient has dimension {total}, above the bound {bound}"))
        };
        return Ok(Fiber { v0, ck: ck_dims, attained: BTreeSet::new(), status });
    }
    let mut attained = BTreeSet::new();
    let mut witness: Option<Vec<Matrix<F>>> = None;
    enumerate_subreps(
        &ck,
        &mut |t, forced| {
            // subspaces of ck(t) containing the forced images
            let q = Quotient::new(forced);
            let base = forced.column_space();
            let n = ck.dim(t);
            subspaces::<F>(q.dim(), None)
                .into_iter()
                .map(|s| {
                    let lifted = Matrix::from_fn(n, s.cols(), |r, c| match q.kept.iter().position(|&k| k == r) {
                        Some(i) => s.get(i, c).clone(),
                        None => F::zero(),
                    });
                    Matrix::hstack(n, &[&base, &lifted])
                })
                .collect()
        },
        &mut |sub| {
            let dims = to_dims(&ck, sub);
            if dims == target && witness.is_none() {
                witness = Some(sub.to_vec());
            }
            attained.insert(dims);
            true
        },
    );
    let status = match (negative, witness) {
        (true, _) | (false, None) => FiberStatus::Empty,
        (false, Some(sub)) => {
            // preimage in K_R: the intermediate part plus the kept coordinates of the submodule
            let bases: Vec<Matrix<F>> = sub
                .iter()
                .zip(&gen)
                .zip(&quotients)
                .map(|((s, g), q)| {
                    let n = q.projection.cols();
                    let lifted = Matrix::from_fn(n, s.cols(), |r, c| match q.kept.iter().position(|&k| k == r) {
                        Some(i) => s.get(i, c).clone(),
                        None => F::zero(),
                    });
                    Matrix::hstack(n, &[g, &lifted])
                })
                .collect();
            let lift = kr.subrep(&bases)?;
            check_witness(cat, &lift, m, v)?;
            FiberStatus::Nonempty(lift)
        }
    };
    Ok(Fiber { v0, ck: ck_dims, attained, status })
}

fn check_witness<F: Field>(cat: &MeshCategory<F>, lift: &WindowRep<F>, m: &SModule<F>, v: &DimVector) -> Result<()> {
    lift.validate()?;
    if !lift.is_stable() {
        return Err(Error::Inconsistent("lifted witness is not stable".into()));
    }
    if SModule::restrict(lift, cat) != *m {
        return Err(Error::Inconsistent("lifted witness does not restrict to the point".into()));
    }
    if lift.v() != *v {
        return Err(Error::Inconsistent("lifted witness has the wrong dimension".into()));
    }
    Ok(())
}

/// The same question decided directly: search for subrepresentations of `K_R(m)`
/// of dimension `v` on non-frozen vertices that contain `K_LR(m)` and agree
/// with it on frozen vertices. Returns a validated witness if one exists.
pub fn fiber_by_subrepresentations<F: FiniteField>(
    cat: &MeshCategory<F>,
    m: &SModule<F>,
    v: &DimVector,
) -> Result<Option<WindowRep<F>>> {
    let rq = cat.quiver();
    let kr = kan_right(cat, m)?;
    let gen = kr.frozen_generated();
    let mut found: Option<Vec<Matrix<F>>> = None;
    enumerate_subreps(
        &kr,
        &mut |t, forced| {
            let x = rq.vertex(t);
            if x.frozen {
                let full = Matrix::identity(kr.dim(t));
                return if contains(&full, forced) { vec![full] } else { Vec::new() };
            }
            let d = v.get(&x).copied().unwrap_or(0);
            subspaces::<F>(kr.dim(t), Some(d))
                .into_iter()
                .filter(|s| contains(s, forced) && contains(s, &gen[t]))
                .collect()
        },
        &mut |sub| {
            found = Some(sub.to_vec());
            false
        },
    );
    match found {
        None => Ok(None),
        Some(bases) => {
            let lift = kr.subrep(&bases)?;
            check_witness(cat, &lift, m, v)?;
            Ok(Some(lift))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    #[test]
    fn subspace_counts_over_f2() {
        // Gaussian binomials [3 choose k]_2 = 1, 7, 7, 1
        let counts: Vec<usize> = (0..=3).map(|k| subspaces::<Fp<2>>(3, Some(k)).len()).collect();
        assert_eq!(counts, vec![1, 7, 7, 1]);
        assert_eq!(subspaces::<Fp<3>>(2, None).len(), 1 + 4 + 1);
    }
}
