//! Checks on a configuration: condition (R) and the left exactness of the
//! Hom sequences at non-frozen vertices.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::derived::DerivedCategory;
use crate::error::Result;
use crate::field::{Field, Q};
use crate::linalg::Matrix;
use crate::mesh::MeshCategory;
use crate::quiver::{Configuration, Quiver, RepQuiver, RepVertex, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    /// The window is too small to decide.
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCheck {
    pub vertex: RepVertex,
    /// Some `c` in `C` with `k(ZQ)(x, c) != 0`.
    pub condition_r: Verdict,
    /// `0 -> R_C(?, x) -> sum over x -> y of R_C(?, y)` is exact on sources in the window.
    pub exact_out: Verdict,
    /// `0 -> R_C(x, ?) -> sum over y -> x of R_C(y, ?)` is exact on targets in the window.
    pub exact_in: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigReport {
    pub window: Window,
    pub vertices: Vec<VertexCheck>,
}

impl ConfigReport {
    /// `Some(true)` when every vertex satisfies (R), `None` if some vertex is undetermined.
    pub fn condition_r(&self) -> Option<bool> {
        fold(self.vertices.iter().map(|v| v.condition_r))
    }

    pub fn left_exact(&self) -> Option<bool> {
        fold(self.vertices.iter().flat_map(|v| [v.exact_out, v.exact_in]))
    }
}

fn fold(verdicts: impl Iterator<Item = Verdict>) -> Option<bool> {
    let mut out = Some(true);
    for v in verdicts {
        match v {
            Verdict::Fails => return Some(false),
            Verdict::Undetermined => out = None,
            Verdict::Holds => {}
        }
    }
    out
}

fn bounded(ok: bool, truncated: bool) -> Verdict {
    match (ok, truncated) {
        (false, _) => Verdict::Fails,
        (true, true) => Verdict::Undetermined,
        (true, false) => Verdict::Holds,
    }
}

/// Whether stacking `maps` gives an injective map out of a space of dimension `dim`.
fn injective<F: Field>(dim: usize, maps: &[Matrix<F>]) -> bool {
    if dim == 0 {
        return true;
    }
    let refs: Vec<&Matrix<F>> = maps.iter().collect();
    !maps.is_empty() && Matrix::vstack(dim, &refs).rank() == dim
}

/// Reports (R) and both left exactness conditions at every non-frozen vertex of `window`.
///
/// (R) is decided on `k(ZQ)`; when no witness is found but `Hom(x, -)` reaches the
/// top of the window and `C` is periodic, the answer is undetermined. Exactness is
/// undetermined when arrows at `x` leave the window, or when no failure is seen
/// but the relevant Hom spaces are cut off by the window.
pub fn check_configuration(q: Arc<Quiver>, config: &Configuration, window: Window) -> Result<ConfigReport> {
    let dq = DerivedCategory::new(q.clone(), window)?;
    let rq = Arc::new(RepQuiver::new(q.clone(), true, window, config.clone()));
    let cat = MeshCategory::<Q>::new(rq.clone());
    let n = q.vertex_count();
    let open_beyond = !matches!(config, Configuration::Listed { period: None, .. });
    let mut vertices = Vec::new();
    for p in window.levels() {
        for i in 0..n {
            let x = RepVertex::new(i, p);
            let mut witnessed = false;
            let mut reaches_top = false;
            for l in p..=window.hi {
                for j in 0..n {
                    let c = RepVertex::new(j, l);
                    let d = dq.hom(x, c)?;
                    witnessed |= d > 0 && config.contains(c);
                    reaches_top |= d > 0 && l == window.hi;
                }
            }
            let condition_r = if witnessed {
                Verdict::Holds
            } else if reaches_top && open_beyond {
                Verdict::Undetermined
            } else {
                Verdict::Fails
            };

            let xi = cat.index(x)?;
            let last = rq.vertices().len();
            let exact_out = if p == window.hi {
                Verdict::Undetermined
            } else {
                let out = rq.outgoing(xi);
                let ok = (0..=xi).all(|u| {
                    let h = cat.functor(u);
                    let maps: Vec<Matrix<Q>> = out.iter().map(|&b| h.arrow_map(b).clone()).collect();
                    injective(h.dim(xi), &maps)
                });
                // sources below the window could still break injectivity
                let truncated = (0..=xi).any(|u| rq.vertex(u).level == window.lo && cat.dim(u, xi) > 0);
                bounded(ok, truncated)
            };
            let exact_in = if p == window.lo {
                Verdict::Undetermined
            } else {
                // precomposition with each arrow y -> x
                let pre: Vec<Vec<Matrix<Q>>> = rq
                    .incoming(xi)
                    .iter()
                    .map(|&b| {
                        let y = rq.ends(b).0;
                        let arrow = cat.functor(y).push(&[Q::one()], &[b]);
                        cat.precomposition(y, xi, &arrow)
                    })
                    .collect();
                let ok = (xi..last).all(|u| {
                    let maps: Vec<Matrix<Q>> = pre.iter().map(|m| m[u].clone()).collect();
                    injective(cat.dim(xi, u), &maps)
                });
                let truncated = (xi..last).any(|u| rq.vertex(u).level == window.hi && cat.dim(xi, u) > 0);
                bounded(ok, truncated)
            };
            vertices.push(VertexCheck { vertex: x, condition_r, exact_out, exact_in });
        }
    }
    Ok(ConfigReport { window, vertices })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Arc<Quiver> {
        Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap())
    }

    #[test]
    fn everything_retained() {
        let r = check_configuration(a2(), &Configuration::All, Window::new(0, 4).unwrap()).unwrap();
        assert_eq!(r.condition_r(), Some(true));
        assert!(r.vertices.iter().all(|v| v.exact_out != Verdict::Fails && v.exact_in != Verdict::Fails));
    }

    #[test]
    fn nothing_retained() {
        let empty = Configuration::listed([], None).unwrap();
        let r = check_configuration(a2(), &empty, Window::new(0, 4).unwrap()).unwrap();
        assert!(r.vertices.iter().all(|v| v.condition_r == Verdict::Fails));
    }
}
