//! The quiver of the singular category: arrows and minimal relations between
//! retained frozen vertices, read off from the derived category.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::derived::DerivedCategory;
use crate::error::Result;
use crate::quiver::{Configuration, Quiver, RepVertex, Window};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingQuiver {
    pub window: Window,
    /// Retained frozen vertices of the window, each flagged complete when all of
    /// its incoming and outgoing counts are determined inside the window.
    pub vertices: BTreeMap<RepVertex, bool>,
    /// Arrows `sigma x -> sigma y`, counted by `dim Hom(x, tau y)`.
    pub arrows: BTreeMap<(RepVertex, RepVertex), usize>,
    /// Minimal relations `sigma x -> sigma y`, counted by `dim Hom(nu x, tau^2 y)`; zero off Dynkin type.
    pub relations: BTreeMap<(RepVertex, RepVertex), usize>,
}

impl SingQuiver {
    pub fn arrows_from(&self, v: RepVertex) -> usize {
        self.arrows.iter().filter(|((s, _), _)| *s == v).map(|(_, &n)| n).sum()
    }

    pub fn arrow_count(&self, s: RepVertex, t: RepVertex) -> usize {
        self.arrows.get(&(s, t)).copied().unwrap_or(0)
    }

    pub fn relation_count(&self, s: RepVertex, t: RepVertex) -> usize {
        self.relations.get(&(s, t)).copied().unwrap_or(0)
    }
}

/// Builds the counts for all retained frozen vertices of `window`.
///
/// The computation runs on the repetition quiver over `[lo, hi + 1]`, so that
/// every frozen vertex `sigma x` of the window has `x` in range.
pub fn build_sing_quiver(q: Arc<Quiver>, config: &Configuration, window: Window) -> Result<SingQuiver> {
    let inner = Window { lo: window.lo, hi: window.hi + 1 };
    let dq = DerivedCategory::new(q.clone(), inner)?;
    let rq = dq.mesh().quiver();
    let n = q.vertex_count();
    let members: Vec<RepVertex> = window
        .levels()
        .flat_map(|p| (0..n).map(move |i| RepVertex::frozen(i, p)))
        .filter(|&f| config.retains(f))
        .collect();
    let level = |l: i64| -> Vec<RepVertex> { (0..n).map(|i| RepVertex::new(i, l)).collect() };
    let (top, bottom) = (level(inner.hi), level(inner.lo));
    // whether Hom(x, -) reaches the top level of the window
    let reaches_top = |x: RepVertex| -> bool {
        rq.index_of(x).is_none() || top.iter().any(|&t| dq.hom(x, t).map_or(true, |d| d > 0))
    };
    // whether Hom(-, y) reaches the bottom level of the window
    let reaches_bottom = |y: RepVertex| -> bool {
        rq.index_of(y).is_none() || bottom.iter().any(|&b| dq.hom(b, y).map_or(true, |d| d > 0))
    };
    let nu = dq.nakayama();
    let mut report = SingQuiver {
        window,
        vertices: BTreeMap::new(),
        arrows: BTreeMap::new(),
        relations: BTreeMap::new(),
    };
    for &s in &members {
        let x = s.sigma_inv();
        let mut complete = !reaches_top(x) && !reaches_bottom(x.tau());
        if let Some(nu) = nu {
            complete &= !reaches_top(nu.nu(x));
            complete &= !reaches_bottom(nu.nu_inv(x.tau().tau()));
        }
        report.vertices.insert(s, complete);
        for &t in &members {
            let y = t.sigma_inv();
            if let Ok(d) = dq.hom(x, y.tau()) {
                if d > 0 {
                    report.arrows.insert((s, t), d);
                }
            }
            if let Some(nu) = nu {
                if let Ok(d) = dq.hom(nu.nu(x), y.tau().tau()) {
                    if d > 0 {
                        report.relations.insert((s, t), d);
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_is_a_line() {
        let q = Arc::new(Quiver::new(&["1"], &[]).unwrap());
        let s = build_sing_quiver(q, &Configuration::All, Window::new(0, 6).unwrap()).unwrap();
        let v = RepVertex::frozen(0, 3);
        assert_eq!(s.arrows_from(v), 1);
        assert_eq!(s.arrow_count(v, RepVertex::frozen(0, 4)), 1);
        assert_eq!(s.relation_count(v, RepVertex::frozen(0, 5)), 1);
        assert!(s.vertices[&v]);
    }
}
