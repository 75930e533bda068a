//! Finite quivers, their framings, and windows of the repetition quiver.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QArrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// A finite acyclic quiver. Parallel arrows are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    names: Vec<String>,
    arrows: Vec<QArrow>,
    /// `rank[v]` is the position of `v` in a fixed topological order.
    rank: Vec<usize>,
}

impl Quiver {
    /// `arrows` holds `(id, source, target)` triples naming vertices.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let mut seen = BTreeSet::new();
        for n in &names {
            if n.is_empty() || n.contains('@') || n.contains('>') || n.ends_with('\'') || n.ends_with('*') {
                return Err(Error::InvalidInput(format!("bad vertex name {n:?}")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate vertex {n:?}")));
            }
        }
        let find = |s: &str| names.iter().position(|n| n == s).ok_or_else(|| Error::UnknownVertex(s.to_string()));
        let mut ids = BTreeSet::new();
        let mut qarrows = Vec::with_capacity(arrows.len());
        for (id, s, t) in arrows {
            let id = id.as_ref().to_string();
            if id.is_empty() || id.contains('@') || id.contains('>') || id.ends_with('*') {
                return Err(Error::InvalidInput(format!("bad arrow id {id:?}")));
            }
            if !ids.insert(id.clone()) {
                return Err(Error::InvalidInput(format!("duplicate arrow id {id:?}")));
            }
            qarrows.push(QArrow { id, source: find(s.as_ref())?, target: find(t.as_ref())? });
        }
        let n = names.len();
        let mut indeg = alloc::vec![0usize; n];
        for a in &qarrows {
            indeg[a.target] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut done = alloc::vec![false; n];
        while order.len() < n {
            let Some(v) = (0..n).find(|&v| !done[v] && indeg[v] == 0) else {
                return Err(Error::CyclicQuiver);
            };
            done[v] = true;
            order.push(v);
            for a in qarrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
            }
        }
        let mut rank = alloc::vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        Ok(Quiver { names, arrows: qarrows, rank })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn arrows(&self) -> &[QArrow] {
        &self.arrows
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// Connected components of the underlying graph, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut comp = alloc::vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = alloc::vec![start];
            let mut members = Vec::new();
            comp[start] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for a in &self.arrows {
                    for (x, y) in [(a.source, a.target), (a.target, a.source)] {
                        if x == v && comp[y] == usize::MAX {
                            comp[y] = id;
                            stack.push(y);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// An inclusive range of levels `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInput(format!("empty window [{lo}, {hi}]")));
        }
        Ok(Window { lo, hi })
    }

    pub fn contains(&self, level: i64) -> bool {
        self.lo <= level && level <= self.hi
    }

    pub fn covers(&self, other: &Window) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn levels(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A vertex `(i, p)` of the repetition quiver, or the frozen vertex `(i', p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RepVertex {
    pub level: i64,
    pub frozen: bool,
    pub node: usize,
}

impl RepVertex {
    pub fn new(node: usize, level: i64) -> Self {
        RepVertex { level, frozen: false, node }
    }

    pub fn frozen(node: usize, level: i64) -> Self {
        RepVertex { level, frozen: true, node }
    }

    /// Auslander-Reiten translation, one level down.
    pub fn tau(self) -> Self {
        self.shift(-1)
    }

    pub fn tau_inv(self) -> Self {
        self.shift(1)
    }

    pub fn shift(self, by: i64) -> Self {
        RepVertex { level: self.level + by, ..self }
    }

    /// `(i, p) -> (i', p-1)` and `(i', p) -> (i, p)`, so that applying it twice is `tau`.
    pub fn sigma(self) -> Self {
        if self.frozen {
            RepVertex::new(self.node, self.level)
        } else {
            RepVertex::frozen(self.node, self.level - 1)
        }
    }

    pub fn sigma_inv(self) -> Self {
        if self.frozen {
            RepVertex::new(self.node, self.level + 1)
        } else {
            RepVertex::frozen(self.node, self.level)
        }
    }

    pub fn key(&self, q: &Quiver) -> String {
        if self.frozen {
            format!("{}'@{}", q.name(self.node), self.level)
        } else {
            format!("{}@{}", q.name(self.node), self.level)
        }
    }

    /// Parses `"i@p"` or `"i'@p"`.
    pub fn parse(q: &Quiver, key: &str) -> Result<Self> {
        let bad = || Error::UnknownVertex(key.to_string());
        let (name, level) = key.rsplit_once('@').ok_or_else(bad)?;
        let level: i64 = level.trim().parse().map_err(|_| bad())?;
        let (name, frozen) = match name.strip_suffix('\'') {
            Some(n) => (n, true),
            None => (name, false),
        };
        let node = q.vertex(name).ok_or_else(bad)?;
        Ok(RepVertex { level, frozen, node })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArrowKind {
    /// `(a, p): (i, p) -> (j, p)` for `a: i -> j`.
    Inherited(usize),
    /// `sigma(a, p): (j, p-1) -> (i, p)` for `a: i -> j`.
    Reversed(usize),
    /// `(i, p) -> (i', p)`.
    Framing(usize),
    /// `(i', p-1) -> (i, p)`.
    CoFraming(usize),
}

/// An arrow of the (framed) repetition quiver, indexed by its target level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RepArrow {
    pub level: i64,
    pub kind: ArrowKind,
}

impl RepArrow {
    pub fn source(&self, q: &Quiver) -> RepVertex {
        let p = self.level;
        match self.kind {
            ArrowKind::Inherited(a) => RepVertex::new(q.arrows[a].source, p),
            ArrowKind::Reversed(a) => RepVertex::new(q.arrows[a].target, p - 1),
            ArrowKind::Framing(i) => RepVertex::new(i, p),
            ArrowKind::CoFraming(i) => RepVertex::frozen(i, p - 1),
        }
    }

    pub fn target(&self, q: &Quiver) -> RepVertex {
        let p = self.level;
        match self.kind {
            ArrowKind::Inherited(a) => RepVertex::new(q.arrows[a].target, p),
            ArrowKind::Reversed(a) => RepVertex::new(q.arrows[a].source, p),
            ArrowKind::Framing(i) => RepVertex::frozen(i, p),
            ArrowKind::CoFraming(i) => RepVertex::new(i, p),
        }
    }

    /// For `b: y -> x`, the arrow `tau(x) -> y` closing the mesh at `x`.
    pub fn sigma(&self) -> RepArrow {
        let p = self.level;
        match self.kind {
            ArrowKind::Inherited(a) => RepArrow { level: p, kind: ArrowKind::Reversed(a) },
            ArrowKind::Reversed(a) => RepArrow { level: p - 1, kind: ArrowKind::Inherited(a) },
            ArrowKind::Framing(i) => RepArrow { level: p, kind: ArrowKind::CoFraming(i) },
            ArrowKind::CoFraming(i) => RepArrow { level: p - 1, kind: ArrowKind::Framing(i) },
        }
    }

    pub fn tau(&self) -> RepArrow {
        RepArrow { level: self.level - 1, kind: self.kind }
    }

    pub fn key(&self, q: &Quiver) -> String {
        let p = self.level;
        match self.kind {
            ArrowKind::Inherited(a) => format!("{}@{p}", q.arrows[a].id),
            ArrowKind::Reversed(a) => format!("{}*@{p}", q.arrows[a].id),
            ArrowKind::Framing(i) => format!("{0}>{0}'@{p}", q.name(i)),
            ArrowKind::CoFraming(i) => format!("{0}'>{0}@{p}", q.name(i)),
        }
    }

    pub fn parse(q: &Quiver, key: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown arrow key {key:?}"));
        let (body, level) = key.rsplit_once('@').ok_or_else(bad)?;
        let level: i64 = level.trim().parse().map_err(|_| bad())?;
        let arrow = |id: &str| q.arrows.iter().position(|a| a.id == id).ok_or_else(bad);
        let kind = if let Some((s, t)) = body.split_once('>') {
            if let Some(s) = s.strip_suffix('\'') {
                if s != t {
                    return Err(bad());
                }
                ArrowKind::CoFraming(q.vertex(s).ok_or_else(bad)?)
            } else {
                if t.strip_suffix('\'') != Some(s) {
                    return Err(bad());
                }
                ArrowKind::Framing(q.vertex(s).ok_or_else(bad)?)
            }
        } else if let Some(id) = body.strip_suffix('*') {
            ArrowKind::Reversed(arrow(id)?)
        } else {
            ArrowKind::Inherited(arrow(body)?)
        };
        Ok(RepArrow { level, kind })
    }
}

/// Arrows of the unframed repetition quiver ending at `x`, with multiplicity.
pub fn repetition_arrows_into(q: &Quiver, x: RepVertex) -> Vec<RepArrow> {
    debug_assert!(!x.frozen);
    let mut out = Vec::new();
    for (a, arr) in q.arrows().iter().enumerate() {
        if arr.target == x.node {
            out.push(RepArrow { level: x.level, kind: ArrowKind::Inherited(a) });
        }
        if arr.source == x.node {
            out.push(RepArrow { level: x.level, kind: ArrowKind::Reversed(a) });
        }
    }
    out
}

/// A set `C` of non-frozen vertices. The frozen vertex `(i', p)` is retained
/// exactly when `(i, p)` belongs to `C`, that is when `sigma(i', p)` does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Configuration {
    All,
    Listed { members: BTreeSet<(usize, i64)>, period: Option<i64> },
}

impl Configuration {
    pub fn listed(members: impl IntoIterator<Item = RepVertex>, period: Option<i64>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for v in members {
            if v.frozen {
                return Err(Error::InvalidInput("configuration members must be non-frozen".into()));
            }
            set.insert((v.node, v.level));
        }
        if let Some(k) = period {
            if k <= 0 {
                return Err(Error::InvalidInput(format!("period must be positive, got {k}")));
            }
        }
        Ok(Configuration::Listed { members: set, period })
    }

    pub fn contains(&self, v: RepVertex) -> bool {
        if v.frozen {
            return false;
        }
        match self {
            Configuration::All => true,
            Configuration::Listed { members, period: None } => members.contains(&(v.node, v.level)),
            Configuration::Listed { members, period: Some(k) } => members
                .iter()
                .any(|&(n, l)| n == v.node && (v.level - l).rem_euclid(*k) == 0),
        }
    }

    pub fn retains(&self, frozen: RepVertex) -> bool {
        frozen.frozen && self.contains(frozen.sigma())
    }
}

/// A finite window of the repetition quiver, optionally framed, with the
/// frozen vertices outside the configuration removed.
#[derive(Debug)]
pub struct RepQuiver {
    quiver: Arc<Quiver>,
    framed: bool,
    window: Window,
    config: Configuration,
    vertices: Vec<RepVertex>,
    index: BTreeMap<RepVertex, usize>,
    arrows: Vec<RepArrow>,
    arrow_index: BTreeMap<RepArrow, usize>,
    arrow_ends: Vec<(usize, usize)>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
}

impl PartialEq for RepQuiver {
    fn eq(&self, other: &Self) -> bool {
        self.quiver == other.quiver
            && self.framed == other.framed
            && self.window == other.window
            && self.vertices == other.vertices
    }
}

impl Eq for RepQuiver {}

impl RepQuiver {
    pub fn new(quiver: Arc<Quiver>, framed: bool, window: Window, config: Configuration) -> Self {
        let n = quiver.vertex_count();
        let mut vertices = Vec::new();
        for p in window.levels() {
            for i in 0..n {
                vertices.push(RepVertex::new(i, p));
            }
            if framed {
                for i in 0..n {
                    let f = RepVertex::frozen(i, p);
                    if config.retains(f) {
                        vertices.push(f);
                    }
                }
            }
        }
        let order_key = |v: &RepVertex| (v.level, v.frozen, quiver.rank(v.node));
        vertices.sort_by_key(order_key);
        let index: BTreeMap<RepVertex, usize> = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();

        let mut arrows = Vec::new();
        for p in window.levels() {
            for a in 0..quiver.arrows().len() {
                arrows.push(RepArrow { level: p, kind: ArrowKind::Inherited(a) });
                arrows.push(RepArrow { level: p, kind: ArrowKind::Reversed(a) });
            }
            if framed {
                for i in 0..n {
                    arrows.push(RepArrow { level: p, kind: ArrowKind::Framing(i) });
                    arrows.push(RepArrow { level: p, kind: ArrowKind::CoFraming(i) });
                }
            }
        }
        arrows.retain(|a| index.contains_key(&a.source(&quiver)) && index.contains_key(&a.target(&quiver)));
        arrows.sort_by_key(|a| (index[&a.target(&quiver)], index[&a.source(&quiver)], a.kind));
        let arrow_index = arrows.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let arrow_ends: Vec<(usize, usize)> =
            arrows.iter().map(|a| (index[&a.source(&quiver)], index[&a.target(&quiver)])).collect();
        let mut incoming = alloc::vec![Vec::new(); vertices.len()];
        let mut outgoing = alloc::vec![Vec::new(); vertices.len()];
        for (k, &(s, t)) in arrow_ends.iter().enumerate() {
            incoming[t].push(k);
            outgoing[s].push(k);
        }
        RepQuiver { quiver, framed, window, config, vertices, index, arrows, arrow_index, arrow_ends, incoming, outgoing }
    }

    /// Unframed window of the repetition quiver.
    pub fn repetition(quiver: Arc<Quiver>, window: Window) -> Self {
        Self::new(quiver, false, window, Configuration::All)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn framed(&self) -> bool {
        self.framed
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn configuration(&self) -> &Configuration {
        &self.config
    }

    /// Vertices in topological order.
    pub fn vertices(&self) -> &[RepVertex] {
        &self.vertices
    }

    pub fn vertex(&self, idx: usize) -> RepVertex {
        self.vertices[idx]
    }

    pub fn index_of(&self, v: RepVertex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn arrows(&self) -> &[RepArrow] {
        &self.arrows
    }

    pub fn arrow(&self, idx: usize) -> RepArrow {
        self.arrows[idx]
    }

    pub fn arrow_index(&self, a: RepArrow) -> Option<usize> {
        self.arrow_index.get(&a).copied()
    }

    /// `(source index, target index)`.
    pub fn ends(&self, arrow: usize) -> (usize, usize) {
        self.arrow_ends[arrow]
    }

    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    pub fn outgoing(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    pub fn frozen_vertices(&self) -> impl Iterator<Item = RepVertex> + '_ {
        self.vertices.iter().copied().filter(|v| v.frozen)
    }

    /// Whether a mesh relation is imposed at vertex `v`: non-frozen with `tau(v)` present.
    pub fn has_mesh(&self, v: usize) -> bool {
        let x = self.vertices[v];
        !x.frozen && self.window.contains(x.level - 1)
    }

    /// Terms `(b, sigma(b))` of the mesh relator at `v`, over the arrows `b` into `v`.
    pub fn mesh_terms(&self, v: usize) -> Vec<(usize, usize)> {
        self.incoming[v]
            .iter()
            .map(|&b| {
                let s = self.arrow_index(self.arrows[b].sigma()).expect("mesh closing arrow inside window");
                (b, s)
            })
            .collect()
    }

    /// Same quiver and configuration on another window.
    pub fn with_window(&self, window: Window) -> Self {
        Self::new(self.quiver.clone(), self.framed, window, self.config.clone())
    }

    pub fn vertex_key(&self, v: RepVertex) -> String {
        v.key(&self.quiver)
    }

    pub fn arrow_key(&self, a: RepArrow) -> String {
        a.key(&self.quiver)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Arc<Quiver> {
        Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap())
    }

    #[test]
    fn rejects_cycles_and_unknowns() {
        assert_eq!(Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]), Err(Error::CyclicQuiver));
        assert!(matches!(Quiver::new(&["1"], &[("a", "1", "3")]), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn sigma_squares_to_tau() {
        for v in [RepVertex::new(0, 3), RepVertex::frozen(1, -2)] {
            assert_eq!(v.sigma().sigma(), v.tau());
            assert_eq!(v.sigma().sigma_inv(), v);
        }
    }

    #[test]
    fn arrow_sigma_squares_to_tau() {
        let q = a2();
        for kind in [ArrowKind::Inherited(0), ArrowKind::Reversed(0), ArrowKind::Framing(1), ArrowKind::CoFraming(0)] {
            let b = RepArrow { level: 4, kind };
            let s = b.sigma();
            assert_eq!(s.source(&q), b.target(&q).tau());
            assert_eq!(s.target(&q), b.source(&q));
            assert_eq!(s.sigma(), b.tau());
        }
    }

    #[test]
    fn keys_round_trip() {
        let q = a2();
        let rq = RepQuiver::new(q.clone(), true, Window::new(0, 2).unwrap(), Configuration::All);
        for &v in rq.vertices() {
            assert_eq!(RepVertex::parse(&q, &v.key(&q)).unwrap(), v);
        }
        for &a in rq.arrows() {
            assert_eq!(RepArrow::parse(&q, &a.key(&q)).unwrap(), a);
        }
    }

    #[test]
    fn topological_order() {
        let rq = RepQuiver::new(a2(), true, Window::new(-1, 2).unwrap(), Configuration::All);
        for k in 0..rq.arrows().len() {
            let (s, t) = rq.ends(k);
            assert!(s < t);
        }
        assert_eq!(rq.vertices().len(), 16);
    }

    #[test]
    fn configuration_retains_by_sigma() {
        let q = a2();
        let c = Configuration::listed([RepVertex::new(0, 0)], Some(2)).unwrap();
        let rq = RepQuiver::new(q, true, Window::new(0, 3).unwrap(), c);
        let frozen: Vec<_> = rq.frozen_vertices().collect();
        assert_eq!(frozen, alloc::vec![RepVertex::frozen(0, 0), RepVertex::frozen(0, 2)]);
        // the framing arrow from a member of C lands on a retained vertex
        assert!(rq.arrow_index(RepArrow { level: 2, kind: ArrowKind::Framing(0) }).is_some());
    }
}
