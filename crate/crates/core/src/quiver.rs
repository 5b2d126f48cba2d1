//! The infinite quiver attached to a Cartan matrix, its connected
//! components, the truncation to a finite seed quiver, and the labelling of
//! vertices by Kirillov-Reshetikhin modules.

use crate::cartan::CartanData;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// A vertex `(i, r)` of the infinite quiver; `i` is a 1-based node index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub i: usize,
    pub r: i64,
}

impl Vertex {
    pub fn new(i: usize, r: i64) -> Vertex {
        Vertex { i, r }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.r)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Vertex> {
        let err = || Error::Config(format!("bad vertex `{s}`"));
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(err)?;
        let (a, b) = inner.split_once(',').ok_or_else(err)?;
        Ok(Vertex {
            i: a.trim().parse().map_err(|_| err())?,
            r: b.trim().parse().map_err(|_| err())?,
        })
    }
}

/// A finite directed multigraph with a frozen vertex subset.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QuiverGraph {
    pub vertices: BTreeSet<Vertex>,
    /// arrow multiplicities, keyed by (source, target)
    pub arrows: BTreeMap<(Vertex, Vertex), i64>,
    pub frozen: BTreeSet<Vertex>,
}

impl QuiverGraph {
    pub fn add_arrow(&mut self, src: Vertex, dst: Vertex, mult: i64) {
        if mult == 0 {
            return;
        }
        let slot = self.arrows.entry((src, dst)).or_insert(0);
        *slot += mult;
        if *slot == 0 {
            self.arrows.remove(&(src, dst));
        }
    }

    pub fn mutable_vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter().filter(|v| !self.frozen.contains(v))
    }

    pub fn arrows_into(&self, v: Vertex) -> Vec<(Vertex, i64)> {
        self.arrows
            .iter()
            .filter(|((_, d), _)| *d == v)
            .map(|((s, _), &m)| (*s, m))
            .collect()
    }

    pub fn arrows_out_of(&self, v: Vertex) -> Vec<(Vertex, i64)> {
        self.arrows
            .iter()
            .filter(|((s, _), _)| *s == v)
            .map(|((_, d), &m)| (*d, m))
            .collect()
    }

    /// No loops, no 2-cycles.
    pub fn check_no_loops_or_two_cycles(&self) -> bool {
        self.arrows.keys().all(|&(s, d)| s != d && !self.arrows.contains_key(&(d, s)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vs: Vec<_> = self.vertices.iter().map(|v| vec![v.i as i64, v.r]).collect();
        let mut arrows = Vec::new();
        for (&(s, d), &m) in &self.arrows {
            for _ in 0..m {
                arrows.push(vec![vec![s.i as i64, s.r], vec![d.i as i64, d.r]]);
            }
        }
        let frozen: Vec<_> = self.frozen.iter().map(|v| vec![v.i as i64, v.r]).collect();
        serde_json::json!({"vertices": vs, "arrows": arrows, "frozen": frozen})
    }
}

/// Truncation parameters: the level and the component anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationParams {
    pub ell: i64,
    pub anchor: Vertex,
}

impl TruncationParams {
    /// Library default anchor `(1, -d_1)`.
    pub fn with_default_anchor(cd: &CartanData, ell: i64) -> TruncationParams {
        TruncationParams { ell, anchor: Vertex::new(1, -cd.d(1)) }
    }
}

/// All arrow targets of `v` in the infinite quiver: `(j, r + b_ij)` for
/// every `j` with `b_ij != 0`.
pub fn arrows_from(cd: &CartanData, v: Vertex) -> Vec<Vertex> {
    cd.nodes()
        .filter(|&j| cd.b(v.i, j) != 0)
        .map(|j| Vertex::new(j, v.r + cd.b(v.i, j)))
        .collect()
}

/// Arrow sources into `v`: `(j, s)` with `s + b_ji = r`.
pub fn arrows_into(cd: &CartanData, v: Vertex) -> Vec<Vertex> {
    cd.nodes()
        .filter(|&j| cd.b(j, v.i) != 0)
        .map(|j| Vertex::new(j, v.r - cd.b(j, v.i)))
        .collect()
}

/// Membership of `v` in the connected component of `anchor`, decided on the
/// finite quotient graph over `I x Z/2` (all arrow shifts act on `r mod 2`,
/// and within one column every even shift is realized by some cycle of
/// arrows, so the quotient classes are exactly the two components).
pub fn in_component(cd: &CartanData, anchor: Vertex, v: Vertex) -> bool {
    let n = cd.rank();
    let idx = |i: usize, p: i64| (i - 1) * 2 + (p.rem_euclid(2) as usize);
    let mut seen = vec![false; n * 2];
    let mut queue = VecDeque::new();
    seen[idx(anchor.i, anchor.r)] = true;
    queue.push_back((anchor.i, anchor.r.rem_euclid(2)));
    while let Some((i, p)) = queue.pop_front() {
        for j in cd.nodes() {
            if cd.b(i, j) != 0 {
                let q = (p + cd.b(i, j)).rem_euclid(2);
                if !seen[idx(j, q)] {
                    seen[idx(j, q)] = true;
                    queue.push_back((j, q));
                }
            }
        }
    }
    seen[idx(v.i, v.r)]
}

/// Breadth-first closure of `anchor` under arrows in both directions,
/// intersected with the window of allowed shifts.
pub fn component(cd: &CartanData, anchor: Vertex, window: (i64, i64)) -> BTreeSet<Vertex> {
    let (lo, hi) = window;
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    if anchor.r < lo || anchor.r > hi {
        return seen;
    }
    seen.insert(anchor);
    queue.push_back(anchor);
    while let Some(v) = queue.pop_front() {
        for w in arrows_from(cd, v).into_iter().chain(arrows_into(cd, v)) {
            if w.r >= lo && w.r <= hi && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// The truncated quiver on `V_ell` with its frozen subset.
pub fn truncated_quiver(cd: &CartanData, params: &TruncationParams) -> Result<QuiverGraph> {
    let ell = params.ell;
    if ell < 0 {
        return Err(Error::Config(format!("negative level {ell}")));
    }
    let mut g = QuiverGraph::default();
    for i in cd.nodes() {
        let d = cd.d(i);
        // -2l-1 <= r + d_i <= 0
        for r in (-2 * ell - 1 - d)..=(-d) {
            let v = Vertex::new(i, r);
            if in_component(cd, params.anchor, v) {
                g.vertices.insert(v);
                if r - d < -2 * ell - 1 {
                    g.frozen.insert(v);
                }
            }
        }
    }
    if g.vertices.is_empty() {
        return Err(Error::EmptyTruncation);
    }
    let verts: Vec<Vertex> = g.vertices.iter().copied().collect();
    for &v in &verts {
        for w in arrows_from(cd, v) {
            if g.vertices.contains(&w) {
                g.add_arrow(v, w, 1);
            }
        }
    }
    debug_assert!(g.check_no_loops_or_two_cycles());
    Ok(g)
}

/// The Kirillov-Reshetikhin index attached to a vertex of `V_ell`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct KrIndex {
    pub i: usize,
    pub k: i64,
    /// spectral exponent: the module is `W^{(i)}_{k, q^r}`
    pub r: i64,
}

impl fmt::Display for KrIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W^({})_{{{},q^{}}}", self.i, self.k, self.r)
    }
}

/// Label a truncation vertex `(i, r)` by its KR module
/// `W^{(i)}_{m_{i,r}, q^{r+d_i}}` with `m_{i,r} = max{k | r+(2k+1)d_i <= 0} + 1`.
pub fn kr_label(cd: &CartanData, v: Vertex, ell: i64) -> Result<KrIndex> {
    cd.check_node(v.i)?;
    let d = cd.d(v.i);
    if !(-2 * ell - 1 <= v.r + d && v.r + d <= 0) {
        return Err(Error::VertexNotInTruncation(v));
    }
    let k = (-v.r - d).div_euclid(2 * d) + 1;
    Ok(KrIndex { i: v.i, k, r: v.r + d })
}
