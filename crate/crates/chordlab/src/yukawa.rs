//! Yukawa 1PI tadpoles, the maps Psi / Psi^{-1}, the Psi-order, the
//! bijection Lambda onto connected chord diagrams, quenched QED vertex
//! graphs and the Green-function series.
//!
//! A tadpole on `m = 2n - 1` trivalent vertices is stored as the fermion
//! successor permutation `next` (loops run counter-clockwise), the boson
//! partner of each vertex and the leg vertex `v_T` whose boson is external.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bijections::{nabla, nabla_inv, BijError, RootShareTriple};
use crate::chord::{ChordDiagram, ChordError};
use crate::fps::{q, qi, FormalPowerSeries as Fps, Q};
use crate::gfseries::{series_c, series_c2, IdentityReport, TableRow};

/// Default loop-number guard for tadpole enumeration.
pub const MAX_TADPOLE_LOOPS: usize = 4;
/// Guard when the extended flag is passed.
pub const MAX_TADPOLE_LOOPS_EXTENDED: usize = 5;
/// Loop-number guard for quenched QED vertex graphs.
pub const MAX_QQED_LOOPS: usize = 6;

/// `hbar^0` entry of the two-leg rows of the Yukawa table; a convention of
/// the Green functions, not produced by any graph count.
pub const TWO_LEG_HBAR0: i64 = -1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum YukawaError {
    #[error("loop number {0} exceeds the enumeration guard")]
    TooLarge(usize),
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("the one-vertex tadpole has no decomposition")]
    Single,
    #[error("vertex {0} not in graph")]
    NoSuchVertex(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Bij(#[from] BijError),
    #[error(transparent)]
    Chord(#[from] ChordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TadpoleGraph {
    next: Vec<usize>,
    boson: Vec<Option<usize>>,
    leg: usize,
}

impl TadpoleGraph {
    pub fn new(next: Vec<usize>, boson: Vec<Option<usize>>, leg: usize) -> Result<Self, YukawaError> {
        let m = next.len();
        if m == 0 || boson.len() != m || leg >= m {
            return Err(YukawaError::Malformed("sizes".into()));
        }
        let mut seen = vec![false; m];
        for &v in &next {
            if v >= m || std::mem::replace(&mut seen[v], true) {
                return Err(YukawaError::Malformed("next is not a permutation".into()));
            }
        }
        for (v, b) in boson.iter().enumerate() {
            match *b {
                None if v != leg => return Err(YukawaError::Malformed(format!("vertex {v} has no boson"))),
                Some(_) if v == leg => return Err(YukawaError::Malformed("leg vertex has internal boson".into())),
                Some(p) if p >= m || p == v || boson[p] != Some(v) => {
                    return Err(YukawaError::Malformed("boson is not an involution".into()))
                }
                _ => {}
            }
        }
        Ok(TadpoleGraph { next, boson, leg })
    }

    /// The one-vertex tadpole `X`.
    pub fn single() -> Self {
        TadpoleGraph { next: vec![0], boson: vec![None], leg: 0 }
    }

    pub fn vertex_count(&self) -> usize {
        self.next.len()
    }

    /// Boson edges including the leg; equals the loop number.
    pub fn loops(&self) -> usize {
        (self.next.len() + 1) / 2
    }

    pub fn leg(&self) -> usize {
        self.leg
    }

    pub fn next(&self, v: usize) -> usize {
        self.next[v]
    }

    pub fn prev(&self, v: usize) -> usize {
        self.next.iter().position(|&x| x == v).expect("permutation")
    }

    pub fn boson(&self, v: usize) -> Option<usize> {
        self.boson[v]
    }

    pub fn is_single(&self) -> bool {
        self.next.len() == 1
    }

    pub fn fermion_loops(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.next.len()];
        let mut out = Vec::new();
        for s in 0..self.next.len() {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut v = self.next[s];
            while v != s {
                seen[v] = true;
                cyc.push(v);
                v = self.next[v];
            }
            out.push(cyc);
        }
        out
    }

    /// Connected and bridgeless.
    pub fn is_1pi(&self) -> bool {
        let w = Work::from_graph(self, 0);
        w.component_without(self.leg, None).len() == self.next.len() && w.bridges().is_empty()
    }

    /// Relabel by breadth-first discovery from the leg vertex, looking at
    /// the fermion successor before the boson partner. `mark` follows.
    pub fn canonical_with_mark(&self, mark: Option<usize>) -> (TadpoleGraph, Option<usize>) {
        let m = self.next.len();
        let mut label = vec![usize::MAX; m];
        let mut order = Vec::with_capacity(m);
        let mut queue = VecDeque::from([self.leg]);
        label[self.leg] = 0;
        order.push(self.leg);
        while let Some(u) = queue.pop_front() {
            let nbrs = [Some(self.next[u]), self.boson[u]];
            for v in nbrs.into_iter().flatten() {
                if label[v] == usize::MAX {
                    label[v] = order.len();
                    order.push(v);
                    queue.push_back(v);
                }
            }
        }
        assert_eq!(order.len(), m, "tadpole graphs are connected");
        let next = order.iter().map(|&v| label[self.next[v]]).collect();
        let boson = order.iter().map(|&v| self.boson[v].map(|p| label[p])).collect();
        (TadpoleGraph { next, boson, leg: 0 }, mark.map(|d| label[d]))
    }

    pub fn canonical(&self) -> TadpoleGraph {
        self.canonical_with_mark(None).0
    }
}

impl fmt::Display for TadpoleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "loops: ")?;
        for cyc in self.fermion_loops() {
            let s: Vec<String> = cyc.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        let pairs: Vec<String> = (0..self.next.len())
            .filter_map(|v| self.boson[v].filter(|&p| v < p).map(|p| format!("{v}-{p}")))
            .collect();
        if pairs.is_empty() {
            write!(f, " ; bosons: ; leg: {}", self.leg)
        } else {
            write!(f, " ; bosons: {} ; leg: {}", pairs.join(", "), self.leg)
        }
    }
}

impl FromStr for TadpoleGraph {
    type Err = YukawaError;

    /// `loops: (v1 v2 ...)(...) ; bosons: a-b, c-d ; leg: v` with arbitrary
    /// distinct vertex names (non-negative integers).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let perr = |m: &str| YukawaError::Parse(m.to_string());
        let mut loops_part = None;
        let mut bosons_part = "";
        let mut leg_part = None;
        for sec in s.split(';') {
            let (key, val) = sec.split_once(':').ok_or_else(|| perr("missing ':'"))?;
            match key.trim() {
                "loops" => loops_part = Some(val),
                "bosons" => bosons_part = val,
                "leg" => leg_part = Some(val.trim()),
                other => return Err(perr(&format!("unknown section {other:?}"))),
            }
        }
        let loops_part = loops_part.ok_or_else(|| perr("no loops"))?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| perr(&format!("bad vertex {t:?}")));
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for chunk in loops_part.split('(').skip(1) {
            let body = chunk.split(')').next().unwrap_or("");
            let cyc = body.split_whitespace().map(num).collect::<Result<Vec<_>, _>>()?;
            if cyc.is_empty() {
                return Err(perr("empty loop"));
            }
            cycles.push(cyc);
        }
        let names: BTreeSet<usize> = cycles.iter().flatten().copied().collect();
        if names.len() != cycles.iter().map(Vec::len).sum::<usize>() {
            return Err(perr("vertex repeated"));
        }
        let idx: BTreeMap<usize, usize> = names.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let get = |v: usize| idx.get(&v).copied().ok_or(YukawaError::NoSuchVertex(v));
        let m = names.len();
        let mut next = vec![0; m];
        for cyc in &cycles {
            for (i, &v) in cyc.iter().enumerate() {
                next[get(v)?] = get(cyc[(i + 1) % cyc.len()])?;
            }
        }
        let mut boson = vec![None; m];
        for pair in bosons_part.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = pair.split_once('-').ok_or_else(|| perr("boson needs a-b"))?;
            let (a, b) = (get(num(a)?)?, get(num(b)?)?);
            if boson[a].is_some() || boson[b].is_some() {
                return Err(perr("vertex on two bosons"));
            }
            boson[a] = Some(b);
            boson[b] = Some(a);
        }
        let leg = get(num(leg_part.ok_or_else(|| perr("no leg"))?)?)?;
        TadpoleGraph::new(next, boson, leg)
    }
}

/// Sparse working copy with arbitrary vertex names, used while cutting and
/// splicing.
#[derive(Debug, Clone)]
struct Work {
    next: BTreeMap<usize, usize>,
    boson: BTreeMap<usize, Option<usize>>,
}

impl Work {
    fn from_graph(t: &TadpoleGraph, off: usize) -> Self {
        Work {
            next: t.next.iter().enumerate().map(|(v, &n)| (v + off, n + off)).collect(),
            boson: t.boson.iter().enumerate().map(|(v, b)| (v + off, b.map(|p| p + off))).collect(),
        }
    }

    fn merge(&mut self, o: Work) {
        self.next.extend(o.next);
        self.boson.extend(o.boson);
    }

    fn prev(&self, v: usize) -> usize {
        *self.next.iter().find(|(_, &n)| n == v).expect("closed loops").0
    }

    fn partner(&self, v: usize) -> Option<usize> {
        self.boson.get(&v).copied().flatten().filter(|p| self.next.contains_key(p))
    }

    /// Internal edges: every fermion edge, and bosons with both ends present.
    fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self.next.iter().map(|(&a, &b)| (a, b)).collect();
        for &v in self.next.keys() {
            if let Some(p) = self.partner(v) {
                if v < p {
                    e.push((v, p));
                }
            }
        }
        e
    }

    fn adjacency(&self, edges: &[(usize, usize)]) -> BTreeMap<usize, Vec<(usize, usize)>> {
        let mut adj: BTreeMap<usize, Vec<(usize, usize)>> =
            self.next.keys().map(|&v| (v, Vec::new())).collect();
        for (id, &(a, b)) in edges.iter().enumerate() {
            adj.get_mut(&a).expect("vertex").push((b, id));
            if a != b {
                adj.get_mut(&b).expect("vertex").push((a, id));
            }
        }
        adj
    }

    /// Bridges as edge endpoints, in discovery order.
    fn bridges(&self) -> Vec<(usize, usize)> {
        let edges = self.edges();
        let adj = self.adjacency(&edges);
        let mut disc: BTreeMap<usize, usize> = BTreeMap::new();
        let mut low: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out = Vec::new();
        fn dfs(
            u: usize,
            via: Option<usize>,
            adj: &BTreeMap<usize, Vec<(usize, usize)>>,
            disc: &mut BTreeMap<usize, usize>,
            low: &mut BTreeMap<usize, usize>,
            edges: &[(usize, usize)],
            out: &mut Vec<(usize, usize)>,
        ) {
            let t = disc.len();
            disc.insert(u, t);
            low.insert(u, t);
            for &(v, id) in &adj[&u] {
                if Some(id) == via {
                    continue;
                }
                if let Some(&dv) = disc.get(&v) {
                    let l = low[&u].min(dv);
                    low.insert(u, l);
                } else {
                    dfs(v, Some(id), adj, disc, low, edges, out);
                    let l = low[&u].min(low[&v]);
                    low.insert(u, l);
                    if low[&v] > disc[&u] {
                        out.push(edges[id]);
                    }
                }
            }
        }
        for &s in self.next.keys() {
            if !disc.contains_key(&s) {
                dfs(s, None, &adj, &mut disc, &mut low, &edges, &mut out);
            }
        }
        out
    }

    /// Vertices reachable from `start`, ignoring one edge given by endpoints.
    fn component_without(&self, start: usize, skip: Option<(usize, usize)>) -> BTreeSet<usize> {
        let edges = self.edges();
        let skip_id = skip.and_then(|s| edges.iter().position(|&e| e == s));
        let adj = self.adjacency(&edges);
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &(v, id) in &adj[&u] {
                if Some(id) != skip_id && seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen
    }

    fn restrict(&self, set: &BTreeSet<usize>) -> Work {
        Work {
            next: self.next.iter().filter(|(v, _)| set.contains(v)).map(|(&a, &b)| (a, b)).collect(),
            boson: self.boson.iter().filter(|(v, _)| set.contains(v)).map(|(&a, &b)| (a, b)).collect(),
        }
    }

    /// Dense graph with vertices in increasing name order, and the names.
    fn dense(&self, leg: usize) -> Result<(TadpoleGraph, Vec<usize>), YukawaError> {
        let names: Vec<usize> = self.next.keys().copied().collect();
        let idx: BTreeMap<usize, usize> = names.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let lookup = |v: &usize| {
            idx.get(v)
                .copied()
                .ok_or_else(|| YukawaError::Malformed(format!("loop leaves vertex set at {v}")))
        };
        let next = names.iter().map(|v| lookup(&self.next[v])).collect::<Result<Vec<_>, _>>()?;
        let boson = names.iter().map(|&v| self.partner(v).map(|p| idx[&p])).collect();
        let leg = lookup(&leg)?;
        Ok((TadpoleGraph::new(next, boson, leg)?, names))
    }
}

/// Output side of Psi: a pair of tadpoles or a single larger tadpole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsiImage {
    Pair(TadpoleGraph, TadpoleGraph),
    Tadpole(TadpoleGraph),
}

/// `Psi(T1, (T2, d))`; `d = None` marks the free end `u_2` of the leg of
/// `T2`, otherwise a vertex of `T2`.
pub fn psi(t1: &TadpoleGraph, t2: &TadpoleGraph, d: Option<usize>) -> Result<PsiImage, YukawaError> {
    let Some(d) = d else {
        return Ok(PsiImage::Pair(t1.clone(), t2.clone()));
    };
    if d >= t2.vertex_count() {
        return Err(YukawaError::NoSuchVertex(d));
    }
    let (m1, m2) = (t1.vertex_count(), t2.vertex_count());
    let mut g = Work::from_graph(t1, 0);
    g.merge(Work::from_graph(t2, m1));
    let (u2, v1, v2, d) = (m1 + m2, t1.leg, m1 + t2.leg, m1 + d);
    g.boson.insert(v2, Some(u2));
    g.boson.insert(u2, Some(v2));
    let w = t1.next[v1];
    if w == v1 {
        // subdivide Fermion(d) by v1, then the new Fermion(v1) by u2
        let nd = g.next[&d];
        g.next.insert(d, v1);
        g.next.insert(v1, u2);
        g.next.insert(u2, nd);
    } else {
        let nw = g.next[&w];
        g.next.insert(v1, u2);
        g.next.insert(u2, nw);
        let nd = g.next[&d];
        g.next.insert(d, w);
        g.next.insert(w, nd);
    }
    Ok(PsiImage::Tadpole(g.dense(v1)?.0))
}

/// Pieces of `Psi^{-1}(T)` for a tadpole `T != X`, with vertex names of
/// `T` kept for the Psi-order.
#[derive(Debug, Clone)]
pub struct PsiSplit {
    pub t1: TadpoleGraph,
    /// `map1[i]` is the vertex of `T` that became vertex `i` of `T1`.
    pub map1: Vec<usize>,
    pub t2: TadpoleGraph,
    pub map2: Vec<usize>,
    /// Distinguished vertex of `T2` (index into `t2`).
    pub d: usize,
    /// `T1 = X`.
    pub single_t1: bool,
    /// The vertex after `v_T` in `T` (the old free end `u_2`).
    pub w_t: usize,
    /// The vertex after `d` in `T`.
    pub w_d: usize,
}

pub fn psi_split(t: &TadpoleGraph) -> Result<PsiSplit, YukawaError> {
    if t.is_single() {
        return Err(YukawaError::Single);
    }
    let vt = t.leg;
    let a = t.next[vt];
    let v2 = t.boson[a].ok_or_else(|| YukawaError::Malformed("vertex after leg has no boson".into()))?;
    let mut gamma = Work::from_graph(t, 0);
    let na = gamma.next.remove(&a).expect("vertex");
    gamma.boson.remove(&a);
    gamma.next.insert(vt, na);
    gamma.boson.insert(v2, None);

    if gamma.bridges().is_empty() {
        if gamma.component_without(vt, None).len() != gamma.next.len() {
            return Err(YukawaError::Malformed("disconnected without a bridge".into()));
        }
        let d = gamma.prev(vt);
        if d == vt {
            return Err(YukawaError::Malformed("leg loop too short".into()));
        }
        let mut rest = gamma.clone();
        let nv = rest.next.remove(&vt).expect("vertex");
        rest.boson.remove(&vt);
        rest.next.insert(d, nv);
        let (t2, map2) = rest.dense(v2)?;
        let di = map2.iter().position(|&v| v == d).expect("d kept");
        return Ok(PsiSplit {
            t1: TadpoleGraph::single(),
            map1: vec![vt],
            t2,
            map2,
            d: di,
            single_t1: true,
            w_t: a,
            w_d: vt,
        });
    }

    // chase bridges towards v2
    let mut g = gamma.clone();
    let mut b = None;
    while let Some(&br) = g.bridges().first() {
        b = Some(br);
        let comp = g.component_without(v2, Some(br));
        g = g.restrict(&comp);
    }
    let (x, y) = b.expect("at least one bridge");
    let w = if g.next.contains_key(&x) { x } else { y };
    let d = g.prev(w);
    if d == w {
        return Err(YukawaError::Malformed("bridge end on a one-vertex loop".into()));
    }
    let mut full = gamma.clone();
    let nw = full.next[&w];
    full.next.insert(d, nw);
    let nvt = full.next[&vt];
    full.next.insert(w, nvt);
    full.next.insert(vt, w);

    let gset: BTreeSet<usize> = g.next.keys().copied().collect();
    let t2set: BTreeSet<usize> = gset.iter().copied().filter(|&v| v != w).collect();
    let t1set: BTreeSet<usize> = full
        .next
        .keys()
        .copied()
        .filter(|v| !gset.contains(v) || *v == w)
        .collect();
    let (t2, map2) = full.restrict(&t2set).dense(v2)?;
    let (t1, map1) = full.restrict(&t1set).dense(vt)?;
    let di = map2.iter().position(|&v| v == d).expect("d kept");
    Ok(PsiSplit { t1, map1, t2, map2, d: di, single_t1: false, w_t: a, w_d: w })
}

/// `Psi^{-1}`: a pair maps back with `d = u_2`; a tadpole `T != X` is split.
pub fn psi_inv(img: &PsiImage) -> Result<(TadpoleGraph, TadpoleGraph, Option<usize>), YukawaError> {
    match img {
        PsiImage::Pair(t1, t2) => Ok((t1.clone(), t2.clone(), None)),
        PsiImage::Tadpole(t) => {
            let s = psi_split(t)?;
            Ok((s.t1, s.t2, Some(s.d)))
        }
    }
}

/// Psi-order of the fermion edges, indexed by source vertex: `out[v]` is
/// the order of `Fermion(v)`.
pub fn psi_order(t: &TadpoleGraph) -> Result<Vec<usize>, YukawaError> {
    let m = t.vertex_count();
    if m == 1 {
        return Ok(vec![1]);
    }
    let s = psi_split(t)?;
    let o2 = psi_order(&s.t2)?;
    let p = o2[s.d];
    let mut out = vec![0usize; m];
    out[t.leg] = 1;
    if s.single_t1 {
        for (i, &v) in s.map2.iter().enumerate() {
            out[v] = match o2[i] {
                x if x < p => x + 1,
                _ if i == s.d => p + 1,
                x => x + 2,
            };
        }
        out[s.w_t] = p + 2;
    } else {
        let o1 = psi_order(&s.t1)?;
        let big_m = s.t1.vertex_count();
        let w1 = s.t1.next[s.t1.leg];
        for (i, &v) in s.map1.iter().enumerate() {
            if v == t.leg {
                continue;
            }
            out[v] = if v == s.w_d { big_m + p + 1 } else { o1[i] + p };
        }
        out[s.w_t] = o1[w1] + p;
        for (i, &v) in s.map2.iter().enumerate() {
            out[v] = match o2[i] {
                x if x < p => x + 1,
                _ if i == s.d => p + 1,
                x => x + big_m + 1,
            };
        }
    }
    Ok(out)
}

/// `Lambda(X)` is the single chord; otherwise
/// `Lambda(T) = nabla^{-1}(Lambda(T1), (Lambda(T2), psi(d)))`.
pub fn lambda_bij(t: &TadpoleGraph) -> Result<ChordDiagram, YukawaError> {
    if t.is_single() {
        return Ok(ChordDiagram::single());
    }
    let s = psi_split(t)?;
    let k = psi_order(&s.t2)?[s.d];
    let triple = RootShareTriple { c1: lambda_bij(&s.t1)?, c2: lambda_bij(&s.t2)?, k };
    Ok(nabla_inv(&triple)?)
}

pub fn lambda_inv(c: &ChordDiagram) -> Result<TadpoleGraph, YukawaError> {
    if !c.is_connected() {
        return Err(BijError::NotConnected.into());
    }
    if c.n() == 1 {
        return Ok(TadpoleGraph::single());
    }
    let tr = nabla(c)?;
    let t1 = lambda_inv(&tr.c1)?;
    let t2 = lambda_inv(&tr.c2)?;
    let ord = psi_order(&t2)?;
    let d = ord
        .iter()
        .position(|&o| o == tr.k)
        .ok_or(BijError::KOutOfRange { k: tr.k, max: ord.len() })?;
    match psi(&t1, &t2, Some(d))? {
        PsiImage::Tadpole(t) => Ok(t.canonical()),
        PsiImage::Pair(..) => unreachable!("a vertex mark never yields a pair"),
    }
}

/// All 1PI tadpoles with `loops` boson edges, one per isomorphism class,
/// in canonical form. `extended` raises the guard to
/// [`MAX_TADPOLE_LOOPS_EXTENDED`].
pub fn enumerate_tadpoles(loops: usize, extended: bool) -> Result<Vec<TadpoleGraph>, YukawaError> {
    let guard = if extended { MAX_TADPOLE_LOOPS_EXTENDED } else { MAX_TADPOLE_LOOPS };
    if loops == 0 || loops > guard {
        return Err(YukawaError::TooLarge(loops));
    }
    let m = 2 * loops - 1;
    let mut st = Gen {
        m,
        next: vec![None; m],
        has_prev: vec![false; m],
        boson: vec![None; m],
        count: 1,
        out: Vec::new(),
    };
    st.boson[0] = Some(None);
    st.run(0);
    Ok(st.out)
}

/// Builds graphs directly in breadth-first canonical labelling: labels are
/// handed out in discovery order, so each class is produced once.
struct Gen {
    m: usize,
    next: Vec<Option<usize>>,
    has_prev: Vec<bool>,
    boson: Vec<Option<Option<usize>>>,
    count: usize,
    out: Vec<TadpoleGraph>,
}

impl Gen {
    fn run(&mut self, u: usize) {
        if u == self.count {
            if u == self.m {
                let t = TadpoleGraph {
                    next: self.next.iter().map(|v| v.expect("set")).collect(),
                    boson: self.boson.iter().map(|b| b.expect("set")).collect(),
                    leg: 0,
                };
                if t.is_1pi() {
                    self.out.push(t);
                }
            }
            return;
        }
        let mut choices: Vec<usize> = (0..self.count).filter(|&w| !self.has_prev[w]).collect();
        if self.count < self.m {
            choices.push(self.count);
        }
        for w in choices {
            let fresh = w == self.count;
            if fresh {
                self.count += 1;
            }
            self.next[u] = Some(w);
            self.has_prev[w] = true;
            self.choose_boson(u);
            self.has_prev[w] = false;
            self.next[u] = None;
            if fresh {
                self.count -= 1;
            }
        }
    }

    fn choose_boson(&mut self, u: usize) {
        if self.boson[u].is_some() {
            self.run(u + 1);
            return;
        }
        let mut choices: Vec<usize> = (1..self.count).filter(|&w| w != u && self.boson[w].is_none()).collect();
        if self.count < self.m {
            choices.push(self.count);
        }
        for w in choices {
            let fresh = w == self.count;
            if fresh {
                self.count += 1;
            }
            self.boson[u] = Some(Some(w));
            self.boson[w] = Some(Some(u));
            self.run(u + 1);
            self.boson[u] = None;
            self.boson[w] = None;
            if fresh {
                self.count -= 1;
            }
        }
    }
}

/// Quenched QED vertex graph: the fermion path `0 -> 1 -> ... -> m-1`
/// carries every vertex; photons pair all vertices but the one holding the
/// external photon leg.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QqedVertexGraph {
    photon: Vec<Option<usize>>,
    leg: usize,
}

impl QqedVertexGraph {
    pub fn new(photon: Vec<Option<usize>>, leg: usize) -> Result<Self, YukawaError> {
        let m = photon.len();
        if m % 2 == 0 || leg >= m {
            return Err(YukawaError::Malformed("path needs an odd number of vertices".into()));
        }
        for (v, p) in photon.iter().enumerate() {
            match *p {
                None if v != leg => return Err(YukawaError::Malformed(format!("vertex {v} has no photon"))),
                Some(_) if v == leg => return Err(YukawaError::Malformed("leg vertex has a photon".into())),
                Some(w) if w >= m || w == v || photon[w] != Some(v) => {
                    return Err(YukawaError::Malformed("photons are not an involution".into()))
                }
                _ => {}
            }
        }
        Ok(QqedVertexGraph { photon, leg })
    }

    /// Internal photons, which is the loop number.
    pub fn loops(&self) -> usize {
        self.photon.len() / 2
    }

    pub fn leg(&self) -> usize {
        self.leg
    }

    pub fn photon(&self, v: usize) -> Option<usize> {
        self.photon[v]
    }

    /// Bridgeless: every fermion edge `i -> i+1` is spanned by a photon.
    pub fn is_1pi(&self) -> bool {
        let m = self.photon.len();
        (0..m.saturating_sub(1)).all(|i| {
            (0..=i).any(|a| self.photon[a].is_some_and(|b| b > i))
        })
    }

    /// A proper path interval holding an internal photon and at most one
    /// photon leaving it (the external leg counts as leaving): a fermion
    /// self-energy or vertex subdivergence.
    pub fn has_subdivergence(&self) -> bool {
        let m = self.photon.len();
        for i in 0..m {
            for j in i..m {
                if i == 0 && j == m - 1 {
                    continue;
                }
                let inside = |v: usize| (i..=j).contains(&v);
                let mut leaving = 0;
                let mut internal = false;
                for v in i..=j {
                    match self.photon[v] {
                        Some(w) if inside(w) => internal = true,
                        _ => leaving += 1,
                    }
                }
                if internal && leaving <= 1 {
                    return true;
                }
            }
        }
        false
    }
}

/// Straighten the fermion path and pull the external photon to the front
/// as the root chord.
pub fn qqed_chord(g: &QqedVertexGraph) -> ChordDiagram {
    let m = g.photon.len();
    let mut partner = vec![0usize; m + 1];
    partner[0] = g.leg + 1;
    partner[g.leg + 1] = 0;
    for v in 0..m {
        if let Some(w) = g.photon[v] {
            partner[v + 1] = w + 1;
        }
    }
    ChordDiagram::from_partner(partner).expect("involution by construction")
}

pub fn qqed_from_chord(c: &ChordDiagram) -> Result<QqedVertexGraph, YukawaError> {
    if c.is_empty() {
        return Err(ChordError::Empty.into());
    }
    let p = c.partner();
    let leg = p[0] - 1;
    let photon = (1..p.len())
        .map(|e| if e == p[0] { None } else { Some(p[e] - 1) })
        .collect();
    QqedVertexGraph::new(photon, leg)
}

/// 1PI with no subdivergence and at least one loop.
pub fn qqed_primitive(g: &QqedVertexGraph) -> bool {
    g.loops() >= 1 && g.is_1pi() && !g.has_subdivergence()
}

/// Every vertex graph with the given loop number.
pub fn enumerate_qqed(loops: usize) -> Result<Vec<QqedVertexGraph>, YukawaError> {
    if loops > MAX_QQED_LOOPS {
        return Err(YukawaError::TooLarge(loops));
    }
    let m = 2 * loops + 1;
    let mut out = Vec::new();
    for leg in 0..m {
        let mut photon: Vec<Option<usize>> = vec![None; m];
        fn rec(photon: &mut Vec<Option<usize>>, leg: usize, out: &mut Vec<QqedVertexGraph>) {
            let Some(u) = (0..photon.len()).find(|&v| v != leg && photon[v].is_none()) else {
                out.push(QqedVertexGraph { photon: photon.clone(), leg });
                return;
            };
            for w in u + 1..photon.len() {
                if w != leg && photon[w].is_none() {
                    photon[u] = Some(w);
                    photon[w] = Some(u);
                    rec(photon, leg, out);
                    photon[u] = None;
                    photon[w] = None;
                }
            }
        }
        rec(&mut photon, leg, &mut out);
    }
    Ok(out)
}

/// `[C2(t)/t^2]` at `t = C^2/x`.
pub fn c2_over_t2_at_u(order: usize) -> Fps {
    let c = series_c(order + 1);
    let u = c.mul(&c).shift_down(1).expect("C^2 has valuation 2");
    let g = series_c2(order + 2).shift_down(2).expect("C2 has valuation 2");
    g.compose(&u).expect("u(0) = 0")
}

/// Rows of the Yukawa Green-function table, graded by loop number, from
/// `hbar^0`.
pub fn table4() -> Vec<TableRow> {
    let n = 8;
    let c = series_c(n + 1);
    let vac = c.mul(&c).scale(&q(1, 2));
    let u01 = c.derive().shift_up(1).scale(&qi(2)).sub(&c);
    let mut two_leg = u01.clone();
    two_leg.set_coeff(0, qi(TWO_LEG_HBAR0));
    let u11 = c2_over_t2_at_u(n);
    let row = |label: &'static str, s: &Fps| TableRow { label, coeffs: (0..7).map(|i| s.coeff(i)).collect() };
    vec![
        row("vacuum", &vac),
        row("tadpole", &c),
        row("two boson legs", &two_leg),
        row("fermion propagator", &two_leg),
        row("vertex", &u11),
    ]
}

/// Series identities behind the Yukawa table, each checked to `order`.
pub fn green_identities(order: usize) -> Vec<IdentityReport> {
    let n = order;
    let x = Fps::x(n);
    let c_big = series_c(n + 2);
    let c = c_big.truncate(n);
    let u01 = c.derive().shift_up(1).scale(&qi(2)).sub(&c).truncate(n);
    let bracket = c2_over_t2_at_u(n);
    let mut out = Vec::new();

    // V = C^2/(2x) satisfies C - x = 2x^2 V'
    let v = c_big.mul(&c_big).shift_down(1).expect("val 2").scale(&q(1, 2));
    let lhs = c.sub(&x);
    let rhs = v.derive().shift_up(2).scale(&qi(2)).truncate(n);
    out.push(IdentityReport::compare("vacuum: C - x = 2x^2 V'", &lhs, &rhs, n));

    // U20 = x(2xC' - C) = C^2 [C2(t)/t^2]
    let u20 = u01.shift_up(1).truncate(n);
    let alt = c.mul(&c).mul(&bracket).truncate(n);
    out.push(IdentityReport::compare("U20 = x(2xC'-C) = C^2 [C2(t)/t^2]", &u20, &alt, n));

    // T = x/(1 - U01) with T = C
    let t = x.div(&Fps::one(n).sub(&u01)).expect("unit");
    out.push(IdentityReport::compare("T = x/(1-U01) = C", &t, &c, n));

    // U11 = x [C2(t)/t^2] = x(2xU01' - U01 + 1)
    let u11 = bracket.shift_up(1).truncate(n);
    let u11_alt = u01
        .derive()
        .shift_up(1)
        .scale(&qi(2))
        .sub(&u01)
        .add(&Fps::one(n))
        .shift_up(1)
        .truncate(n);
    out.push(IdentityReport::compare("U11 = x[C2(t)/t^2] = x(2xU01'-U01+1)", &u11, &u11_alt, n));

    // tadpoles: 2xTT' = T^2 + T - x with T = C
    let lhs = c.mul(&c.derive().shift_up(1)).scale(&qi(2)).truncate(n);
    let rhs = c.mul(&c).add(&c).sub(&x);
    out.push(IdentityReport::compare("2xTT' = T^2 + T - x", &lhs, &rhs, n));

    // table rows against reference values
    let reference: [(&str, Vec<Q>); 5] = [
        ("vacuum", vec![qi(0), qi(0), q(1, 2), qi(1), q(9, 2), qi(31), qi(283)]),
        ("tadpole", [0, 1, 1, 4, 27, 248, 2830].map(qi).to_vec()),
        ("two boson legs", [-1, 1, 3, 20, 189, 2232, 31130].map(qi).to_vec()),
        ("fermion propagator", [-1, 1, 3, 20, 189, 2232, 31130].map(qi).to_vec()),
        ("vertex", [1, 1, 9, 100, 1323, 20088, 342430].map(qi).to_vec()),
    ];
    for (row, (label, want)) in table4().iter().zip(reference) {
        let len = want.len().min(n + 1);
        let a = Fps::new(row.coeffs[..len].to_vec(), len - 1);
        let b = Fps::new(want[..len].to_vec(), len - 1);
        out.push(IdentityReport::compare(&format!("table row: {label}"), &a, &b, len - 1));
    }
    out
}

/// Counts of canonical classes, used to check injectivity.
pub fn distinct<T: std::hash::Hash + Eq + Clone>(items: &[T]) -> usize {
    items.iter().cloned().collect::<HashSet<T>>().len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tadpole_counts() {
        let counts: Vec<usize> = (1..=4).map(|l| enumerate_tadpoles(l, false).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 4, 27]);
        assert!(enumerate_tadpoles(5, false).is_err());
        for t in enumerate_tadpoles(4, false).unwrap() {
            assert!(t.is_1pi());
            assert_eq!(t.canonical(), t);
        }
    }

    #[test]
    fn literal_roundtrip() {
        let t: TadpoleGraph = "loops: (7 3 5) ; bosons: 3-5 ; leg: 7".parse().unwrap();
        assert_eq!(t.loops(), 2);
        assert!(t.is_1pi());
        let back: TadpoleGraph = t.to_string().parse().unwrap();
        assert_eq!(back, t);
        assert!("loops: (0 1) ; bosons: ; leg: 0".parse::<TadpoleGraph>().is_err());
    }

    #[test]
    fn psi_trivial_cases() {
        let x = TadpoleGraph::single();
        assert_eq!(psi(&x, &x, None).unwrap(), PsiImage::Pair(x.clone(), x.clone()));
        let PsiImage::Tadpole(t) = psi(&x, &x, Some(0)).unwrap() else { panic!() };
        assert_eq!(t.loops(), 2);
        assert!(t.is_1pi());
        let (a, b, d) = psi_inv(&PsiImage::Tadpole(t.clone())).unwrap();
        assert_eq!((a, b, d), (x.clone(), x.clone(), Some(0)));
        assert_eq!(psi_order(&x).unwrap(), vec![1]);
        assert_eq!(lambda_bij(&x).unwrap(), ChordDiagram::single());
        assert_eq!(lambda_bij(&t).unwrap().to_string(), "2: 3 4 1 2");
        assert_eq!(psi_split(&x).unwrap_err(), YukawaError::Single);
    }

    #[test]
    fn qqed_small() {
        let prim: Vec<usize> = (1..=3)
            .map(|l| enumerate_qqed(l).unwrap().iter().filter(|g| qqed_primitive(g)).count())
            .collect();
        assert_eq!(prim, [1, 1, 7]);
        let g = QqedVertexGraph::new(vec![Some(2), None, Some(0)], 1).unwrap();
        assert_eq!(qqed_chord(&g).to_string(), "2: 3 4 1 2");
        assert_eq!(qqed_from_chord(&qqed_chord(&g)).unwrap(), g);
    }

    #[test]
    fn green() {
        for r in green_identities(10) {
            assert!(r.holds, "{r:?}");
        }
    }
}
