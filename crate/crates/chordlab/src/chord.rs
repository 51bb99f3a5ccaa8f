//! Rooted chord diagrams as fixed-point-free involutions on `{1, ..., 2n}`.
//!
//! Internally endpoints are 0-based; the textual literal `"n: p1 p2 ... p2n"`
//! is 1-based. Chords are indexed by the order of their left endpoints, so
//! chord 0 is always the root.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

/// Largest `n` accepted by [`enumerate_diagrams`].
pub const MAX_ENUM_N: usize = 10;

const FREE: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChordError {
    #[error("n = {0} exceeds the enumeration guard {MAX_ENUM_N}")]
    TooLarge(usize),
    #[error("malformed diagram literal: {0}")]
    Parse(String),
    #[error("not a fixed-point-free involution")]
    NotInvolution,
    #[error("chord {0} is not in the root component")]
    NotInRootComponent(usize),
    #[error("diagram is empty")]
    Empty,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChordDiagram {
    partner: Vec<usize>,
}

impl ChordDiagram {
    pub fn empty() -> Self {
        ChordDiagram { partner: Vec::new() }
    }

    pub fn single() -> Self {
        ChordDiagram { partner: vec![1, 0] }
    }

    /// From a 0-based partner array.
    pub fn from_partner(partner: Vec<usize>) -> Result<Self, ChordError> {
        let m = partner.len();
        if m % 2 != 0 {
            return Err(ChordError::NotInvolution);
        }
        for (i, &p) in partner.iter().enumerate() {
            if p >= m || p == i || partner[p] != i {
                return Err(ChordError::NotInvolution);
            }
        }
        Ok(ChordDiagram { partner })
    }

    /// From 0-based chord endpoint pairs in any order.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self, ChordError> {
        let mut partner = vec![FREE; 2 * pairs.len()];
        for &(a, b) in pairs {
            if a >= partner.len() || b >= partner.len() || partner[a] != FREE || partner[b] != FREE {
                return Err(ChordError::NotInvolution);
            }
            partner[a] = b;
            partner[b] = a;
        }
        Self::from_partner(partner)
    }

    /// From a word in which every label occurs exactly twice; the two
    /// occurrences become one chord.
    pub fn from_word<T: Eq + std::hash::Hash + Copy>(word: &[T]) -> Result<Self, ChordError> {
        let mut first = std::collections::HashMap::new();
        let mut partner = vec![FREE; word.len()];
        for (i, &l) in word.iter().enumerate() {
            match first.remove(&l) {
                Some(j) => {
                    partner[i] = j;
                    partner[j] = i;
                }
                None => {
                    first.insert(l, i);
                }
            }
        }
        if !first.is_empty() {
            return Err(ChordError::NotInvolution);
        }
        Self::from_partner(partner)
    }

    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    pub fn partner(&self) -> &[usize] {
        &self.partner
    }

    /// Chords as `(left, right)` endpoint pairs sorted by left endpoint.
    pub fn chords(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len())
            .filter(|&i| self.partner[i] > i)
            .map(|i| (i, self.partner[i]))
            .collect()
    }

    /// Chord index at each endpoint.
    pub fn chord_at(&self) -> Vec<usize> {
        let mut out = vec![0; self.partner.len()];
        let mut k = 0;
        for i in 0..self.partner.len() {
            if self.partner[i] > i {
                out[i] = k;
                out[self.partner[i]] = k;
                k += 1;
            }
        }
        out
    }

    /// Same as [`chord_at`](Self::chord_at); handy for splicing words.
    pub fn to_word(&self) -> Vec<usize> {
        self.chord_at()
    }

    pub fn crosses(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
    }

    pub fn intersection_graph(&self) -> IntersectionGraph {
        IntersectionGraph { adj: self.adjacency(), labels: recursive_labels(self) }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let ch = self.chords();
        let n = ch.len();
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                if self.crosses(ch[i], ch[j]) {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        adj
    }

    /// Sub-diagram on the given chords, positions compressed.
    pub fn induced(&self, chords: &[usize]) -> ChordDiagram {
        let at = self.chord_at();
        let mut keep = vec![false; self.n()];
        for &c in chords {
            keep[c] = true;
        }
        let word: Vec<usize> = at.iter().copied().filter(|&c| keep[c]).collect();
        ChordDiagram::from_word(&word).expect("induced word pairs up")
    }

    /// Side-by-side concatenation.
    pub fn concat(&self, other: &ChordDiagram) -> ChordDiagram {
        let m = self.partner.len();
        let mut p = self.partner.clone();
        p.extend(other.partner.iter().map(|&x| x + m));
        ChordDiagram { partner: p }
    }

    /// Components of the intersection graph as sorted chord lists, ordered
    /// by first endpoint.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                for &w in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connectivity() >= 1
    }

    /// Largest `k` such that the diagram is `k`-connected.
    ///
    /// A window `S` of consecutive endpoints counts when both `S` and its
    /// complement contain a whole chord; the chords with exactly one end in
    /// `S` then form a disconnecting set. The result is the least such cut
    /// size, capped at `n` (deleting every chord leaves nothing to be
    /// connected). The empty diagram has connectivity 0.
    pub fn connectivity(&self) -> usize {
        connectivity_of(&self.partner)
    }

    pub fn is_k_connected(&self, k: usize) -> bool {
        self.connectivity() >= k
    }

    /// True iff the diagram is not a concatenation of two nonempty diagrams.
    pub fn is_indecomposable(&self) -> bool {
        is_indecomposable_partner(&self.partner)
    }

    /// Chords of the component containing the root.
    pub fn root_component(&self) -> Result<Vec<usize>, ChordError> {
        if self.is_empty() {
            return Err(ChordError::Empty);
        }
        Ok(self.components().swap_remove(0))
    }

    /// The diagrams hanging in the interval right of each end of `chord`,
    /// which must belong to the root component.
    pub fn dangling(&self, chord: usize) -> Result<(ChordDiagram, ChordDiagram), ChordError> {
        let (comp, dang) = self.root_decomposition()?;
        let rc = self.root_component()?;
        let idx = rc
            .iter()
            .position(|&c| c == chord)
            .ok_or(ChordError::NotInRootComponent(chord))?;
        let _ = comp;
        Ok(dang[idx].clone())
    }

    /// Root component as its own diagram together with the left and right
    /// dangling diagrams of each of its chords (in chord order).
    pub fn root_decomposition(&self) -> Result<(ChordDiagram, Vec<(ChordDiagram, ChordDiagram)>), ChordError> {
        let rc = self.root_component()?;
        let at = self.chord_at();
        let mut in_rc = vec![false; self.n()];
        for &c in &rc {
            in_rc[c] = true;
        }
        let core = self.induced(&rc);
        // gap g collects the endpoints right of the g-th root-component endpoint
        let mut gaps: Vec<Vec<usize>> = Vec::new();
        let mut owner: Vec<(usize, bool)> = Vec::new();
        for (i, &c) in at.iter().enumerate() {
            if in_rc[c] {
                gaps.push(Vec::new());
                owner.push((c, self.partner[i] > i));
            } else {
                gaps.last_mut().expect("position 0 is the root").push(c);
            }
        }
        let mut dang = vec![(ChordDiagram::empty(), ChordDiagram::empty()); rc.len()];
        for (g, word) in gaps.iter().enumerate() {
            let (c, left) = owner[g];
            let k = rc.binary_search(&c).expect("owner in root component");
            let d = ChordDiagram::from_word(word).expect("gap is closed");
            if left {
                dang[k].0 = d;
            } else {
                dang[k].1 = d;
            }
        }
        Ok((core, dang))
    }

    /// Inverse of [`root_decomposition`](Self::root_decomposition).
    pub fn assemble(core: &ChordDiagram, dang: &[(ChordDiagram, ChordDiagram)]) -> ChordDiagram {
        let mut word: Vec<usize> = Vec::with_capacity(2 * core.n());
        let mut next = core.n();
        let at = core.chord_at();
        for (i, &c) in at.iter().enumerate() {
            word.push(c);
            let d = if core.partner[i] > i { &dang[c].0 } else { &dang[c].1 };
            word.extend(d.chord_at().iter().map(|&x| x + next));
            next += d.n();
        }
        ChordDiagram::from_word(&word).expect("assembled word pairs up")
    }

    /// Windows `(start, end)` (0-based, inclusive) with exactly one
    /// crossing chord, returned with that cut chord. Empty unless the
    /// diagram has connectivity 1.
    ///
    /// Windows through the root endpoint are left out: such a window is a
    /// prefix, and the complementary suffix is a reason for the same cut.
    pub fn reasons_and_cuts(&self) -> Vec<Reason> {
        if self.connectivity() != 1 {
            return Vec::new();
        }
        let m = self.partner.len();
        let n = self.n();
        let at = self.chord_at();
        let mut out = Vec::new();
        for i in 1..m {
            let mut cut = 0usize;
            let mut inside = 0usize;
            let mut last_open = 0usize;
            for j in i..m {
                let p = self.partner[j];
                if p >= i && p < j {
                    cut -= 1;
                    inside += 1;
                } else {
                    cut += 1;
                    last_open = j;
                }
                if cut == 1 && inside >= 1 && n - inside - cut >= 1 {
                    // the unique open endpoint is the latest unmatched one
                    let open = (i..=j)
                        .find(|&t| {
                            let q = self.partner[t];
                            q < i || q > j
                        })
                        .unwrap_or(last_open);
                    out.push(Reason { start: i, end: j, cut: at[open] });
                }
            }
        }
        out
    }

    /// Reasons not strictly containing another reason.
    pub fn minimal_reasons(&self) -> Vec<Reason> {
        let all = self.reasons_and_cuts();
        all.iter()
            .filter(|r| !all.iter().any(|s| s != *r && r.contains(s)))
            .cloned()
            .collect()
    }

    /// Reasons not strictly contained in another reason.
    pub fn maximal_reasons(&self) -> Vec<Reason> {
        let all = self.reasons_and_cuts();
        all.iter()
            .filter(|r| !all.iter().any(|s| s != *r && s.contains(r)))
            .cloned()
            .collect()
    }
}

/// Consecutive endpoint window that is matched internally except for one
/// endpoint of the cut chord.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Reason {
    pub start: usize,
    pub end: usize,
    pub cut: usize,
}

impl Reason {
    pub fn contains(&self, o: &Reason) -> bool {
        self.start <= o.start && o.end <= self.end
    }

    pub fn disjoint(&self, o: &Reason) -> bool {
        self.end < o.start || o.end < self.start
    }
}

/// Labelled intersection graph: chord `i` has neighbours `adj[i]` and label
/// `labels[i]` (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionGraph {
    pub adj: Vec<Vec<usize>>,
    pub labels: Vec<usize>,
}

impl IntersectionGraph {
    /// Edge set in terms of labels, each edge `(a, b)` with `a < b`, sorted.
    pub fn labelled_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = Vec::new();
        for (i, nb) in self.adj.iter().enumerate() {
            for &j in nb {
                if i < j {
                    let (a, b) = (self.labels[i], self.labels[j]);
                    e.push((a.min(b), a.max(b)));
                }
            }
        }
        e.sort_unstable();
        e
    }
}

// root gets the next label, then each component of the rest in order of
// first endpoint is labelled the same way
fn recursive_labels(d: &ChordDiagram) -> Vec<usize> {
    let n = d.n();
    let mut labels = vec![0; n];
    let mut next = 1;
    let all: Vec<usize> = (0..n).collect();
    label_rec(d, &all, &mut labels, &mut next);
    labels
}

fn label_rec(d: &ChordDiagram, chords: &[usize], labels: &mut [usize], next: &mut usize) {
    if chords.is_empty() {
        return;
    }
    labels[chords[0]] = *next;
    *next += 1;
    let rest = &chords[1..];
    let sub = d.induced(rest);
    for comp in sub.components() {
        let mapped: Vec<usize> = comp.iter().map(|&c| rest[c]).collect();
        label_rec(d, &mapped, labels, next);
    }
}

pub(crate) fn connectivity_of(partner: &[usize]) -> usize {
    let m = partner.len();
    let n = m / 2;
    if n == 0 {
        return 0;
    }
    let mut best = n;
    for i in 0..m {
        let mut cut = 0usize;
        let mut inside = 0usize;
        for (j, &p) in partner.iter().enumerate().skip(i) {
            if p >= i && p < j {
                cut -= 1;
                inside += 1;
            } else {
                cut += 1;
            }
            if cut < best && inside >= 1 && n - inside - cut >= 1 {
                best = cut;
                if best == 0 {
                    return 0;
                }
            }
        }
    }
    best
}

pub(crate) fn is_indecomposable_partner(partner: &[usize]) -> bool {
    let m = partner.len();
    let mut reach = 0;
    for (j, &p) in partner.iter().enumerate().take(m.saturating_sub(1)) {
        reach = reach.max(p);
        if reach == j {
            return false;
        }
    }
    true
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n())?;
        for p in &self.partner {
            write!(f, " {}", p + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChordDiagram({self})")
    }
}

impl FromStr for ChordDiagram {
    type Err = ChordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, body) = s
            .split_once(':')
            .ok_or_else(|| ChordError::Parse(format!("missing ':' in {s:?}")))?;
        let n: usize = head
            .trim()
            .parse()
            .map_err(|_| ChordError::Parse(format!("bad chord count {head:?}")))?;
        let ps: Vec<usize> = body
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| ChordError::Parse(format!("bad endpoint {t:?}"))))
            .collect::<Result<_, _>>()?;
        if ps.len() != 2 * n {
            return Err(ChordError::Parse(format!("expected {} endpoints, got {}", 2 * n, ps.len())));
        }
        if ps.iter().any(|&p| p == 0) {
            return Err(ChordError::Parse("endpoints are 1-based".into()));
        }
        ChordDiagram::from_partner(ps.into_iter().map(|p| p - 1).collect())
    }
}

/// Depth-first stream of all diagrams on `n` chords; the partner of the
/// smallest free endpoint runs through the free endpoints in increasing
/// order.
pub fn enumerate_diagrams(n: usize) -> Result<Diagrams, ChordError> {
    if n > MAX_ENUM_N {
        return Err(ChordError::TooLarge(n));
    }
    Ok(Diagrams::new(n, None))
}

/// The part of [`enumerate_diagrams`] whose root chord ends at `root_partner`
/// (0-based).
pub fn enumerate_with_root(n: usize, root_partner: usize) -> Result<Diagrams, ChordError> {
    if n > MAX_ENUM_N {
        return Err(ChordError::TooLarge(n));
    }
    Ok(Diagrams::new(n, Some(root_partner)))
}

pub struct Diagrams {
    partner: Vec<usize>,
    stack: Vec<(usize, usize)>,
    fixed_root: bool,
    state: IterState,
}

#[derive(PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl Diagrams {
    fn new(n: usize, root: Option<usize>) -> Self {
        let mut it = Diagrams {
            partner: vec![FREE; 2 * n],
            stack: Vec::new(),
            fixed_root: false,
            state: IterState::Fresh,
        };
        if let Some(p) = root {
            if n == 0 || p == 0 || p >= 2 * n {
                it.state = IterState::Done;
            } else {
                it.partner[0] = p;
                it.partner[p] = 0;
                it.stack.push((0, p));
                it.fixed_root = true;
            }
        }
        it
    }

    fn next_free(&self, from: usize) -> Option<usize> {
        (from..self.partner.len()).find(|&i| self.partner[i] == FREE)
    }

    fn fill(&mut self) {
        while let Some(i) = self.next_free(0) {
            let j = self.next_free(i + 1).expect("even number of free endpoints");
            self.partner[i] = j;
            self.partner[j] = i;
            self.stack.push((i, j));
        }
    }

    fn backtrack(&mut self) -> bool {
        let floor = usize::from(self.fixed_root);
        while self.stack.len() > floor {
            let (i, j) = self.stack.pop().expect("nonempty");
            self.partner[i] = FREE;
            self.partner[j] = FREE;
            if let Some(k) = self.next_free(j + 1) {
                self.partner[i] = k;
                self.partner[k] = i;
                self.stack.push((i, k));
                self.fill();
                return true;
            }
        }
        false
    }
}

impl Iterator for Diagrams {
    type Item = ChordDiagram;

    fn next(&mut self) -> Option<ChordDiagram> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                self.fill();
                self.state = IterState::Running;
            }
            IterState::Running => {
                if !self.backtrack() {
                    self.state = IterState::Done;
                    return None;
                }
            }
        }
        Some(ChordDiagram { partner: self.partner.clone() })
    }
}

/// Calls `f` on the partner array of every diagram on `n` chords whose
/// root partner is `root` (0-based), in enumeration order.
pub fn for_each_with_root<F: FnMut(&[usize])>(n: usize, root: usize, mut f: F) {
    let mut partner = vec![FREE; 2 * n];
    partner[0] = root;
    partner[root] = 0;
    fn rec<F: FnMut(&[usize])>(partner: &mut [usize], from: usize, f: &mut F) {
        let Some(i) = (from..partner.len()).find(|&i| partner[i] == FREE) else {
            f(partner);
            return;
        };
        for j in i + 1..partner.len() {
            if partner[j] == FREE {
                partner[i] = j;
                partner[j] = i;
                rec(partner, i + 1, f);
                partner[i] = FREE;
                partner[j] = FREE;
            }
        }
    }
    rec(&mut partner, 1, &mut f);
}

/// Class counts over all diagrams on `n` chords.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub total: u64,
    pub connected: u64,
    pub two_connected: u64,
    pub connectivity_one: u64,
    pub indecomposable: u64,
}

impl ClassCounts {
    fn merge(mut self, o: ClassCounts) -> ClassCounts {
        self.total += o.total;
        self.connected += o.connected;
        self.two_connected += o.two_connected;
        self.connectivity_one += o.connectivity_one;
        self.indecomposable += o.indecomposable;
        self
    }
}

/// Brute-force class counts, split over the root chord's partner and run
/// in parallel.
pub fn count_classes(n: usize) -> Result<ClassCounts, ChordError> {
    if n > MAX_ENUM_N {
        return Err(ChordError::TooLarge(n));
    }
    if n == 0 {
        return Ok(ClassCounts { total: 1, indecomposable: 1, ..Default::default() });
    }
    Ok((1..2 * n)
        .into_par_iter()
        .map(|r| {
            let mut c = ClassCounts::default();
            for_each_with_root(n, r, |p| {
                c.total += 1;
                let k = connectivity_of(p);
                if k >= 1 {
                    c.connected += 1;
                }
                if k >= 2 {
                    c.two_connected += 1;
                }
                if k == 1 {
                    c.connectivity_one += 1;
                }
                if is_indecomposable_partner(p) {
                    c.indecomposable += 1;
                }
            });
            c
        })
        .reduce(ClassCounts::default, ClassCounts::merge))
}
