//! Root share decomposition, the map Φ onto two-component indecomposable
//! diagrams, and the tree bijection Θ.
//!
//! Most of the work happens on labelled words: a sequence in which every
//! chord label occurs twice. Labels survive splicing, which is what Θ needs.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::chord::{ChordDiagram, ChordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BijError {
    #[error("diagram is not connected")]
    NotConnected,
    #[error("diagram needs at least two chords")]
    TooSmall,
    #[error("interval index {k} outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("not an indecomposable diagram with exactly two components")]
    NotPhiImage,
    #[error("malformed seed: {0}")]
    MalformedSeed(String),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error(transparent)]
    Chord(#[from] ChordError),
}

pub type Word = Vec<usize>;

/// Diagram of a labelled word plus the label of each chord (chord order).
pub fn word_diagram(word: &[usize]) -> (ChordDiagram, Vec<usize>) {
    let d = ChordDiagram::from_word(word).expect("every label twice");
    let labels = d.chords().iter().map(|&(l, _)| word[l]).collect();
    (d, labels)
}

/// Components of a labelled word, each as its own sub-word, ordered by first
/// occurrence.
pub fn word_components(word: &[usize]) -> Vec<Word> {
    let (d, labels) = word_diagram(word);
    d.components()
        .into_iter()
        .map(|comp| {
            let keep: std::collections::HashSet<usize> = comp.iter().map(|&c| labels[c]).collect();
            word.iter().copied().filter(|l| keep.contains(l)).collect()
        })
        .collect()
}

/// Root component of a nonempty labelled word and, for each of its chords in
/// order, the label with left and right dangling words.
pub fn word_decompose(word: &[usize]) -> (Word, Vec<(usize, Word, Word)>) {
    let core = word_components(word).swap_remove(0);
    let in_core: std::collections::HashSet<usize> = core.iter().copied().collect();
    let mut order: Vec<usize> = Vec::new();
    let mut dang: HashMap<usize, (Word, Word)> = HashMap::new();
    let mut current: Option<(usize, bool)> = None;
    for &l in word {
        if in_core.contains(&l) {
            let first = !dang.contains_key(&l);
            if first {
                order.push(l);
                dang.insert(l, (Vec::new(), Vec::new()));
            }
            current = Some((l, first));
        } else {
            let (owner, left) = current.expect("word starts in the root component");
            let e = dang.get_mut(&owner).expect("owner seen");
            if left {
                e.0.push(l);
            } else {
                e.1.push(l);
            }
        }
    }
    let out = order
        .into_iter()
        .map(|l| {
            let (a, b) = dang.remove(&l).expect("present");
            (l, a, b)
        })
        .collect();
    (core, out)
}

/// Inverse of [`word_decompose`].
pub fn word_assemble(core: &[usize], dang: &HashMap<usize, (Word, Word)>) -> Word {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &l in core {
        out.push(l);
        let first = seen.insert(l);
        if let Some((a, b)) = dang.get(&l) {
            out.extend_from_slice(if first { a } else { b });
        }
    }
    out
}

/// Root share decomposition of a labelled word: `(C1, C2, k)`.
pub fn nabla_word(word: &[usize]) -> Result<(Word, Word, usize), BijError> {
    if word.len() < 4 {
        return Err(BijError::TooSmall);
    }
    if word_components(word).len() != 1 {
        return Err(BijError::NotConnected);
    }
    let r = word[0];
    let rest: Word = word[1..].iter().copied().filter(|&l| l != r).collect();
    let c2 = word_components(&rest).swap_remove(0);
    let in_c2: std::collections::HashSet<usize> = c2.iter().copied().collect();
    let far = 1 + word[1..].iter().position(|&l| l == r).expect("root twice");
    let k = word[..far].iter().filter(|l| in_c2.contains(l)).count();
    let c1: Word = word.iter().copied().filter(|l| !in_c2.contains(l)).collect();
    Ok((c1, c2, k))
}

/// Places `c1` after the `k`-th endpoint of `c2`, keeping its root in place
/// when `pull_root` is false (Φ) or moving it to the front (∇⁻¹).
pub fn splice_word(c1: &[usize], c2: &[usize], k: usize, pull_root: bool) -> Result<Word, BijError> {
    let max = c2.len().saturating_sub(1);
    if k < 1 || k > max {
        return Err(BijError::KOutOfRange { k, max });
    }
    let mut out = Vec::with_capacity(c1.len() + c2.len());
    if pull_root {
        out.push(c1[0]);
    }
    out.extend_from_slice(&c2[..k]);
    out.extend_from_slice(if pull_root { &c1[1..] } else { c1 });
    out.extend_from_slice(&c2[k..]);
    Ok(out)
}

/// Φ on labelled words.
pub fn phi_word(word: &[usize]) -> Result<Word, BijError> {
    let (c1, c2, k) = nabla_word(word)?;
    splice_word(&c1, &c2, k, false)
}

/// Splits a two-component indecomposable word into `(inner, outer, k)`.
fn split_phi_image(word: &[usize]) -> Result<(Word, Word, usize), BijError> {
    let comps = word_components(word);
    if comps.len() != 2 {
        return Err(BijError::NotPhiImage);
    }
    let (d, _) = word_diagram(word);
    if !d.is_indecomposable() {
        return Err(BijError::NotPhiImage);
    }
    let outer = comps[0].clone();
    let inner = comps[1].clone();
    let in_outer: std::collections::HashSet<usize> = outer.iter().copied().collect();
    let start = word.iter().position(|l| !in_outer.contains(l)).expect("inner nonempty");
    let block = &word[start..start + inner.len()];
    if block != inner.as_slice() {
        return Err(BijError::NotPhiImage);
    }
    Ok((inner, outer, start))
}

/// Φ⁻¹ on labelled words.
pub fn phi_inv_word(word: &[usize]) -> Result<Word, BijError> {
    let (c1, c2, k) = split_phi_image(word)?;
    splice_word(&c1, &c2, k, true)
}

/// `(C1, C2, k)` with `1 <= k <= 2|C2| - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootShareTriple {
    pub c1: ChordDiagram,
    pub c2: ChordDiagram,
    pub k: usize,
}

pub fn nabla(d: &ChordDiagram) -> Result<RootShareTriple, BijError> {
    let (c1, c2, k) = nabla_word(&d.to_word())?;
    Ok(RootShareTriple {
        c1: ChordDiagram::from_word(&c1)?,
        c2: ChordDiagram::from_word(&c2)?,
        k,
    })
}

pub fn nabla_inv(t: &RootShareTriple) -> Result<ChordDiagram, BijError> {
    if !t.c1.is_connected() || !t.c2.is_connected() {
        return Err(BijError::NotConnected);
    }
    let off = t.c2.n();
    let c1: Word = t.c1.to_word().iter().map(|&l| l + off).collect();
    Ok(ChordDiagram::from_word(&splice_word(&c1, &t.c2.to_word(), t.k, true)?)?)
}

pub fn phi(d: &ChordDiagram) -> Result<ChordDiagram, BijError> {
    Ok(ChordDiagram::from_word(&phi_word(&d.to_word())?)?)
}

pub fn phi_inv(d: &ChordDiagram) -> Result<ChordDiagram, BijError> {
    Ok(ChordDiagram::from_word(&phi_inv_word(&d.to_word())?)?)
}

/// An element of X*(D*D): a root chord with a left and a right diagram.
/// Chord labels are the chord indices of the combined diagram
/// `root D_l root D_r`, so the root is label 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Seed {
    pub left: ChordDiagram,
    pub right: ChordDiagram,
}

impl Seed {
    pub fn size(&self) -> usize {
        1 + self.left.n() + self.right.n()
    }

    pub fn combined(&self) -> ChordDiagram {
        let m = self.left.n();
        let mut word = vec![usize::MAX];
        word.extend(self.left.to_word());
        word.push(usize::MAX);
        word.extend(self.right.to_word().iter().map(|&l| l + m));
        ChordDiagram::from_word(&word).expect("well formed")
    }

    /// Every seed of total size `n`.
    pub fn all(n: usize) -> Vec<Seed> {
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        for a in 0..n {
            let b = n - 1 - a;
            let ls: Vec<_> = crate::chord::enumerate_diagrams(a).expect("small").collect();
            let rs: Vec<_> = crate::chord::enumerate_diagrams(b).expect("small").collect();
            for l in &ls {
                for r in &rs {
                    out.push(Seed { left: l.clone(), right: r.clone() });
                }
            }
        }
        out
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.left, self.right)
    }
}

impl FromStr for Seed {
    type Err = BijError;

    fn from_str(s: &str) -> Result<Self, BijError> {
        let (a, b) = s
            .split_once(';')
            .ok_or_else(|| BijError::MalformedSeed(format!("expected '<left> ; <right>' in {s:?}")))?;
        Ok(Seed { left: a.trim().parse()?, right: b.trim().parse()? })
    }
}

/// Tree whose vertices are nonempty label stacks; the children of a vertex
/// carry a diagram with at most two components, child `i` standing for
/// chord `i` of that diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZTree {
    pub stack: Vec<usize>,
    pub structure: ChordDiagram,
    pub children: Vec<ZTree>,
}

impl ZTree {
    pub fn size(&self) -> usize {
        self.stack.len() + self.children.iter().map(ZTree::size).sum::<usize>()
    }

    pub fn labels(&self) -> Vec<usize> {
        let mut out = self.stack.clone();
        for c in &self.children {
            out.extend(c.labels());
        }
        out
    }

    /// Stacks nonempty, one child per structure chord, at most two
    /// components at every vertex.
    pub fn check(&self) -> Result<(), BijError> {
        if self.stack.is_empty() {
            return Err(BijError::MalformedTree("empty stack".into()));
        }
        if self.structure.n() != self.children.len() {
            return Err(BijError::MalformedTree(format!(
                "{} chords but {} children",
                self.structure.n(),
                self.children.len()
            )));
        }
        if self.structure.components().len() > 2 {
            return Err(BijError::MalformedTree("more than two components".into()));
        }
        self.children.iter().try_for_each(ZTree::check)
    }

    fn structure_word(&self) -> Word {
        self.structure
            .to_word()
            .iter()
            .map(|&c| self.children[c].stack[0])
            .collect()
    }
}

impl fmt::Display for ZTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.stack.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, " | {}", self.structure)?;
        for c in &self.children {
            write!(f, " {c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for ZTree {
    type Err = BijError;

    fn from_str(s: &str) -> Result<Self, BijError> {
        let toks: Vec<String> = s
            .replace('(', " ( ")
            .replace(')', " ) ")
            .replace('|', " | ")
            .split_whitespace()
            .map(str::to_string)
            .collect();
        let mut pos = 0;
        let t = parse_tree(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(BijError::MalformedTree("trailing input".into()));
        }
        Ok(t)
    }
}

fn parse_tree(toks: &[String], pos: &mut usize) -> Result<ZTree, BijError> {
    let bad = |m: &str| BijError::MalformedTree(m.to_string());
    if toks.get(*pos).map(String::as_str) != Some("(") {
        return Err(bad("expected '('"));
    }
    *pos += 1;
    let mut stack = Vec::new();
    while let Some(t) = toks.get(*pos) {
        if t == "|" {
            break;
        }
        stack.push(t.parse().map_err(|_| bad("bad label"))?);
        *pos += 1;
    }
    *pos += 1;
    let head = toks.get(*pos).ok_or_else(|| bad("missing structure"))?;
    let n: usize = head
        .trim_end_matches(':')
        .parse()
        .map_err(|_| bad("bad chord count"))?;
    *pos += 1;
    let lit: Vec<&str> = toks
        .get(*pos..*pos + 2 * n)
        .ok_or_else(|| bad("short structure"))?
        .iter()
        .map(String::as_str)
        .collect();
    *pos += 2 * n;
    let structure: ChordDiagram = format!("{n}: {}", lit.join(" ")).parse()?;
    let mut children = Vec::new();
    while toks.get(*pos).map(String::as_str) == Some("(") {
        children.push(parse_tree(toks, pos)?);
    }
    if toks.get(*pos).map(String::as_str) != Some(")") {
        return Err(bad("expected ')'"));
    }
    *pos += 1;
    Ok(ZTree { stack, structure, children })
}

/// Θ: runs the queue algorithm that turns a seed into a Z-tree.
pub fn theta(seed: &Seed) -> ZTree {
    struct Node {
        stack: Vec<usize>,
        structure: Word,
        children: Vec<usize>,
    }
    let w = seed.combined().to_word();
    let far = 1 + w[1..].iter().position(|&l| l == 0).expect("root twice");
    let mut nodes = vec![Node { stack: vec![0], structure: Vec::new(), children: Vec::new() }];
    let mut vertex_of: HashMap<usize, usize> = HashMap::from([(0, 0)]);
    let mut queue: VecDeque<(usize, Word, Word)> = VecDeque::new();
    queue.push_back((0, w[1..far].to_vec(), w[far + 1..].to_vec()));

    let add_children = |nodes: &mut Vec<Node>,
                            vertex_of: &mut HashMap<usize, usize>,
                            queue: &mut VecDeque<(usize, Word, Word)>,
                            v: usize,
                            dang: Vec<(usize, Word, Word)>| {
        for (lab, a, b) in dang {
            let id = nodes.len();
            nodes.push(Node { stack: vec![lab], structure: Vec::new(), children: Vec::new() });
            nodes[v].children.push(id);
            vertex_of.insert(lab, id);
            queue.push_back((lab, a, b));
        }
    };

    while let Some((chord, dl, dr)) = queue.pop_front() {
        let v = vertex_of[&chord];
        match (dl.is_empty(), dr.is_empty()) {
            (true, true) => {}
            (true, false) => {
                let (core, dang) = word_decompose(&dr);
                add_children(&mut nodes, &mut vertex_of, &mut queue, v, dang);
                nodes[v].structure = core;
            }
            (false, false) => {
                let (core_l, dang_l) = word_decompose(&dl);
                let (core_r, dang_r) = word_decompose(&dr);
                add_children(&mut nodes, &mut vertex_of, &mut queue, v, dang_l);
                add_children(&mut nodes, &mut vertex_of, &mut queue, v, dang_r);
                let mut s = core_l;
                s.extend(core_r);
                nodes[v].structure = s;
            }
            (false, true) => {
                let (core, mut dang) = word_decompose(&dl);
                if core.len() == 2 {
                    let (lab, a, b) = dang.pop().expect("one chord");
                    nodes[v].stack.push(lab);
                    vertex_of.insert(lab, v);
                    queue.push_back((lab, a, b));
                } else {
                    add_children(&mut nodes, &mut vertex_of, &mut queue, v, dang);
                    nodes[v].structure = phi_word(&core).expect("connected, at least two chords");
                }
            }
        }
    }

    fn build(nodes: &[Node], v: usize, vertex_of: &HashMap<usize, usize>) -> ZTree {
        let n = &nodes[v];
        let (structure, labels) = if n.structure.is_empty() {
            (ChordDiagram::empty(), Vec::new())
        } else {
            word_diagram(&n.structure)
        };
        debug_assert_eq!(labels.len(), n.children.len());
        let children = labels
            .iter()
            .map(|l| build(nodes, vertex_of[l], vertex_of))
            .collect();
        ZTree { stack: n.stack.clone(), structure, children }
    }
    build(&nodes, 0, &vertex_of)
}

/// Dangling words of the first stack entry of `t`.
fn tree_danglings(t: &ZTree) -> Result<(Word, Word), BijError> {
    let mut dang: HashMap<usize, (Word, Word)> = HashMap::new();
    for c in &t.children {
        dang.insert(c.stack[0], tree_danglings(c)?);
    }
    let (mut dl, mut dr) = if t.children.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let sw = t.structure_word();
        let comps = word_components(&sw);
        match comps.len() {
            1 => (Vec::new(), word_assemble(&sw, &dang)),
            2 if !t.structure.is_indecomposable() => {
                let cut = comps[0].len();
                (word_assemble(&sw[..cut], &dang), word_assemble(&sw[cut..], &dang))
            }
            2 => {
                let core = phi_inv_word(&sw)?;
                (word_assemble(&core, &dang), Vec::new())
            }
            _ => return Err(BijError::MalformedTree("more than two components".into())),
        }
    };
    for w in t.stack.windows(2).rev() {
        let below = w[1];
        let mut word = vec![below];
        word.extend_from_slice(&dl);
        word.push(below);
        word.extend_from_slice(&dr);
        dl = word;
        dr = Vec::new();
    }
    Ok((dl, dr))
}

/// Θ⁻¹.
pub fn theta_inv(t: &ZTree) -> Result<Seed, BijError> {
    t.check()?;
    let mut labels = t.labels();
    labels.sort_unstable();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(BijError::MalformedTree("repeated label".into()));
    }
    let (dl, dr) = tree_danglings(t)?;
    Ok(Seed {
        left: ChordDiagram::from_word(&dl)?,
        right: ChordDiagram::from_word(&dr)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> ChordDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn nabla_of_crossing_pair() {
        let t = nabla(&d("2: 3 4 1 2")).unwrap();
        assert_eq!(t.c1, ChordDiagram::single());
        assert_eq!(t.c2, ChordDiagram::single());
        assert_eq!(t.k, 1);
        assert_eq!(nabla_inv(&t).unwrap(), d("2: 3 4 1 2"));
    }

    #[test]
    fn nabla_rejects() {
        assert_eq!(nabla(&ChordDiagram::single()), Err(BijError::TooSmall));
        assert_eq!(nabla(&d("2: 2 1 4 3")), Err(BijError::NotConnected));
        let t = RootShareTriple { c1: ChordDiagram::single(), c2: ChordDiagram::single(), k: 2 };
        assert_eq!(nabla_inv(&t), Err(BijError::KOutOfRange { k: 2, max: 1 }));
    }

    #[test]
    fn phi_of_crossing_pair_is_nesting() {
        assert_eq!(phi(&d("2: 3 4 1 2")).unwrap(), d("2: 4 3 2 1"));
        assert_eq!(phi_inv(&d("2: 4 3 2 1")).unwrap(), d("2: 3 4 1 2"));
        assert_eq!(phi_inv(&d("2: 2 1 4 3")), Err(BijError::NotPhiImage));
    }

    #[test]
    fn trivial_seed_is_leaf() {
        let s = Seed { left: ChordDiagram::empty(), right: ChordDiagram::empty() };
        let t = theta(&s);
        assert_eq!(t.stack, vec![0]);
        assert!(t.children.is_empty());
        assert_eq!(theta_inv(&t).unwrap(), s);
    }

    #[test]
    fn absorption_builds_a_stack() {
        // root with a single chord on its left and nothing on the right
        let s: Seed = "1: 2 1 ; 0:".parse().unwrap();
        let t = theta(&s);
        assert_eq!(t.stack, vec![0, 1]);
        assert_eq!(t.size(), 2);
        assert_eq!(theta_inv(&t).unwrap(), s);
    }

    #[test]
    fn tree_literal_roundtrip() {
        for s in Seed::all(4) {
            let t = theta(&s);
            let back: ZTree = t.to_string().parse().unwrap();
            assert_eq!(back, t);
        }
    }
}
