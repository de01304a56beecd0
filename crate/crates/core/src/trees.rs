//! Decorated rooted trees and forests, planar and non-planar, with the
//! coproduct given by admissible cuts.
//!
//! A cut severs a set of edges such that every path from a root contains at
//! most one severed edge; each tree of a forest may instead take a total cut
//! (severed below the root).  The crown collects the subtrees that fall, the
//! trunk keeps the rooted part.  Summing crown (x) trunk over all admissible
//! cuts of a forest gives the full coproduct; stripping the all-empty and
//! all-total cuts gives the reduced coproduct.
//!
//! The non-planar flavor is the free commutative case: children are sorted
//! into a canonical order and forests are multisets.  The planar flavor keeps
//! child and factor order significant (free noncommutative case).  Crown
//! factors are emitted in depth-first order of the severed edges, which in
//! the planar case is the left-to-right order of the fallen subtrees.

use crate::error::{Error, Result};
use crate::hopf::HopfInstance;
use crate::linear::{Element, TensorElement};
use crate::rational::rat;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    pub decoration: u32,
    pub children: Vec<Tree>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Forest {
    pub trees: Vec<Tree>,
}

impl Tree {
    pub fn leaf(decoration: u32) -> Tree {
        Tree { decoration, children: Vec::new() }
    }

    pub fn node(decoration: u32, children: Vec<Tree>) -> Tree {
        Tree { decoration, children }
    }

    /// Number of vertices.
    pub fn size(&self) -> u64 {
        1 + self.children.iter().map(Tree::size).sum::<u64>()
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        (self.size() - 1) as usize
    }

    /// Canonical non-planar form: children canonicalized, then sorted.
    pub fn canonical(&self) -> Tree {
        let mut children: Vec<Tree> = self.children.iter().map(Tree::canonical).collect();
        children.sort();
        Tree { decoration: self.decoration, children }
    }
}

impl Forest {
    pub fn empty() -> Forest {
        Forest { trees: Vec::new() }
    }

    pub fn of(trees: Vec<Tree>) -> Forest {
        Forest { trees }
    }

    pub fn single(t: Tree) -> Forest {
        Forest { trees: vec![t] }
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Total number of vertices.
    pub fn size(&self) -> u64 {
        self.trees.iter().map(Tree::size).sum()
    }

    /// Canonical non-planar form: each tree canonicalized, factors sorted.
    pub fn canonical(&self) -> Forest {
        let mut trees: Vec<Tree> = self.trees.iter().map(Tree::canonical).collect();
        trees.sort();
        Forest { trees }
    }

    /// Concatenation (the planar product; sort afterwards for non-planar).
    pub fn concat(&self, other: &Forest) -> Forest {
        let mut trees = self.trees.clone();
        trees.extend(other.trees.iter().cloned());
        Forest { trees }
    }
}

// ---------------------------------------------------------------------------
// Cuts
// ---------------------------------------------------------------------------

/// Cut of a single tree: either the total cut (severed below the root) or a
/// set of severed edges, identified by depth-first preorder index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeCut {
    Total,
    Edges(BTreeSet<usize>),
}

impl TreeCut {
    pub fn empty() -> TreeCut {
        TreeCut::Edges(BTreeSet::new())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, TreeCut::Edges(s) if s.is_empty())
    }
}

/// Cut of a forest: one tree cut per factor, in factor order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestCut {
    pub per_tree: Vec<TreeCut>,
}

/// For each edge (preorder index), the preorder indices of the edges strictly
/// between it and the root.
fn edge_ancestors(t: &Tree) -> Vec<Vec<usize>> {
    fn walk(t: &Tree, stack: &mut Vec<usize>, next: &mut usize, out: &mut Vec<Vec<usize>>) {
        for child in &t.children {
            let id = *next;
            *next += 1;
            out.push(stack.clone());
            stack.push(id);
            walk(child, stack, next, out);
            stack.pop();
        }
    }
    let mut out = Vec::new();
    walk(t, &mut Vec::new(), &mut 0, &mut out);
    out
}

/// True iff no severed edge lies on the root path of another (the severed
/// set is an antichain).
pub fn is_admissible(t: &Tree, cut: &TreeCut) -> bool {
    match cut {
        TreeCut::Total => true,
        TreeCut::Edges(set) => {
            let anc = edge_ancestors(t);
            set.iter().all(|e| anc[*e].iter().all(|a| !set.contains(a)))
        }
    }
}

/// All admissible cuts of one tree: every antichain of edges (the empty set
/// included), then the total cut.  Deterministic order: edge subsets by
/// increasing bitmask, total cut last.
pub fn tree_admissible_cuts(t: &Tree) -> Vec<TreeCut> {
    let e = t.edge_count();
    assert!(e < 24, "cut enumeration is exponential; tree too large ({e} edges)");
    let anc = edge_ancestors(t);
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << e) {
        let set: BTreeSet<usize> = (0..e).filter(|i| mask & (1 << i) != 0).collect();
        let ok = set.iter().all(|i| anc[*i].iter().all(|a| !set.contains(a)));
        if ok {
            out.push(TreeCut::Edges(set));
        }
    }
    out.push(TreeCut::Total);
    out
}

/// All admissible cuts of a forest: the product of the per-factor cuts,
/// first factor varying slowest.
pub fn forest_admissible_cuts(f: &Forest) -> Vec<ForestCut> {
    let mut out = vec![ForestCut { per_tree: Vec::new() }];
    for t in &f.trees {
        let cuts = tree_admissible_cuts(t);
        let mut next = Vec::with_capacity(out.len() * cuts.len());
        for partial in &out {
            for c in &cuts {
                let mut per_tree = partial.per_tree.clone();
                per_tree.push(c.clone());
                next.push(ForestCut { per_tree });
            }
        }
        out = next;
    }
    out
}

/// Trunk copy of `t` under the severed set, pushing fallen subtrees onto the
/// crown in depth-first order.  Edge ids follow the same preorder numbering
/// as `tree_admissible_cuts`.
fn split_tree(
    t: &Tree,
    cut: &BTreeSet<usize>,
    next_edge: &mut usize,
    crown: &mut Vec<Tree>,
) -> Tree {
    let mut kept = Vec::new();
    for child in &t.children {
        let id = *next_edge;
        *next_edge += 1;
        if cut.contains(&id) {
            crown.push(child.clone());
            *next_edge += child.edge_count();
        } else {
            kept.push(split_tree(child, cut, next_edge, crown));
        }
    }
    Tree { decoration: t.decoration, children: kept }
}

/// Crown and trunk of a forest under an admissible cut.  The empty cut gives
/// `(1, f)`, the all-total cut gives `(f, 1)`.
pub fn crown_and_trunk(f: &Forest, cut: &ForestCut) -> Result<(Forest, Forest)> {
    if cut.per_tree.len() != f.trees.len() {
        return Err(Error::Graph(format!(
            "cut has {} factors but forest has {}",
            cut.per_tree.len(),
            f.trees.len()
        )));
    }
    let mut crown = Vec::new();
    let mut trunk = Vec::new();
    for (t, c) in f.trees.iter().zip(&cut.per_tree) {
        match c {
            TreeCut::Total => crown.push(t.clone()),
            TreeCut::Edges(set) => {
                if !is_admissible(t, c) {
                    return Err(Error::Graph("cut is not admissible".into()));
                }
                let mut next = 0usize;
                let trunk_tree = split_tree(t, set, &mut next, &mut crown);
                trunk.push(trunk_tree);
            }
        }
    }
    Ok((Forest::of(crown), Forest::of(trunk)))
}

/// Reduced coproduct by cut enumeration: all admissible cuts except the
/// all-empty and all-total ones, legs canonicalized for the non-planar
/// flavor when `planar` is false.
pub fn forest_reduced_coproduct(f: &Forest, planar: bool) -> TensorElement<Forest> {
    let mut out = TensorElement::zero();
    if f.is_empty() {
        return out;
    }
    for cut in forest_admissible_cuts(f) {
        let all_empty = cut.per_tree.iter().all(TreeCut::is_empty);
        let all_total = cut.per_tree.iter().all(|c| matches!(c, TreeCut::Total));
        if all_empty || all_total {
            continue;
        }
        let (crown, trunk) = crown_and_trunk(f, &cut).expect("enumerated cuts are admissible");
        let (crown, trunk) = if planar {
            (crown, trunk)
        } else {
            (crown.canonical(), trunk.canonical())
        };
        out.add_term(crown, trunk, rat(1));
    }
    out
}

/// Graft: new root with the forest's trees as children (B_+).
pub fn graft(f: &Forest, decoration: u32) -> Tree {
    Tree { decoration, children: f.trees.clone() }
}

// ---------------------------------------------------------------------------
// Deterministic enumeration by degree
// ---------------------------------------------------------------------------

/// All trees with `n` vertices over the decoration alphabet, sorted.
pub fn trees_of_size(n: u64, alphabet: &[u32], planar: bool) -> Vec<Tree> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for f in forests_of_size(n - 1, alphabet, planar) {
        for d in alphabet {
            out.push(graft(&f, *d));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All forests with `n` vertices total: sequences of trees for the planar
/// flavor, canonically sorted multisets for the non-planar one.
pub fn forests_of_size(n: u64, alphabet: &[u32], planar: bool) -> Vec<Forest> {
    fn extend(
        n: u64,
        alphabet: &[u32],
        planar: bool,
        min_tree: Option<&Tree>,
        prefix: &mut Vec<Tree>,
        out: &mut Vec<Forest>,
    ) {
        if n == 0 {
            out.push(Forest::of(prefix.clone()));
            return;
        }
        for k in 1..=n {
            for t in trees_of_size(k, alphabet, planar) {
                if !planar {
                    if let Some(m) = min_tree {
                        if &t < m {
                            continue;
                        }
                    }
                }
                prefix.push(t.clone());
                let next_min = if planar { None } else { Some(&t) };
                extend(n - k, alphabet, planar, next_min, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(n, alphabet, planar, None, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Hopf instances
// ---------------------------------------------------------------------------

/// Free commutative case: forests as multisets of canonically ordered trees.
#[derive(Clone, Debug)]
pub struct RootedTrees {
    pub decorations: Vec<u32>,
}

impl RootedTrees {
    pub fn undecorated() -> Self {
        RootedTrees { decorations: vec![0] }
    }

    pub fn with_decorations(decorations: Vec<u32>) -> Self {
        RootedTrees { decorations }
    }
}

impl HopfInstance for RootedTrees {
    type Basis = Forest;

    fn name(&self) -> String {
        "rooted trees".into()
    }

    fn unit(&self) -> Forest {
        Forest::empty()
    }

    fn degree(&self, b: &Forest) -> u64 {
        b.size()
    }

    fn product(&self, a: &Forest, b: &Forest) -> Element<Forest> {
        Element::basis(a.concat(b).canonical())
    }

    fn reduced_coproduct(&self, b: &Forest) -> TensorElement<Forest> {
        forest_reduced_coproduct(b, false)
    }

    fn generator_factors(&self, b: &Forest) -> Vec<Forest> {
        b.trees.iter().map(|t| Forest::single(t.clone())).collect()
    }

    fn generators_of_degree(&self, n: u64) -> Vec<Forest> {
        trees_of_size(n, &self.decorations, false)
            .into_iter()
            .map(|t| Forest::single(t.canonical()))
            .collect()
    }

    fn basis_of_degree(&self, n: u64) -> Vec<Forest> {
        if n == 0 {
            return vec![Forest::empty()];
        }
        forests_of_size(n, &self.decorations, false)
            .into_iter()
            .map(|f| f.canonical())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}

/// Free noncommutative case: planar forests, child and factor order kept.
#[derive(Clone, Debug)]
pub struct PlanarTrees {
    pub decorations: Vec<u32>,
}

impl PlanarTrees {
    pub fn undecorated() -> Self {
        PlanarTrees { decorations: vec![0] }
    }

    pub fn with_decorations(decorations: Vec<u32>) -> Self {
        PlanarTrees { decorations }
    }
}

impl HopfInstance for PlanarTrees {
    type Basis = Forest;

    fn name(&self) -> String {
        "planar rooted trees".into()
    }

    fn unit(&self) -> Forest {
        Forest::empty()
    }

    fn degree(&self, b: &Forest) -> u64 {
        b.size()
    }

    fn product(&self, a: &Forest, b: &Forest) -> Element<Forest> {
        Element::basis(a.concat(b))
    }

    fn reduced_coproduct(&self, b: &Forest) -> TensorElement<Forest> {
        forest_reduced_coproduct(b, true)
    }

    fn generator_factors(&self, b: &Forest) -> Vec<Forest> {
        b.trees.iter().map(|t| Forest::single(t.clone())).collect()
    }

    fn generators_of_degree(&self, n: u64) -> Vec<Forest> {
        trees_of_size(n, &self.decorations, true)
            .into_iter()
            .map(Forest::single)
            .collect()
    }

    fn basis_of_degree(&self, n: u64) -> Vec<Forest> {
        if n == 0 {
            return vec![Forest::empty()];
        }
        forests_of_size(n, &self.decorations, true)
    }
}

/// Deliberately broken variant used to demonstrate failure reporting: the
/// reduced coproduct of the two-branch corolla loses one term, which breaks
/// coassociativity (and multiplicativity) at degree 3.
#[derive(Clone, Debug)]
pub struct CorruptedTrees {
    inner: RootedTrees,
}

impl CorruptedTrees {
    pub fn new() -> Self {
        CorruptedTrees { inner: RootedTrees::undecorated() }
    }
}

impl Default for CorruptedTrees {
    fn default() -> Self {
        Self::new()
    }
}

impl HopfInstance for CorruptedTrees {
    type Basis = Forest;

    fn name(&self) -> String {
        "rooted trees (corrupted fixture)".into()
    }

    fn unit(&self) -> Forest {
        self.inner.unit()
    }

    fn degree(&self, b: &Forest) -> u64 {
        self.inner.degree(b)
    }

    fn product(&self, a: &Forest, b: &Forest) -> Element<Forest> {
        self.inner.product(a, b)
    }

    fn reduced_coproduct(&self, b: &Forest) -> TensorElement<Forest> {
        let full = self.inner.reduced_coproduct(b);
        let corolla = Forest::single(Tree::node(0, vec![Tree::leaf(0), Tree::leaf(0)]));
        if *b != corolla {
            return full;
        }
        let dropped_crown = Forest::of(vec![Tree::leaf(0), Tree::leaf(0)]);
        let dropped_trunk = Forest::single(Tree::leaf(0));
        let mut out = TensorElement::zero();
        for ((l, r), c) in full.terms() {
            if *l == dropped_crown && *r == dropped_trunk {
                continue;
            }
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }

    fn generator_factors(&self, b: &Forest) -> Vec<Forest> {
        self.inner.generator_factors(b)
    }

    fn generators_of_degree(&self, n: u64) -> Vec<Forest> {
        self.inner.generators_of_degree(n)
    }

    fn basis_of_degree(&self, n: u64) -> Vec<Forest> {
        self.inner.basis_of_degree(n)
    }
}

// ---------------------------------------------------------------------------
// Text syntax: `[d]` leaf, `[d t1 t2 ...]` tree, whitespace-separated trees
// for a forest, `1` for the empty forest.
// ---------------------------------------------------------------------------

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.decoration)?;
        for c in &self.children {
            write!(f, " {c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.trees.is_empty() {
            return write!(f, "1");
        }
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

pub fn parse_forest(input: &str) -> Result<Forest> {
    let s = input.trim();
    if s == "1" {
        return Ok(Forest::empty());
    }
    let mut chars = s.chars().peekable();
    let mut trees = Vec::new();
    skip_ws(&mut chars);
    while chars.peek().is_some() {
        trees.push(parse_tree_inner(&mut chars)?);
        skip_ws(&mut chars);
    }
    if trees.is_empty() {
        return Err(Error::Parse(format!("empty forest literal {input:?}")));
    }
    Ok(Forest::of(trees))
}

pub fn parse_tree(input: &str) -> Result<Tree> {
    let f = parse_forest(input)?;
    if f.trees.len() != 1 {
        return Err(Error::Parse(format!("expected a single tree, got {} factors", f.trees.len())));
    }
    Ok(f.trees.into_iter().next().expect("one tree"))
}

fn skip_ws(chars: &mut std::iter::Peekable<std::str::Chars>) {
    while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
        chars.next();
    }
}

fn parse_tree_inner(chars: &mut std::iter::Peekable<std::str::Chars>) -> Result<Tree> {
    match chars.next() {
        Some('[') => {}
        other => return Err(Error::Parse(format!("expected '[', found {other:?}"))),
    }
    skip_ws(chars);
    let mut digits = String::new();
    while matches!(chars.peek(), Some(c) if c.is_ascii_digit()) {
        digits.push(chars.next().expect("digit"));
    }
    if digits.is_empty() {
        return Err(Error::Parse("expected a decoration after '['".into()));
    }
    let decoration: u32 = digits
        .parse()
        .map_err(|e| Error::Parse(format!("bad decoration {digits:?}: {e}")))?;
    let mut children = Vec::new();
    loop {
        skip_ws(chars);
        match chars.peek() {
            Some(']') => {
                chars.next();
                return Ok(Tree { decoration, children });
            }
            Some('[') => children.push(parse_tree_inner(chars)?),
            other => {
                return Err(Error::Parse(format!("expected '[' or ']', found {other:?}")));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Named building blocks used across tests and docs
// ---------------------------------------------------------------------------

/// Single vertex with decoration 0.
pub fn single_vertex() -> Tree {
    Tree::leaf(0)
}

/// Ladder with `n` vertices: each vertex has exactly one child.
pub fn ladder(n: u64) -> Tree {
    assert!(n >= 1);
    let mut t = Tree::leaf(0);
    for _ in 1..n {
        t = Tree::node(0, vec![t]);
    }
    t
}

/// Root with `k` leaf children.
pub fn corolla(k: usize) -> Tree {
    Tree::node(0, vec![Tree::leaf(0); k])
}
