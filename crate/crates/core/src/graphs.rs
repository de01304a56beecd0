//! Feynman graphs constrained by a theory, and their Hopf algebra of
//! superficially divergent insertions.
//!
//! A graph has unlabeled vertices, typed internal edges (self-loops allowed,
//! counted twice in the star of their vertex), and typed external legs.  A
//! theory is the set of allowed vertex types, each a multiset of edge types.
//!
//! A subgraph is a nonempty set of internal edges together with the vertices
//! they touch and the full stars of those vertices.  The coproduct of a
//! connected graph sums, over proper subgraphs that are locally
//! one-particle-irreducible and whose contraction stays inside the theory,
//! the subgraph (as a product of its connected components) tensor the
//! contracted graph.  Each edge subset contributes one term, so repeated
//! isomorphic subgraphs show up as integer multiplicities.  Components of an
//! admissible subgraph always carry at least one loop (a bridgeless connected
//! graph with an edge has a cycle), and contractions of proper subgraphs of
//! one-particle-irreducible graphs always keep at least one loop, so the
//! quotient identification of loopless graphs with the unit never has to drop
//! factors here.
//!
//! Grading is by loop number; the unit is the empty product of graphs.

use crate::error::{Error, Result};
use crate::hopf::HopfInstance;
use crate::linear::{Element, TensorElement};
use crate::rational::rat;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type EdgeType = u32;

/// A vertex type: edge type -> number of incident half-edges of that type.
pub type VertexType = BTreeMap<EdgeType, u32>;

#[derive(Clone, Debug)]
pub struct Theory {
    pub name: String,
    /// Edge type names, for parsing and rendering.
    pub edge_names: BTreeMap<String, EdgeType>,
    pub vertex_types: BTreeSet<VertexType>,
}

impl Theory {
    pub fn edge_type_by_token(&self, tok: &str) -> Result<EdgeType> {
        if let Some(t) = self.edge_names.get(tok) {
            return Ok(*t);
        }
        if let Ok(n) = tok.parse::<u32>() {
            if self.edge_names.values().any(|v| *v == n) {
                return Ok(n);
            }
        }
        Err(Error::Parse(format!("unknown edge type {tok:?} in theory {}", self.name)))
    }

    pub fn allows_vertex(&self, vt: &VertexType) -> bool {
        self.vertex_types.contains(vt)
    }
}

fn vt(entries: &[(EdgeType, u32)]) -> VertexType {
    entries.iter().copied().collect()
}

/// Cubic scalar theory: one edge type, 3-valent interaction, 2-valent
/// propagator correction vertex.
pub fn phi3() -> Theory {
    Theory {
        name: "phi3".into(),
        edge_names: BTreeMap::from_iter([("scalar".to_string(), 1)]),
        vertex_types: BTreeSet::from_iter([vt(&[(1, 3)]), vt(&[(1, 2)])]),
    }
}

/// Quartic scalar theory.
pub fn phi4() -> Theory {
    Theory {
        name: "phi4".into(),
        edge_names: BTreeMap::from_iter([("scalar".to_string(), 1)]),
        vertex_types: BTreeSet::from_iter([vt(&[(1, 4)]), vt(&[(1, 2)])]),
    }
}

/// Electron-photon theory: fermion and photon edges, the 3-point interaction
/// and the two propagator correction vertices.
pub fn qed() -> Theory {
    Theory {
        name: "qed".into(),
        edge_names: BTreeMap::from_iter([("fermion".to_string(), 1), ("photon".to_string(), 2)]),
        vertex_types: BTreeSet::from_iter([
            vt(&[(1, 2), (2, 1)]),
            vt(&[(1, 2)]),
            vt(&[(2, 2)]),
        ]),
    }
}

pub fn builtin_theory(name: &str) -> Result<Theory> {
    match name {
        "phi3" => Ok(phi3()),
        "phi4" => Ok(phi4()),
        "qed" => Ok(qed()),
        other => Err(Error::Parse(format!("unknown theory {other:?}"))),
    }
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub etype: EdgeType,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ext {
    pub v: usize,
    pub etype: EdgeType,
}

/// Finite graph with unlabeled vertices `0..vertex_count`, typed internal
/// edges, and typed external legs.  Construction normalizes edge endpoint
/// order and sorts the edge and leg lists, so structural equality is equality
/// of labeled graphs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
    pub externals: Vec<Ext>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, EdgeType)>, externals: Vec<(usize, EdgeType)>) -> Graph {
        let mut es: Vec<Edge> = edges
            .into_iter()
            .map(|(a, b, t)| Edge { a: a.min(b), b: a.max(b), etype: t })
            .collect();
        es.sort();
        let mut xs: Vec<Ext> = externals.into_iter().map(|(v, t)| Ext { v, etype: t }).collect();
        xs.sort();
        for e in &es {
            assert!(e.b < vertex_count, "edge endpoint out of range");
        }
        for x in &xs {
            assert!(x.v < vertex_count, "external leg endpoint out of range");
        }
        Graph { vertex_count, edges: es, externals: xs }
    }

    /// Star of a vertex: incident half-edges by type; a self-loop counts
    /// twice, each external leg once.
    pub fn star(&self, v: usize) -> VertexType {
        let mut out = VertexType::new();
        for e in &self.edges {
            if e.a == v {
                *out.entry(e.etype).or_insert(0) += 1;
            }
            if e.b == v {
                *out.entry(e.etype).or_insert(0) += 1;
            }
        }
        for x in &self.externals {
            if x.v == v {
                *out.entry(x.etype).or_insert(0) += 1;
            }
        }
        out
    }

    /// Every vertex type allowed by the theory?
    pub fn validate_against(&self, theory: &Theory) -> Result<()> {
        for v in 0..self.vertex_count {
            let s = self.star(v);
            if !theory.allows_vertex(&s) {
                return Err(Error::Graph(format!(
                    "vertex {v} has star {s:?}, not allowed in theory {}",
                    theory.name
                )));
            }
        }
        for e in &self.edges {
            if !theory.edge_names.values().any(|t| *t == e.etype) {
                return Err(Error::Graph(format!(
                    "edge type {} unknown in theory {}",
                    e.etype, theory.name
                )));
            }
        }
        Ok(())
    }

    /// Component id per vertex under the given edge subset (all edges if
    /// `None`), ids numbered by smallest member vertex.
    fn component_ids(&self, subset: Option<&BTreeSet<usize>>) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut Vec<usize>, v: usize) -> usize {
            if parent[v] != v {
                let root = find(parent, parent[v]);
                parent[v] = root;
            }
            parent[v]
        }
        for (i, e) in self.edges.iter().enumerate() {
            if subset.map_or(true, |s| s.contains(&i)) {
                let ra = find(&mut parent, e.a);
                let rb = find(&mut parent, e.b);
                if ra != rb {
                    let (lo, hi) = (ra.min(rb), ra.max(rb));
                    parent[hi] = lo;
                }
            }
        }
        (0..self.vertex_count).map(|v| find(&mut parent, v)).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let ids = self.component_ids(None);
        ids.iter().all(|c| *c == ids[0])
    }

    /// Loop number I - V + 1 of a connected graph.
    pub fn loop_number(&self) -> Result<u64> {
        if !self.is_connected() {
            return Err(Error::Graph("loop number of a disconnected graph".into()));
        }
        Ok((self.edges.len() as i64 - self.vertex_count as i64 + 1) as u64)
    }

    /// One-particle-irreducible: connected, and removing any single internal
    /// edge keeps it connected (self-loops are never bridges).
    pub fn is_one_particle_irreducible(&self) -> bool {
        if !self.is_connected() {
            return false;
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.a == e.b {
                continue;
            }
            let subset: BTreeSet<usize> =
                (0..self.edges.len()).filter(|j| *j != i).collect();
            let ids = self.component_ids(Some(&subset));
            if !ids.iter().all(|c| *c == ids[0]) {
                return false;
            }
        }
        true
    }

    /// Residue: shrink all internal edges to a single vertex carrying every
    /// external leg.
    pub fn residue(&self) -> Graph {
        Graph::new(
            1,
            Vec::new(),
            self.externals.iter().map(|x| (0, x.etype)).collect(),
        )
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{V={}; e=[", self.vertex_count)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}-{}", e.etype, e.a, e.b)?;
        }
        write!(f, "]; x=[")?;
        for (i, x) in self.externals.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}", x.etype, x.v)?;
        }
        write!(f, "]}}")
    }
}

// ---------------------------------------------------------------------------
// Subgraphs and contraction
// ---------------------------------------------------------------------------

/// Vertex groups (sorted) of the subgraph spanned by the given edge subset.
pub fn subgraph_components(g: &Graph, edges: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    let ids = g.component_ids(Some(edges));
    let touched: BTreeSet<usize> = edges
        .iter()
        .flat_map(|i| [g.edges[*i].a, g.edges[*i].b])
        .collect();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in touched {
        groups.entry(ids[v]).or_default().push(v);
    }
    groups.into_values().collect()
}

/// Extract one component of a subgraph as a standalone graph: the component's
/// vertices, the subgraph edges inside it, and as external legs every
/// half-edge of the ambient graph sticking out of the component (both sides
/// of a non-subgraph edge with both ends inside, plus ambient external legs).
pub fn extract_component(g: &Graph, edges: &BTreeSet<usize>, comp: &[usize]) -> Graph {
    let vmap: BTreeMap<usize, usize> =
        comp.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut internal = Vec::new();
    let mut externals = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        let a_in = vmap.contains_key(&e.a);
        let b_in = vmap.contains_key(&e.b);
        if edges.contains(&i) {
            if a_in && b_in {
                internal.push((vmap[&e.a], vmap[&e.b], e.etype));
            }
        } else {
            if a_in {
                externals.push((vmap[&e.a], e.etype));
            }
            if b_in {
                externals.push((vmap[&e.b], e.etype));
            }
        }
    }
    for x in &g.externals {
        if let Some(v) = vmap.get(&x.v) {
            externals.push((*v, x.etype));
        }
    }
    Graph::new(comp.len(), internal, externals)
}

/// Is the edge subset locally one-particle-irreducible (every component of
/// the spanned subgraph 1PI)?
pub fn is_locally_1pi(g: &Graph, edges: &BTreeSet<usize>) -> bool {
    if edges.is_empty() {
        return false;
    }
    for comp in subgraph_components(g, edges) {
        let vmap: BTreeMap<usize, usize> =
            comp.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mini = Graph::new(
            comp.len(),
            g.edges
                .iter()
                .enumerate()
                .filter(|(i, e)| {
                    edges.contains(i) && vmap.contains_key(&e.a) && vmap.contains_key(&e.b)
                })
                .map(|(_, e)| (vmap[&e.a], vmap[&e.b], e.etype))
                .collect(),
            Vec::new(),
        );
        if !mini.is_one_particle_irreducible() {
            return false;
        }
    }
    true
}

/// Contract the subgraph: each component collapses to one vertex keeping the
/// half-edges that stick out; subgraph edges disappear.  Contracting the full
/// edge set of a connected graph gives the residue.
pub fn contract(g: &Graph, edges: &BTreeSet<usize>) -> Result<Graph> {
    for i in edges {
        if *i >= g.edges.len() {
            return Err(Error::Graph(format!("edge index {i} out of range")));
        }
    }
    let ids = g.component_ids(Some(edges));
    let touched: BTreeSet<usize> = edges
        .iter()
        .flat_map(|i| [g.edges[*i].a, g.edges[*i].b])
        .collect();
    // New vertex ids in order of first appearance by old id.
    let mut vmap: BTreeMap<usize, usize> = BTreeMap::new();
    let mut next = 0usize;
    for v in 0..g.vertex_count {
        let key = if touched.contains(&v) { ids[v] } else { v };
        let merged = touched.contains(&v);
        let slot = if merged {
            // All vertices of one component share ids[v]; map through it.
            if let Some(s) = vmap.get(&(g.vertex_count + key)) {
                *s
            } else {
                let s = next;
                next += 1;
                vmap.insert(g.vertex_count + key, s);
                s
            }
        } else {
            let s = next;
            next += 1;
            s
        };
        vmap.insert(v, slot);
    }
    let mut new_edges = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if edges.contains(&i) {
            continue;
        }
        new_edges.push((vmap[&e.a], vmap[&e.b], e.etype));
    }
    let new_ext = g.externals.iter().map(|x| (vmap[&x.v], x.etype)).collect();
    Ok(Graph::new(next, new_edges, new_ext))
}

/// Proper subgraphs of a connected graph that can appear in the coproduct:
/// nonempty strict subsets of the edge set that are locally 1PI, have every
/// component carrying a loop, and whose contraction has all vertex types in
/// the theory.  One entry per edge subset, in increasing bitmask order.
pub fn enumerate_subgraphs(g: &Graph, theory: &Theory) -> Result<Vec<BTreeSet<usize>>> {
    let n = g.edges.len();
    if n > 20 {
        return Err(Error::SizeBound(format!(
            "subgraph enumeration over {n} edges is not supported"
        )));
    }
    let mut out = Vec::new();
    for mask in 1u64..((1u64 << n) - 1) {
        let set: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if !is_locally_1pi(g, &set) {
            continue;
        }
        let comps = subgraph_components(g, &set);
        let loops_ok = comps.iter().all(|comp| {
            let mini = extract_component(g, &set, comp);
            mini.loop_number().map(|l| l >= 1).unwrap_or(false)
        });
        if !loops_ok {
            continue;
        }
        let contracted = contract(g, &set)?;
        if contracted.validate_against(theory).is_err() {
            continue;
        }
        out.push(set);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

const MAX_CANON_VERTICES: usize = 10;
const MAX_CANON_ORDERINGS: u64 = 500_000;

/// Isomorphism-invariant canonical labeling: vertices are partitioned by an
/// iteratively refined invariant (star, self-loop profile, external profile,
/// then neighbor classes), and the lexicographically least relabeled graph
/// over all class-respecting orderings is returned.
pub fn canonical_form(g: &Graph) -> Result<Graph> {
    if g.vertex_count > MAX_CANON_VERTICES {
        return Err(Error::SizeBound(format!(
            "canonical form supports at most {MAX_CANON_VERTICES} vertices, got {}",
            g.vertex_count
        )));
    }
    if g.vertex_count == 0 {
        return Ok(g.clone());
    }

    // Initial invariant: star, self-loops by type, external legs by type.
    let mut keys: Vec<String> = (0..g.vertex_count)
        .map(|v| {
            let star = g.star(v);
            let selfloops: BTreeMap<EdgeType, u32> = g
                .edges
                .iter()
                .filter(|e| e.a == v && e.b == v)
                .fold(BTreeMap::new(), |mut m, e| {
                    *m.entry(e.etype).or_insert(0) += 1;
                    m
                });
            let exts: BTreeMap<EdgeType, u32> = g
                .externals
                .iter()
                .filter(|x| x.v == v)
                .fold(BTreeMap::new(), |mut m, x| {
                    *m.entry(x.etype).or_insert(0) += 1;
                    m
                });
            format!("{star:?}|{selfloops:?}|{exts:?}")
        })
        .collect();
    let mut classes = classes_from_keys(&keys);

    // Refine by neighbor classes until stable.
    for _ in 0..g.vertex_count {
        keys = (0..g.vertex_count)
            .map(|v| {
                let mut nbr: Vec<(EdgeType, usize)> = Vec::new();
                for e in &g.edges {
                    if e.a == v && e.b != v {
                        nbr.push((e.etype, classes[e.b]));
                    }
                    if e.b == v && e.a != v {
                        nbr.push((e.etype, classes[e.a]));
                    }
                }
                nbr.sort();
                format!("{}|{nbr:?}", classes[v])
            })
            .collect();
        let refined = classes_from_keys(&keys);
        if refined == classes {
            break;
        }
        classes = refined;
    }

    // Vertices grouped by class, classes in increasing order.
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, c) in classes.iter().enumerate() {
        by_class.entry(*c).or_default().push(v);
    }
    let groups: Vec<Vec<usize>> = by_class.into_values().collect();
    let mut orderings: u64 = 1;
    for grp in &groups {
        let mut f = 1u64;
        for i in 1..=grp.len() as u64 {
            f = f.saturating_mul(i);
        }
        orderings = orderings.saturating_mul(f);
        if orderings > MAX_CANON_ORDERINGS {
            return Err(Error::SizeBound(
                "too many symmetric vertices for canonical labeling".into(),
            ));
        }
    }

    let mut best: Option<Graph> = None;
    let mut perm_groups: Vec<Vec<Vec<usize>>> = Vec::new();
    for grp in &groups {
        perm_groups.push(permutations(grp));
    }
    let mut choice = vec![0usize; perm_groups.len()];
    loop {
        // Assemble the vertex order for this choice of per-class permutations.
        let mut order = Vec::with_capacity(g.vertex_count);
        for (gi, perms) in perm_groups.iter().enumerate() {
            order.extend(perms[choice[gi]].iter().copied());
        }
        let mut pos = vec![0usize; g.vertex_count];
        for (i, v) in order.iter().enumerate() {
            pos[*v] = i;
        }
        let candidate = Graph::new(
            g.vertex_count,
            g.edges.iter().map(|e| (pos[e.a], pos[e.b], e.etype)).collect(),
            g.externals.iter().map(|x| (pos[x.v], x.etype)).collect(),
        );
        if best.as_ref().map_or(true, |b| candidate < *b) {
            best = Some(candidate);
        }
        // Advance the mixed-radix counter over per-class permutations.
        let mut gi = 0;
        loop {
            if gi == perm_groups.len() {
                return Ok(best.expect("at least one ordering"));
            }
            choice[gi] += 1;
            if choice[gi] < perm_groups[gi].len() {
                break;
            }
            choice[gi] = 0;
            gi += 1;
        }
    }
}

fn classes_from_keys(keys: &[String]) -> Vec<usize> {
    let sorted: BTreeSet<&String> = keys.iter().collect();
    let rank: BTreeMap<&String, usize> =
        sorted.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    keys.iter().map(|k| rank[k]).collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, x) in items.iter().enumerate() {
        let mut rest: Vec<usize> = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            let mut p = vec![*x];
            p.append(&mut tail);
            out.push(p);
        }
    }
    out
}

/// A connected graph in canonical labeling, with its loop number cached.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonGraph {
    graph: Graph,
    loops: u64,
}

impl CanonGraph {
    pub fn new(g: &Graph) -> Result<CanonGraph> {
        if !g.is_connected() {
            return Err(Error::Graph("canonical graph factors must be connected".into()));
        }
        let graph = canonical_form(g)?;
        let loops = graph.loop_number()?;
        Ok(CanonGraph { graph, loops })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn loops(&self) -> u64 {
        self.loops
    }
}

impl fmt::Display for CanonGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.graph)
    }
}

/// Basis element: a finite product of connected graphs with at least one
/// loop each (the empty product is the unit).  Loopless connected graphs are
/// identified with the unit and silently dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GraphMonomial {
    pub factors: Vec<CanonGraph>,
}

impl GraphMonomial {
    pub fn unit() -> Self {
        GraphMonomial { factors: Vec::new() }
    }

    pub fn from_canon(mut factors: Vec<CanonGraph>) -> Self {
        factors.retain(|c| c.loops() >= 1);
        factors.sort();
        GraphMonomial { factors }
    }

    /// Split an arbitrary graph into connected components and keep the loopy
    /// ones as factors.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let all: BTreeSet<usize> = (0..g.edges.len()).collect();
        let ids = g.component_ids(None);
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..g.vertex_count {
            groups.entry(ids[v]).or_default().push(v);
        }
        let mut factors = Vec::new();
        for comp in groups.into_values() {
            let sub = extract_component(g, &all, &comp);
            if sub.loop_number()? >= 1 {
                factors.push(CanonGraph::new(&sub)?);
            }
        }
        Ok(Self::from_canon(factors))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self::from_canon(factors)
    }

    pub fn total_loops(&self) -> u64 {
        self.factors.iter().map(CanonGraph::loops).sum()
    }
}

impl fmt::Display for GraphMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// The Hopf instance
// ---------------------------------------------------------------------------

/// Hopf algebra of the theory's graphs, generated by a registry of connected
/// one-particle-irreducible seed graphs, closed under taking admissible
/// subgraph components and contractions.
#[derive(Clone, Debug)]
pub struct FeynmanGraphs {
    pub theory: Theory,
    registry: Vec<CanonGraph>,
}

impl FeynmanGraphs {
    pub fn new(theory: Theory, seeds: Vec<Graph>) -> Result<FeynmanGraphs> {
        let mut registry: BTreeSet<CanonGraph> = BTreeSet::new();
        let mut queue: Vec<CanonGraph> = Vec::new();
        for g in seeds {
            g.validate_against(&theory)?;
            if !g.is_one_particle_irreducible() {
                return Err(Error::Graph(format!(
                    "seed graph is not one-particle-irreducible: {g}"
                )));
            }
            let c = CanonGraph::new(&g)?;
            if c.loops() == 0 {
                return Err(Error::Graph("seed graph has no loops".into()));
            }
            queue.push(c);
        }
        while let Some(c) = queue.pop() {
            if !registry.insert(c.clone()) {
                continue;
            }
            for set in enumerate_subgraphs(c.graph(), &theory)? {
                for comp in subgraph_components(c.graph(), &set) {
                    let sub = extract_component(c.graph(), &set, &comp);
                    queue.push(CanonGraph::new(&sub)?);
                }
                let quot = contract(c.graph(), &set)?;
                if quot.loop_number()? >= 1 {
                    queue.push(CanonGraph::new(&quot)?);
                }
            }
        }
        Ok(FeynmanGraphs { theory, registry: registry.into_iter().collect() })
    }

    pub fn registry(&self) -> &[CanonGraph] {
        &self.registry
    }

    /// Full coproduct of one connected registry-style graph.
    pub fn coproduct_connected(&self, c: &CanonGraph) -> Result<TensorElement<GraphMonomial>> {
        let mut out = TensorElement::zero();
        let me = GraphMonomial::from_canon(vec![c.clone()]);
        out.add_term(me.clone(), GraphMonomial::unit(), rat(1));
        out.add_term(GraphMonomial::unit(), me, rat(1));
        for set in enumerate_subgraphs(c.graph(), &self.theory)? {
            let mut left_factors = Vec::new();
            for comp in subgraph_components(c.graph(), &set) {
                let sub = extract_component(c.graph(), &set, &comp);
                left_factors.push(CanonGraph::new(&sub)?);
            }
            let left = GraphMonomial::from_canon(left_factors);
            let right = GraphMonomial::from_graph(&contract(c.graph(), &set)?)?;
            out.add_term(left, right, rat(1));
        }
        Ok(out)
    }
}

impl HopfInstance for FeynmanGraphs {
    type Basis = GraphMonomial;

    fn name(&self) -> String {
        format!("feynman graphs ({})", self.theory.name)
    }

    fn unit(&self) -> GraphMonomial {
        GraphMonomial::unit()
    }

    fn degree(&self, b: &GraphMonomial) -> u64 {
        b.total_loops()
    }

    fn product(&self, a: &GraphMonomial, b: &GraphMonomial) -> Element<GraphMonomial> {
        Element::basis(a.mul(b))
    }

    fn reduced_coproduct(&self, b: &GraphMonomial) -> TensorElement<GraphMonomial> {
        // Multiplicative extension of the per-factor coproduct, then strip
        // the two primitive terms.
        let mut acc = TensorElement::single(GraphMonomial::unit(), GraphMonomial::unit(), rat(1));
        for factor in &b.factors {
            let delta = self
                .coproduct_connected(factor)
                .expect("registry graphs stay within size bounds");
            let mut next = TensorElement::zero();
            for ((al, ar), ca) in acc.terms() {
                for ((bl, br), cb) in delta.terms() {
                    next.add_term(al.mul(bl), ar.mul(br), ca * cb);
                }
            }
            acc = next;
        }
        let mut out = TensorElement::zero();
        let unit = GraphMonomial::unit();
        for ((l, r), c) in acc.terms() {
            if (*l == unit && *r == *b) || (*l == *b && *r == unit) {
                continue;
            }
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }

    fn generator_factors(&self, b: &GraphMonomial) -> Vec<GraphMonomial> {
        b.factors
            .iter()
            .map(|c| GraphMonomial::from_canon(vec![c.clone()]))
            .collect()
    }

    fn generators_of_degree(&self, n: u64) -> Vec<GraphMonomial> {
        self.registry
            .iter()
            .filter(|c| c.loops() == n)
            .map(|c| GraphMonomial::from_canon(vec![c.clone()]))
            .collect()
    }

    fn basis_of_degree(&self, n: u64) -> Vec<GraphMonomial> {
        let gens: Vec<&CanonGraph> = self.registry.iter().collect();
        let mut out = Vec::new();
        fn extend(
            gens: &[&CanonGraph],
            idx: usize,
            remaining: u64,
            current: &mut Vec<CanonGraph>,
            out: &mut Vec<GraphMonomial>,
        ) {
            if remaining == 0 {
                out.push(GraphMonomial::from_canon(current.clone()));
                return;
            }
            if idx == gens.len() {
                return;
            }
            let d = gens[idx].loops().max(1);
            let max_k = remaining / d;
            for k in 0..=max_k {
                for _ in 0..k {
                    current.push(gens[idx].clone());
                }
                extend(gens, idx + 1, remaining - k * d, current, out);
                for _ in 0..k {
                    current.pop();
                }
            }
        }
        extend(&gens, 0, n, &mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }
}

// ---------------------------------------------------------------------------
// Shipped fixtures
// ---------------------------------------------------------------------------

/// Named fixture graphs per theory, all connected and 1PI with <= 3 loops.
pub fn fixtures(theory_name: &str) -> Result<Vec<(String, Graph)>> {
    let s = 1; // scalar edge type in phi3/phi4
    let f = 1; // fermion edge type in qed
    let p = 2; // photon edge type in qed
    let out = match theory_name {
        "phi3" => vec![
            ("tadpole".to_string(), Graph::new(1, vec![(0, 0, s)], vec![(0, s)])),
            ("bubble".to_string(), Graph::new(2, vec![(0, 1, s), (0, 1, s)], vec![(0, s), (1, s)])),
            (
                "bubble2".to_string(),
                Graph::new(
                    4,
                    vec![(0, 1, s), (1, 2, s), (1, 2, s), (2, 3, s), (0, 3, s)],
                    vec![(0, s), (3, s)],
                ),
            ),
            (
                "bubble3".to_string(),
                Graph::new(
                    6,
                    vec![
                        (0, 1, s),
                        (1, 2, s),
                        (2, 3, s),
                        (2, 3, s),
                        (3, 4, s),
                        (1, 4, s),
                        (4, 5, s),
                        (0, 5, s),
                    ],
                    vec![(0, s), (5, s)],
                ),
            ),
        ],
        "phi4" => vec![
            (
                "bubble".to_string(),
                Graph::new(2, vec![(0, 1, s), (0, 1, s)], vec![(0, s), (0, s), (1, s), (1, s)]),
            ),
            (
                "sunset".to_string(),
                Graph::new(2, vec![(0, 1, s), (0, 1, s), (0, 1, s)], vec![(0, s), (1, s)]),
            ),
        ],
        "qed" => vec![
            (
                "photon-se".to_string(),
                Graph::new(2, vec![(0, 1, f), (0, 1, f)], vec![(0, p), (1, p)]),
            ),
            (
                "electron-se".to_string(),
                Graph::new(2, vec![(0, 1, f), (0, 1, p)], vec![(0, f), (1, f)]),
            ),
            (
                "vertex1".to_string(),
                Graph::new(
                    3,
                    vec![(0, 1, f), (1, 2, f), (0, 2, p)],
                    vec![(0, f), (2, f), (1, p)],
                ),
            ),
            (
                "rainbow2".to_string(),
                Graph::new(
                    4,
                    vec![(0, 1, f), (1, 2, f), (2, 3, f), (0, 3, p), (1, 2, p)],
                    vec![(0, f), (3, f)],
                ),
            ),
        ],
        other => return Err(Error::Parse(format!("unknown theory {other:?}"))),
    };
    Ok(out)
}

/// Instance over the shipped fixtures of a built-in theory.
pub fn instance_for(theory_name: &str) -> Result<FeynmanGraphs> {
    let theory = builtin_theory(theory_name)?;
    let seeds = fixtures(theory_name)?.into_iter().map(|(_, g)| g).collect();
    FeynmanGraphs::new(theory, seeds)
}

// ---------------------------------------------------------------------------
// Graph files: `theory: <name>`, `vertex <id>`, `edge <type> <id1> <id2>`,
// `ext <type> <id>`; `#` starts a comment.
// ---------------------------------------------------------------------------

pub fn parse_graph_file<F>(text: &str, lookup: F) -> Result<(Theory, Graph)>
where
    F: Fn(&str) -> Result<Theory>,
{
    let mut theory: Option<Theory> = None;
    let mut vertex_ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, usize, EdgeType)> = Vec::new();
    let mut exts: Vec<(usize, EdgeType)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {msg}", ln + 1));
        if let Some(name) = line.strip_prefix("theory:") {
            theory = Some(lookup(name.trim())?);
            continue;
        }
        let th = theory
            .as_ref()
            .ok_or_else(|| err("the theory: line must come first".into()))?;
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("vertex") => {
                let id = parts.next().ok_or_else(|| err("vertex needs an id".into()))?;
                if vertex_ids.contains_key(id) {
                    return Err(err(format!("duplicate vertex {id:?}")));
                }
                vertex_ids.insert(id.to_string(), order.len());
                order.push(id.to_string());
            }
            Some("edge") => {
                let t = parts.next().ok_or_else(|| err("edge needs a type".into()))?;
                let a = parts.next().ok_or_else(|| err("edge needs two endpoints".into()))?;
                let b = parts.next().ok_or_else(|| err("edge needs two endpoints".into()))?;
                let etype = th.edge_type_by_token(t)?;
                let va = *vertex_ids
                    .get(a)
                    .ok_or_else(|| err(format!("unknown vertex {a:?}")))?;
                let vb = *vertex_ids
                    .get(b)
                    .ok_or_else(|| err(format!("unknown vertex {b:?}")))?;
                edges.push((va, vb, etype));
            }
            Some("ext") => {
                let t = parts.next().ok_or_else(|| err("ext needs a type".into()))?;
                let v = parts.next().ok_or_else(|| err("ext needs a vertex".into()))?;
                let etype = th.edge_type_by_token(t)?;
                let vv = *vertex_ids
                    .get(v)
                    .ok_or_else(|| err(format!("unknown vertex {v:?}")))?;
                exts.push((vv, etype));
            }
            Some(other) => return Err(err(format!("unknown directive {other:?}"))),
            None => {}
        }
        if parts.next().is_some() {
            return Err(err("trailing tokens".into()));
        }
    }
    let theory = theory.ok_or_else(|| Error::Parse("missing theory: line".into()))?;
    let g = Graph::new(vertex_ids.len(), edges, exts);
    g.validate_against(&theory)?;
    Ok((theory, g))
}

/// Theory files: `name: <name>`, `edgetype <name>`,
/// `vertextype <name>:<count>[,<name>:<count>...]`.
pub fn parse_theory_file(text: &str) -> Result<Theory> {
    let mut name: Option<String> = None;
    let mut edge_names: BTreeMap<String, EdgeType> = BTreeMap::new();
    let mut vertex_types: BTreeSet<VertexType> = BTreeSet::new();
    let mut next_type: EdgeType = 1;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {msg}", ln + 1));
        if let Some(n) = line.strip_prefix("name:") {
            name = Some(n.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("edgetype") {
            let n = rest.trim();
            if n.is_empty() {
                return Err(err("edgetype needs a name".into()));
            }
            if edge_names.contains_key(n) {
                return Err(err(format!("duplicate edge type {n:?}")));
            }
            edge_names.insert(n.to_string(), next_type);
            next_type += 1;
        } else if let Some(rest) = line.strip_prefix("vertextype") {
            let mut v = VertexType::new();
            for piece in rest.trim().split(',') {
                let (n, c) = piece
                    .split_once(':')
                    .ok_or_else(|| err(format!("bad vertextype entry {piece:?}")))?;
                let t = *edge_names
                    .get(n.trim())
                    .ok_or_else(|| err(format!("unknown edge type {n:?}")))?;
                let count: u32 = c
                    .trim()
                    .parse()
                    .map_err(|e| err(format!("bad count in {piece:?}: {e}")))?;
                *v.entry(t).or_insert(0) += count;
            }
            if v.is_empty() {
                return Err(err("empty vertextype".into()));
            }
            vertex_types.insert(v);
        } else {
            return Err(err(format!("unknown directive {line:?}")));
        }
    }
    Ok(Theory {
        name: name.ok_or_else(|| Error::Parse("missing name: line".into()))?,
        edge_names,
        vertex_types,
    })
}
