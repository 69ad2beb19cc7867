//! The clique search tree.
//!
//! Every node carries a label `L`, the set of vertices that may still extend
//! the clique spelled out by the path from the root. Expanding a node picks
//! the vertex `v` of minimum degree in `G[L]` (smallest id on ties), adds a
//! child labelled `L ∩ N(v)`, removes `v` from `L`, and repeats until `L` is
//! empty. Nodes of the finished tree are in bijection with the cliques of
//! `G`, the root being the empty clique, and a node at depth `ℓ` stands for a
//! clique of size `ℓ`.
//!
//! The root level is exactly min-degree peeling of the whole graph, so each
//! child of the root has a label of size at most the degeneracy. Everything
//! below the root is therefore computed on small bitset graphs built from a
//! single root-child label, which keeps large sparse inputs cheap.

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeSeq, Serializer};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

/// Default cap on materialized tree size.
pub const DEFAULT_NODE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error(
        "clique search tree exceeds the node cap of {cap} (built {partial} nodes before stopping)"
    )]
    Capacity { cap: usize, partial: usize },
    #[error("node {0} does not exist in this tree")]
    InvalidNode(usize),
    #[error("subtree is not rooted: {0}")]
    NotRooted(String),
    #[error("graph has a clique of size {t}; the subtree bound needs a K_{t}-free graph")]
    CliqueOfSize { t: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueTreeNode {
    pub label: VertexSet,
    pub depth: usize,
    pub chosen_vertex: Option<u32>,
    pub parent: Option<NodeId>,
    /// In creation order, i.e. the order the vertices were chosen.
    pub children: Vec<NodeId>,
}

/// A fully materialized clique search tree. Node 0 is the root and every
/// node's id is larger than its parent's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSearchTree {
    nodes: Vec<CliqueTreeNode>,
}

/// Number of cliques of each size; `counts[ℓ]` counts cliques of size `ℓ`.
/// Trailing zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCensus {
    pub counts: Vec<BigUint>,
    pub total: BigUint,
}

impl CliqueCensus {
    fn from_counts(mut counts: Vec<BigUint>) -> Self {
        while counts.last().is_some_and(Zero::is_zero) {
            counts.pop();
        }
        let total = counts.iter().sum();
        CliqueCensus { counts, total }
    }

    /// Size of the largest clique.
    pub fn clique_number(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }
}

impl Serialize for CliqueCensus {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.counts.len()))?;
        for c in &self.counts {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

/// Adjacency restricted to one label, as bitsets over positions in the label.
/// Positions follow increasing global id, so min-degree tie-breaking by local
/// position equals tie-breaking by global id.
pub(crate) struct LocalGraph {
    map: Vec<u32>,
    rows: Vec<FixedBitSet>,
}

impl LocalGraph {
    pub(crate) fn new(g: &Graph, label: &VertexSet) -> Self {
        let (sub, map) = g
            .induced_subgraph(label)
            .expect("labels only hold vertices of the graph");
        let size = map.len();
        let rows = (0..size as u32)
            .map(|v| {
                let mut row = FixedBitSet::with_capacity(size);
                for &w in sub.neighbors(v) {
                    row.insert(w as usize);
                }
                row
            })
            .collect();
        LocalGraph { map, rows }
    }

    pub(crate) fn full(&self) -> FixedBitSet {
        let mut all = FixedBitSet::with_capacity(self.map.len());
        all.insert_range(..);
        all
    }

    pub(crate) fn global(&self, v: usize) -> u32 {
        self.map[v]
    }

    pub(crate) fn to_global(&self, set: &FixedBitSet) -> VertexSet {
        VertexSet::from_sorted(set.ones().map(|v| self.map[v]).collect())
    }

    fn degrees(&self, label: &FixedBitSet) -> Vec<usize> {
        let mut deg = vec![0; self.map.len()];
        for v in label.ones() {
            deg[v] = self.rows[v].intersection_count(label);
        }
        deg
    }

    /// Children of a node labelled `label`, as (chosen vertex, child label)
    /// in creation order.
    pub(crate) fn expand(&self, label: &FixedBitSet) -> Vec<(usize, FixedBitSet)> {
        self.expand_with(label, self.degrees(label))
    }

    fn expand_with(&self, label: &FixedBitSet, mut deg: Vec<usize>) -> Vec<(usize, FixedBitSet)> {
        let mut remaining = label.clone();
        let mut out = Vec::with_capacity(label.count_ones(..));
        while let Some(v) = remaining.ones().min_by_key(|&u| (deg[u], u)) {
            let mut child = self.rows[v].clone();
            child.intersect_with(&remaining);
            remaining.set(v, false);
            for u in child.ones() {
                deg[u] -= 1;
            }
            out.push((v, child));
        }
        out
    }
}

/// Children of the root: min-degree peeling of the whole graph, each child
/// labelled by the neighbors of its vertex that are still present.
pub fn root_children(g: &Graph) -> Vec<(u32, VertexSet)> {
    let order = g.degeneracy().ordering;
    let mut position = vec![0usize; g.n()];
    for (i, &v) in order.iter().enumerate() {
        position[v as usize] = i;
    }
    order
        .iter()
        .map(|&v| {
            let later = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| position[w as usize] > position[v as usize])
                .collect::<Vec<_>>();
            (v, VertexSet::from_sorted(later))
        })
        .collect()
}

/// Per-depth counters that spill into big integers on overflow.
#[derive(Default)]
struct CensusAcc {
    fast: Vec<u128>,
    big: Vec<BigUint>,
}

impl CensusAcc {
    fn add(&mut self, depth: usize, amount: u128) {
        if self.fast.len() <= depth {
            self.fast.resize(depth + 1, 0);
            self.big.resize(depth + 1, BigUint::zero());
        }
        match self.fast[depth].checked_add(amount) {
            Some(sum) => self.fast[depth] = sum,
            None => {
                self.big[depth] += self.fast[depth];
                self.fast[depth] = amount;
            }
        }
    }

    fn add_big(&mut self, depth: usize, amount: BigUint) {
        self.add(depth, 0);
        self.big[depth] += amount;
    }

    fn merge(mut self, other: CensusAcc) -> CensusAcc {
        let len = self.fast.len().max(other.fast.len());
        self.add(len.saturating_sub(1), 0);
        for (d, (f, b)) in other.fast.into_iter().zip(other.big).enumerate() {
            self.add(d, f);
            self.big[d] += b;
        }
        self
    }

    fn finish(self) -> Vec<BigUint> {
        self.fast
            .into_iter()
            .zip(self.big)
            .map(|(f, b)| b + f)
            .collect()
    }
}

/// Adds the census of a `size`-clique's subtree rooted at `depth`: a node
/// whose label induces a complete graph has `C(size, j)` descendants at
/// relative depth `j`.
fn add_complete_label(acc: &mut CensusAcc, depth: usize, size: usize) {
    if size <= 125 {
        let mut c: u128 = 1;
        for j in 0..=size {
            acc.add(depth + j, c);
            c = c * (size - j) as u128 / (j + 1) as u128;
        }
    } else {
        let mut c = BigUint::from(1u32);
        for j in 0..=size {
            acc.add_big(depth + j, c.clone());
            c = c * (size - j) / (j + 1);
        }
    }
}

/// Census of the subtree hanging off one child of the root.
fn census_of_root_child(g: &Graph, label: &VertexSet) -> CensusAcc {
    let mut acc = CensusAcc::default();
    let local = LocalGraph::new(g, label);
    let mut stack = vec![(local.full(), 1usize)];
    while let Some((label, depth)) = stack.pop() {
        let size = label.count_ones(..);
        if size <= 1 {
            add_complete_label(&mut acc, depth, size);
            continue;
        }
        let deg = local.degrees(&label);
        let degree_sum: usize = label.ones().map(|v| deg[v]).sum();
        if degree_sum == size * (size - 1) {
            add_complete_label(&mut acc, depth, size);
            continue;
        }
        acc.add(depth, 1);
        for (_, child) in local.expand_with(&label, deg) {
            stack.push((child, depth + 1));
        }
    }
    acc
}

/// Number of cliques of each size, computed by streaming the tree without
/// materializing it. Subtrees of the root's children are independent and are
/// processed on the rayon thread pool.
pub fn census(g: &Graph) -> CliqueCensus {
    let children = root_children(g);
    let mut root = CensusAcc::default();
    root.add(0, 1);
    let acc = children
        .par_iter()
        .map(|(_, label)| census_of_root_child(g, label))
        .reduce(CensusAcc::default, CensusAcc::merge);
    CliqueCensus::from_counts(root.merge(acc).finish())
}

/// Total number of cliques, the empty clique included.
pub fn count_cliques(g: &Graph) -> BigUint {
    census(g).total
}

/// Materializes the clique search tree, failing once more than `node_cap`
/// nodes would be needed.
pub fn build_tree(g: &Graph, node_cap: usize) -> Result<CliqueSearchTree, TreeError> {
    let mut nodes = Vec::new();
    let push = |nodes: &mut Vec<CliqueTreeNode>, node: CliqueTreeNode| {
        if nodes.len() >= node_cap {
            return Err(TreeError::Capacity {
                cap: node_cap,
                partial: nodes.len(),
            });
        }
        let id = NodeId(nodes.len());
        if let Some(p) = node.parent {
            nodes[p.0].children.push(id);
        }
        nodes.push(node);
        Ok(id)
    };
    push(
        &mut nodes,
        CliqueTreeNode {
            label: VertexSet::range(g.n()),
            depth: 0,
            chosen_vertex: None,
            parent: None,
            children: Vec::new(),
        },
    )?;
    let children = root_children(g);
    let mut first_level = Vec::with_capacity(children.len());
    for (v, label) in &children {
        first_level.push(push(
            &mut nodes,
            CliqueTreeNode {
                label: label.clone(),
                depth: 1,
                chosen_vertex: Some(*v),
                parent: Some(NodeId::ROOT),
                children: Vec::new(),
            },
        )?);
    }
    for (id, (_, label)) in first_level.into_iter().zip(&children) {
        let local = LocalGraph::new(g, label);
        let mut stack = vec![(id, local.full())];
        while let Some((parent, label)) = stack.pop() {
            let depth = nodes[parent.0].depth + 1;
            for (v, child) in local.expand(&label) {
                let child_id = push(
                    &mut nodes,
                    CliqueTreeNode {
                        label: local.to_global(&child),
                        depth,
                        chosen_vertex: Some(local.global(v)),
                        parent: Some(parent),
                        children: Vec::new(),
                    },
                )?;
                stack.push((child_id, child));
            }
        }
    }
    Ok(CliqueSearchTree { nodes })
}

impl CliqueSearchTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> &CliqueTreeNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: NodeId) -> Result<&CliqueTreeNode, TreeError> {
        self.nodes.get(id.0).ok_or(TreeError::InvalidNode(id.0))
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &CliqueTreeNode)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    pub fn nodes_slice(&self) -> &[CliqueTreeNode] {
        &self.nodes
    }

    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Number of nodes at each depth.
    pub fn census(&self) -> CliqueCensus {
        let mut counts = vec![BigUint::zero(); self.height() + 1];
        for node in &self.nodes {
            counts[node.depth] += 1u32;
        }
        CliqueCensus::from_counts(counts)
    }

    /// The clique a node stands for: the chosen vertices on its root path.
    pub fn clique_of(&self, id: NodeId) -> Result<VertexSet, TreeError> {
        let mut cur = Some(self.node(id)?);
        let mut out = Vec::new();
        while let Some(node) = cur {
            out.extend(node.chosen_vertex);
            cur = node.parent.map(|p| &self.nodes[p.0]);
        }
        Ok(out.into_iter().collect())
    }

    /// Size of the subtree under every node, the node itself included.
    pub fn subtree_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![1u64; self.nodes.len()];
        for i in (1..self.nodes.len()).rev() {
            let parent = self.nodes[i].parent.expect("non-root nodes have parents").0;
            sizes[parent] += sizes[i];
        }
        sizes
    }

    /// The subtree induced on `a` and its descendants, re-rooted at `a`.
    /// Labels keep their original vertex ids.
    pub fn subtree_at(&self, a: NodeId) -> Result<CliqueSearchTree, TreeError> {
        let base = self.node(a)?.depth;
        let mut nodes = Vec::new();
        let mut queue = std::collections::VecDeque::from([(a, None::<NodeId>)]);
        while let Some((old, new_parent)) = queue.pop_front() {
            let src = &self.nodes[old.0];
            let id = NodeId(nodes.len());
            if let Some(p) = new_parent {
                let parent: &mut CliqueTreeNode = &mut nodes[p.0];
                parent.children.push(id);
            }
            nodes.push(CliqueTreeNode {
                label: src.label.clone(),
                depth: src.depth - base,
                chosen_vertex: new_parent.and(src.chosen_vertex),
                parent: new_parent,
                children: Vec::new(),
            });
            queue.extend(src.children.iter().map(|&c| (c, Some(id))));
        }
        Ok(CliqueSearchTree { nodes })
    }

    /// True when `other`, after renaming its vertices through `id_map`
    /// (`other`'s id `i` becomes `id_map[i]`), is node-for-node identical to
    /// `self`: same labels, same chosen vertices, same child order.
    pub fn matches_under(&self, other: &CliqueSearchTree, id_map: &[u32]) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let rename = |set: &VertexSet| -> Option<VertexSet> {
            set.iter()
                .map(|v| id_map.get(v as usize).copied())
                .collect::<Option<Vec<u32>>>()
                .map(VertexSet::from)
        };
        let mut stack = vec![(NodeId::ROOT, NodeId::ROOT)];
        while let Some((a, b)) = stack.pop() {
            let (x, y) = (&self.nodes[a.0], &other.nodes[b.0]);
            if rename(&y.label).as_ref() != Some(&x.label) || x.children.len() != y.children.len() {
                return false;
            }
            if a != NodeId::ROOT {
                let mapped = y
                    .chosen_vertex
                    .and_then(|v| id_map.get(v as usize).copied());
                if mapped != x.chosen_vertex {
                    return false;
                }
            }
            stack.extend(x.children.iter().copied().zip(y.children.iter().copied()));
        }
        true
    }
}

/// A set of tree nodes containing the root and closed under taking parents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedSubtree {
    members: FixedBitSet,
    size: usize,
}

impl RootedSubtree {
    pub fn from_nodes<I>(tree: &CliqueSearchTree, nodes: I) -> Result<Self, TreeError>
    where
        I: IntoIterator<Item = NodeId>,
    {
        let mut members = FixedBitSet::with_capacity(tree.len());
        for id in nodes {
            tree.node(id)?;
            members.insert(id.0);
        }
        if !members.contains(0) {
            return Err(TreeError::NotRooted("root node missing".into()));
        }
        for i in members.ones() {
            if let Some(p) = tree.nodes[i].parent {
                if !members.contains(p.0) {
                    return Err(TreeError::NotRooted(format!(
                        "node {i} is present but its parent {} is not",
                        p.0
                    )));
                }
            }
        }
        let size = members.count_ones(..);
        Ok(RootedSubtree { members, size })
    }

    /// Builds a subtree by keeping the children that `keep` accepts, starting
    /// from the root and never descending below a rejected node.
    pub fn grow<F>(tree: &CliqueSearchTree, mut keep: F) -> Self
    where
        F: FnMut(&CliqueTreeNode, &CliqueTreeNode) -> bool,
    {
        let mut members = FixedBitSet::with_capacity(tree.len());
        members.insert(0);
        let mut stack = vec![NodeId::ROOT];
        while let Some(a) = stack.pop() {
            let parent = &tree.nodes[a.0];
            for &c in &parent.children {
                if keep(parent, &tree.nodes[c.0]) {
                    members.insert(c.0);
                    stack.push(c);
                }
            }
        }
        let size = members.count_ones(..);
        RootedSubtree { members, size }
    }

    pub fn root_only(tree: &CliqueSearchTree) -> Self {
        Self::grow(tree, |_, _| false)
    }

    pub fn whole(tree: &CliqueSearchTree) -> Self {
        Self::grow(tree, |_, _| true)
    }

    /// All nodes at depth at most `max_depth`.
    pub fn truncated(tree: &CliqueSearchTree, max_depth: usize) -> Self {
        Self::grow(tree, |_, child| child.depth <= max_depth)
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.members.contains(id.0)
    }

    pub fn members(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.members.ones().map(NodeId)
    }

    /// Height of the subtree (depth of its deepest member).
    pub fn height(&self, tree: &CliqueSearchTree) -> usize {
        self.members()
            .map(|id| tree.nodes[id.0].depth)
            .max()
            .unwrap_or(0)
    }

    /// Members adjacent in the full tree to a non-member. Since the subtree
    /// is closed under parents, these are the members with a child outside.
    pub fn boundary(&self, tree: &CliqueSearchTree) -> Vec<NodeId> {
        self.members()
            .filter(|id| {
                tree.nodes[id.0]
                    .children
                    .iter()
                    .any(|c| !self.members.contains(c.0))
            })
            .collect()
    }

    fn belongs_to(&self, tree: &CliqueSearchTree) -> bool {
        self.members.len() == tree.len()
    }
}

/// Both sides of `|V(T)| ≤ |V(T')| · Σ_{i<t} C(m, i) ≤ |V(T')| · 2^m`, where
/// `m` is the largest boundary label of `T'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeBound {
    pub tree_size: BigUint,
    pub subtree_size: BigUint,
    pub max_boundary_label: usize,
    pub rhs: BigUint,
    pub rhs_power: BigUint,
    pub holds: bool,
}

pub fn subtree_bound_check(
    tree: &CliqueSearchTree,
    t: usize,
    sub: &RootedSubtree,
) -> Result<SubtreeBound, TreeError> {
    if !sub.belongs_to(tree) {
        return Err(TreeError::NotRooted(
            "subtree was built for a different tree".into(),
        ));
    }
    if tree.height() >= t {
        return Err(TreeError::CliqueOfSize { t });
    }
    let m = sub
        .boundary(tree)
        .iter()
        .map(|id| tree.nodes[id.0].label.len())
        .max()
        .unwrap_or(0);
    let subtree_size = BigUint::from(sub.len());
    let rhs = &subtree_size * crate::numeric::binomial_prefix_sum(m as u64, t as u64 - 1);
    let rhs_power = &subtree_size << m;
    let tree_size = BigUint::from(tree.len());
    let holds = tree_size <= rhs && rhs <= rhs_power;
    Ok(SubtreeBound {
        tree_size,
        subtree_size,
        max_boundary_label: m,
        rhs,
        rhs_power,
        holds,
    })
}

/// Depth-first, pre-order stream of all cliques (the empty clique first),
/// each as an ascending vertex set. Children are visited in creation order.
pub fn enumerate_cliques(g: &Graph) -> CliqueIter<'_> {
    CliqueIter {
        graph: g,
        emitted_root: false,
        roots: root_children(g).into_iter(),
        local: None,
        stack: Vec::new(),
    }
}

pub struct CliqueIter<'g> {
    graph: &'g Graph,
    emitted_root: bool,
    roots: std::vec::IntoIter<(u32, VertexSet)>,
    local: Option<LocalGraph>,
    stack: Vec<(Vec<u32>, FixedBitSet)>,
}

impl Iterator for CliqueIter<'_> {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        if !self.emitted_root {
            self.emitted_root = true;
            return Some(VertexSet::new());
        }
        loop {
            if let Some((clique, label)) = self.stack.pop() {
                let local = self
                    .local
                    .as_ref()
                    .expect("stack entries belong to a local graph");
                let children = local.expand(&label);
                for (v, child) in children.into_iter().rev() {
                    let mut next = clique.clone();
                    next.push(local.global(v));
                    self.stack.push((next, child));
                }
                return Some(clique.into_iter().collect());
            }
            let (v, label) = self.roots.next()?;
            let local = LocalGraph::new(self.graph, &label);
            self.stack.push((vec![v], local.full()));
            self.local = Some(local);
        }
    }
}
