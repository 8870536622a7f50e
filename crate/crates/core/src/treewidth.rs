//! Tree decompositions: construction (min-fill, exact subset DP), validation,
//! conversion to nice form, and a plain-text dump format.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Graph;

pub const DEFAULT_EXACT_LIMIT: usize = 16;
/// Subset tables are indexed by `u32` masks.
const EXACT_HARD_LIMIT: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("graph has {vertices} vertices, exact treewidth limited to {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("bags and tree edges do not form a tree")]
    NotATree,
    #[error("vertex {0} is in no bag")]
    UncoveredVertex(usize),
    #[error("edge ({0}, {1}) is in no bag")]
    UncoveredEdge(usize, usize),
    #[error("bags containing vertex {0} are not connected")]
    Disconnected(usize),
    #[error("bag refers to vertex {0} outside the graph")]
    UnknownVertex(usize),
    #[error("malformed decomposition dump at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Each bag sorted ascending.
    pub bags: Vec<Vec<usize>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, tree_edges }
    }

    /// One bag holding every vertex.
    pub fn trivial(vertex_count: usize) -> Self {
        TreeDecomposition::new(vec![(0..vertex_count).collect()], vec![])
    }

    /// Largest bag size minus one (0 for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn bag_count(&self) -> usize {
        self.bags.len()
    }

    pub fn is_path(&self) -> bool {
        let mut deg = vec![0; self.bags.len()];
        for &(a, b) in &self.tree_edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.iter().all(|&d| d <= 2)
    }

    fn tree_adjacency(&self) -> Result<Vec<Vec<usize>>, DecompositionError> {
        let b = self.bags.len();
        if b == 0 || self.tree_edges.len() != b - 1 {
            return Err(DecompositionError::NotATree);
        }
        let mut adj = vec![Vec::new(); b];
        for &(x, y) in &self.tree_edges {
            if x >= b || y >= b || x == y {
                return Err(DecompositionError::NotATree);
            }
            adj[x].push(y);
            adj[y].push(x);
        }
        let mut seen = vec![false; b];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut reached = 1;
        while let Some(t) = queue.pop_front() {
            for &s in &adj[t] {
                if !seen[s] {
                    seen[s] = true;
                    reached += 1;
                    queue.push_back(s);
                }
            }
        }
        if reached != b {
            return Err(DecompositionError::NotATree);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(adj)
    }

    /// Tree shape plus the running-intersection property; needs no graph.
    fn check_shape(&self) -> Result<Vec<Vec<usize>>, DecompositionError> {
        let adj = self.tree_adjacency()?;
        let vertices: BTreeSet<usize> = self.bags.iter().flatten().copied().collect();
        for &v in &vertices {
            let holders: Vec<usize> = (0..self.bags.len())
                .filter(|&t| self.bags[t].binary_search(&v).is_ok())
                .collect();
            let sub = Graph::from_edges(
                self.bags.len(),
                self.tree_edges
                    .iter()
                    .copied()
                    .filter(|&(a, b)| {
                        self.bags[a].binary_search(&v).is_ok()
                            && self.bags[b].binary_search(&v).is_ok()
                    }),
            );
            if !sub.is_connected_subset(&holders) {
                return Err(DecompositionError::Disconnected(v));
            }
        }
        Ok(adj)
    }

    pub fn check(&self, g: &Graph) -> Result<(), DecompositionError> {
        for &v in self.bags.iter().flatten() {
            if v >= g.vertex_count() {
                return Err(DecompositionError::UnknownVertex(v));
            }
        }
        self.check_shape()?;
        let mut covered = vec![false; g.vertex_count()];
        for &v in self.bags.iter().flatten() {
            covered[v] = true;
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(DecompositionError::UncoveredVertex(v));
        }
        for (u, v) in g.edges() {
            let ok = self
                .bags
                .iter()
                .any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok());
            if !ok {
                return Err(DecompositionError::UncoveredEdge(u, v));
            }
        }
        Ok(())
    }

    /// Dump format: a header `bags edges`, one tree edge `i j` per line
    /// (0-based bag indices), then one bag per line as space-separated vertices.
    pub fn to_dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.bags.len(), self.tree_edges.len()).unwrap();
        for (a, b) in &self.tree_edges {
            writeln!(out, "{a} {b}").unwrap();
        }
        for bag in &self.bags {
            let line: Vec<String> = bag.iter().map(usize::to_string).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Self, DecompositionError> {
        let err = |line: usize, reason: &str| DecompositionError::Parse {
            line,
            reason: reason.to_string(),
        };
        let lines: Vec<&str> = text.lines().collect();
        let nums = |i: usize| -> Result<Vec<usize>, DecompositionError> {
            lines
                .get(i)
                .ok_or_else(|| err(i + 1, "unexpected end of input"))?
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| err(i + 1, "expected integers")))
                .collect()
        };
        let header = nums(0)?;
        let [bags, edges] = header[..] else {
            return Err(err(1, "header must be `bags edges`"));
        };
        let mut tree_edges = Vec::with_capacity(edges);
        for i in 0..edges {
            let e = nums(1 + i)?;
            let [a, b] = e[..] else {
                return Err(err(2 + i, "tree edge must be `i j`"));
            };
            tree_edges.push((a, b));
        }
        let bags = (0..bags)
            .map(|i| nums(1 + edges + i))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TreeDecomposition::new(bags, tree_edges))
    }
}

pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> bool {
    td.check(g).is_ok()
}

/// Decomposition induced by eliminating vertices in `order`.
pub fn decomposition_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.vertex_count();
    assert_eq!(order.len(), n, "order must list every vertex once");
    if n == 0 {
        return TreeDecomposition::new(vec![vec![]], vec![]);
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent: Vec<Option<usize>> = Vec::with_capacity(n);
    for &v in order {
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
            adj[a].remove(&v);
        }
        parent.push(nbrs.iter().map(|&u| pos[u]).min());
        let mut bag = nbrs;
        bag.push(v);
        bags.push(bag);
    }
    let mut tree_edges = Vec::with_capacity(n - 1);
    let mut roots = Vec::new();
    for (i, p) in parent.iter().enumerate() {
        match p {
            Some(p) => tree_edges.push((i, *p)),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        tree_edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(bags, tree_edges)
}

/// Greedy min-fill elimination ordering; ties go to the lowest vertex.
pub fn min_fill_order(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(usize, usize)> = None;
        for v in (0..n).filter(|&v| alive[v]) {
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for (i, &a) in nbrs.iter().enumerate() {
                fill += nbrs[i + 1..].iter().filter(|&&b| !adj[a].contains(&b)).count();
            }
            if best.is_none_or(|(f, _)| fill < f) {
                best = Some((fill, v));
            }
        }
        let (_, v) = best.unwrap();
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
            adj[a].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

pub fn min_fill_decomposition(g: &Graph) -> TreeDecomposition {
    decomposition_from_order(g, &min_fill_order(g))
}

/// Minimum-width decomposition by dynamic programming over vertex subsets.
pub fn exact_treewidth(g: &Graph, vertex_limit: usize) -> Result<TreeDecomposition, DecompositionError> {
    let n = g.vertex_count();
    let limit = vertex_limit.min(EXACT_HARD_LIMIT);
    if n > limit {
        return Err(DecompositionError::TooLarge { vertices: n, limit });
    }
    let order = exact_elimination_order(g);
    Ok(decomposition_from_order(g, &order))
}

/// `tw[S]` = best achievable max-degree when the vertices of `S` are eliminated
/// first; the last vertex of `S` has degree |Q(S \ v, v)|, the set of outside
/// vertices reachable from `v` through `S \ v`.
fn exact_elimination_order(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    if n == 0 {
        return vec![];
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let size = 1usize << n;
    let mut tw = vec![u8::MAX; size];
    let mut last = vec![u8::MAX; size];
    tw[0] = 0;
    // Upper bound from the heuristic prunes most subsets.
    let ub = min_fill_decomposition(g).width() as u8;
    for s in 1..size as u32 {
        let mut best = u8::MAX;
        let mut best_v = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            let base = tw[prev as usize];
            if base >= best || base > ub {
                continue;
            }
            let mut comp = 1u32 << v;
            loop {
                let mut reach = 0u32;
                let mut c = comp;
                while c != 0 {
                    let u = c.trailing_zeros() as usize;
                    c &= c - 1;
                    reach |= nbr[u];
                }
                let grow = reach & prev & !comp;
                if grow == 0 {
                    let q = (reach & !s & full).count_ones() as u8;
                    let cand = base.max(q);
                    if cand < best {
                        best = cand;
                        best_v = v as u8;
                    }
                    break;
                }
                comp |= grow;
            }
        }
        tw[s as usize] = best;
        last[s as usize] = best_v;
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s as usize];
        debug_assert!(v != u8::MAX);
        order.push(v as usize);
        s &= !(1 << v);
    }
    order.reverse();
    order
}

/// Exact treewidth value (convenience for tests and reports).
pub fn treewidth(g: &Graph, vertex_limit: usize) -> Result<usize, DecompositionError> {
    exact_treewidth(g, vertex_limit).map(|td| td.width())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    /// Sorted.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Rooted decomposition with empty leaves and root; each node introduces or
/// forgets one vertex, or joins two children with identical bags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Node ids with every child before its parent.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                out.push(t);
            } else {
                stack.push((t, true));
                for &c in self.nodes[t].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(t, n)| n.children.iter().map(move |&c| (t, c)))
            .collect();
        TreeDecomposition::new(bags, edges)
    }

    /// Checks the local nice-node rules.
    pub fn check_structure(&self) -> bool {
        let root_ok = self.nodes[self.root].bag.is_empty();
        root_ok
            && self.nodes.iter().all(|node| {
                let child_bag = |i: usize| &self.nodes[node.children[i]].bag;
                match node.kind {
                    NiceKind::Leaf => node.children.is_empty() && node.bag.is_empty(),
                    NiceKind::Introduce(v) => {
                        node.children.len() == 1 && {
                            let mut b = child_bag(0).clone();
                            !b.contains(&v) && {
                                b.push(v);
                                b.sort_unstable();
                                b == node.bag
                            }
                        }
                    }
                    NiceKind::Forget(v) => {
                        node.children.len() == 1 && {
                            let mut b = node.bag.clone();
                            !b.contains(&v) && {
                                b.push(v);
                                b.sort_unstable();
                                &b == child_bag(0)
                            }
                        }
                    }
                    NiceKind::Join => {
                        node.children.len() == 2
                            && child_bag(0) == &node.bag
                            && child_bag(1) == &node.bag
                    }
                }
            })
    }
}

struct NiceBuilder<'a> {
    td: &'a TreeDecomposition,
    adj: Vec<Vec<usize>>,
    nodes: Vec<NiceNode>,
}

impl NiceBuilder<'_> {
    fn push(&mut self, kind: NiceKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }

    /// Walks from `node` (with bag `from`) to a node whose bag is `to`.
    fn morph(&mut self, mut node: usize, from: &[usize], to: &[usize]) -> usize {
        let mut bag = from.to_vec();
        for &v in from.iter().filter(|v| to.binary_search(v).is_err()) {
            bag.retain(|&u| u != v);
            node = self.push(NiceKind::Forget(v), bag.clone(), vec![node]);
        }
        for &v in to.iter().filter(|v| from.binary_search(v).is_err()) {
            let pos = bag.binary_search(&v).unwrap_err();
            bag.insert(pos, v);
            node = self.push(NiceKind::Introduce(v), bag.clone(), vec![node]);
        }
        node
    }

    fn build(&mut self, root: usize) -> usize {
        // Iterative postorder over the tree decomposition.
        let mut order = Vec::new();
        let mut parent = vec![usize::MAX; self.td.bags.len()];
        let mut stack = vec![root];
        parent[root] = root;
        while let Some(t) = stack.pop() {
            order.push(t);
            for &s in &self.adj[t] {
                if parent[s] == usize::MAX {
                    parent[s] = t;
                    stack.push(s);
                }
            }
        }
        let mut top = vec![usize::MAX; self.td.bags.len()];
        for &t in order.iter().rev() {
            let bag = self.td.bags[t].clone();
            let children: Vec<usize> = self.adj[t]
                .iter()
                .copied()
                .filter(|&s| parent[s] == t && s != t)
                .collect();
            let mut subs = Vec::new();
            if children.is_empty() {
                let leaf = self.push(NiceKind::Leaf, vec![], vec![]);
                subs.push(self.morph(leaf, &[], &bag));
            } else {
                for c in children {
                    let cbag = self.td.bags[c].clone();
                    subs.push(self.morph(top[c], &cbag, &bag));
                }
            }
            let mut acc = subs[0];
            for &s in &subs[1..] {
                acc = self.push(NiceKind::Join, bag.clone(), vec![acc, s]);
            }
            top[t] = acc;
        }
        let rbag = self.td.bags[root].clone();
        self.morph(top[root], &rbag, &[])
    }
}

/// Converts a valid decomposition into nice form of the same width.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceDecomposition, DecompositionError> {
    let adj = td.check_shape()?;
    let mut b = NiceBuilder {
        td,
        adj,
        nodes: Vec::new(),
    };
    let root = b.build(0);
    Ok(NiceDecomposition {
        nodes: b.nodes,
        root,
    })
}
