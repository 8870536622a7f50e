//! Plain undirected simple graphs on vertices `0..n`.

use std::collections::VecDeque;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(vertex_count: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); vertex_count],
        }
    }

    /// Builds a graph from an edge list. Loops are dropped and parallel edges collapse.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(vertex_count);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(vertex_count: usize) -> Self {
        let mut g = Graph::new(vertex_count);
        for u in 0..vertex_count {
            for v in u + 1..vertex_count {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(vertex_count: usize) -> Self {
        Graph::from_edges(vertex_count, (1..vertex_count).map(|v| (v - 1, v)))
    }

    pub fn cycle(vertex_count: usize) -> Self {
        let mut g = Graph::path(vertex_count);
        if vertex_count >= 3 {
            g.add_edge(vertex_count - 1, 0);
        }
        g
    }

    /// Returns `true` if the edge was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u < self.adj.len() && v < self.adj.len(), "vertex out of range");
        if u == v {
            return false;
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                true
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        match self.adj[u].binary_search(&v) {
            Ok(pos) => {
                self.adj[u].remove(pos);
                let pos = self.adj[v].binary_search(&u).unwrap();
                self.adj[v].remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|n| n.binary_search(&v).is_ok())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Whether `vertices` induces a connected subgraph. The empty set is not connected.
    pub fn is_connected_subset(&self, vertices: &[usize]) -> bool {
        let Some(&start) = vertices.first() else {
            return false;
        };
        let mut inside = vec![false; self.vertex_count()];
        for &v in vertices {
            inside[v] = true;
        }
        let mut seen = vec![false; self.vertex_count()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        let distinct = {
            let mut vs = vertices.to_vec();
            vs.sort_unstable();
            vs.dedup();
            vs.len()
        };
        reached == distinct
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.vertex_count()).collect();
        all.is_empty() || self.is_connected_subset(&all)
    }
}
