//! Permutations, their point sets, neighbor operators and incidence graphs.
//!
//! Everything here is 1-based: a permutation of length `n` is stored as the
//! sequence `σ(1), …, σ(n)` and its points are `(i, σ(i))`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("empty permutation")]
    Empty,
    #[error("token {position}: `{token}` is not a positive integer")]
    InvalidToken { position: usize, token: String },
    #[error("token {position}: duplicate value {value}")]
    Duplicate { position: usize, value: usize },
    #[error("token {position}: value {value} outside 1..={n}")]
    OutOfRange {
        position: usize,
        value: usize,
        n: usize,
    },
    #[error("({x}, {y}) is not a point of the permutation")]
    NotAPoint { x: usize, y: usize },
    #[error("embedding is not injective at ({x}, {y})")]
    NotInjective { x: usize, y: usize },
}

/// A bijection on `{1..n}`, `n ≥ 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self, PermError> {
        if values.is_empty() {
            return Err(PermError::Empty);
        }
        let n = values.len();
        let mut inverse = vec![0; n];
        for (i, &v) in values.iter().enumerate() {
            if v == 0 || v > n {
                return Err(PermError::OutOfRange {
                    position: i + 1,
                    value: v,
                    n,
                });
            }
            if inverse[v - 1] != 0 {
                return Err(PermError::Duplicate {
                    position: i + 1,
                    value: v,
                });
            }
            inverse[v - 1] = i + 1;
        }
        Ok(Permutation { values, inverse })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutations have length at least 1");
        let values: Vec<usize> = (1..=n).collect();
        Permutation {
            inverse: values.clone(),
            values,
        }
    }

    /// Uniformly random permutation of length `n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut values: Vec<usize> = (1..=n).collect();
        values.shuffle(rng);
        Permutation::new(values).expect("shuffled identity")
    }

    /// Every permutation of length `n`, in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: (n >= 1).then(|| (1..=n).collect()),
        }
    }

    /// The permutation order-isomorphic to `keys` (rank compression).
    ///
    /// Panics on empty input or repeated keys.
    pub fn from_order<T: Ord>(keys: &[T]) -> Self {
        assert!(!keys.is_empty(), "cannot standardize an empty sequence");
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let mut values = vec![0; keys.len()];
        for (rank, &pos) in order.iter().enumerate() {
            if rank > 0 {
                assert!(keys[order[rank - 1]] != keys[pos], "keys must be distinct");
            }
            values[pos] = rank + 1;
        }
        Permutation::new(values).expect("ranks form a permutation")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `σ(i)` for `i ∈ 1..=n`.
    pub fn value(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    /// `σ⁻¹(v)` for `v ∈ 1..=n`.
    pub fn position(&self, v: usize) -> usize {
        self.inverse[v - 1]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn point(&self, i: usize) -> Point {
        Point::new(i, self.value(i))
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| Point::new(i + 1, v))
    }

    pub fn contains_point(&self, p: Point) -> bool {
        p.x >= 1 && p.x <= self.len() && self.value(p.x) == p.y
    }

    pub fn reverse(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Permutation::new(values).unwrap()
    }

    pub fn complement(&self) -> Self {
        let n = self.len();
        Permutation::new(self.values.iter().map(|&v| n + 1 - v).collect()).unwrap()
    }

    pub fn inverse(&self) -> Self {
        Permutation {
            values: self.inverse.clone(),
            inverse: self.values.clone(),
        }
    }

    pub fn symmetry(&self, op: Symmetry) -> Self {
        match op {
            Symmetry::Reverse => self.reverse(),
            Symmetry::Complement => self.complement(),
            Symmetry::Inverse => self.inverse(),
        }
    }

    /// Composition `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "length mismatch");
        Permutation::new(other.values.iter().map(|&j| self.value(j)).collect()).unwrap()
    }

    /// The pattern formed by the entries at the given (increasing) indices.
    pub fn subsequence_pattern(&self, indices: &[usize]) -> Self {
        let vals: Vec<usize> = indices.iter().map(|&i| self.value(i)).collect();
        Permutation::from_order(&vals)
    }

    /// Neighbor of the point at index `x` in direction `dir`; virtual points at the boundary.
    fn neighbor_of_index(&self, x: usize, dir: Direction) -> Point {
        let n = self.len();
        let y = self.value(x);
        match dir {
            Direction::Right if x < n => self.point(x + 1),
            Direction::Left if x > 1 => self.point(x - 1),
            Direction::Up if y < n => self.point(self.position(y + 1)),
            Direction::Down if y > 1 => self.point(self.position(y - 1)),
            Direction::Right | Direction::Up => Point::INFINITY,
            Direction::Left | Direction::Down => Point::ORIGIN,
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// Iterator returned by [`Permutation::all`].
pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if let Some(i) = (1..succ.len()).rev().find(|&i| succ[i - 1] < succ[i]) {
            let j = (i..succ.len()).rev().find(|&j| succ[j] > succ[i - 1]).unwrap();
            succ.swap(i - 1, j);
            succ[i..].reverse();
            self.next = Some(succ);
        }
        Some(Permutation::new(cur).expect("lexicographic successor"))
    }
}

/// One-line notation, single spaces.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_permutation(s)
    }
}

/// Parses whitespace- or comma-separated 1-based values.
pub fn parse_permutation(text: &str) -> Result<Permutation, PermError> {
    let mut values = Vec::new();
    for (i, token) in text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .enumerate()
    {
        let v: usize = token.parse().map_err(|_| PermError::InvalidToken {
            position: i + 1,
            token: token.to_string(),
        })?;
        values.push(v);
    }
    Permutation::new(values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Reverse,
    Complement,
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Right,
    Left,
    Up,
    Down,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Right,
        Direction::Left,
        Direction::Up,
        Direction::Down,
    ];

    pub fn opposite(self) -> Self {
        match self {
            Direction::Right => Direction::Left,
            Direction::Left => Direction::Right,
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Direction::Right | Direction::Left)
    }
}

/// A point `(index, value)`. The two virtual points `(0,0)` and `(∞,∞)` stand in
/// for neighbors that fall off the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: usize,
    pub y: usize,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0, y: 0 };
    pub const INFINITY: Point = Point {
        x: usize::MAX,
        y: usize::MAX,
    };

    pub const fn new(x: usize, y: usize) -> Self {
        Point { x, y }
    }

    pub fn is_virtual(self) -> bool {
        self == Point::ORIGIN || self == Point::INFINITY
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Point::INFINITY => f.write_str("(∞,∞)"),
            Point { x, y } => write!(f, "({x},{y})"),
        }
    }
}

pub fn neighbor(sigma: &Permutation, p: Point, dir: Direction) -> Result<Point, PermError> {
    if !sigma.contains_point(p) {
        return Err(PermError::NotAPoint { x: p.x, y: p.y });
    }
    Ok(sigma.neighbor_of_index(p.x, dir))
}

/// The incidence graph: the union of the index path and the value path.
///
/// Vertex `v` of [`IncidenceGraph::graph`] is the point with index `v + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGraph {
    perm: Permutation,
    graph: Graph,
}

impl IncidenceGraph {
    pub fn new(sigma: &Permutation) -> Self {
        let n = sigma.len();
        let mut graph = Graph::new(n);
        for x in 1..n {
            graph.add_edge(x - 1, x);
        }
        for y in 1..n {
            graph.add_edge(sigma.position(y) - 1, sigma.position(y + 1) - 1);
        }
        IncidenceGraph {
            perm: sigma.clone(),
            graph,
        }
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn vertex_of(&self, p: Point) -> Option<usize> {
        self.perm.contains_point(p).then(|| p.x - 1)
    }

    pub fn vertex_by_value(&self, y: usize) -> usize {
        self.perm.position(y) - 1
    }

    pub fn point_of(&self, v: usize) -> Point {
        self.perm.point(v + 1)
    }

    pub fn degree(&self, p: Point) -> Option<usize> {
        self.vertex_of(p).map(|v| self.graph.degree(v))
    }

    /// Edges as point pairs, each listed once.
    pub fn point_edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.graph
            .edges()
            .map(|(u, v)| (self.point_of(u), self.point_of(v)))
    }
}

pub fn incidence_graph(sigma: &Permutation) -> IncidenceGraph {
    IncidenceGraph::new(sigma)
}

/// A partial map from pattern points to text points, injective by construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Embedding {
    map: BTreeMap<Point, Point>,
    image: BTreeSet<Point>,
}

impl Embedding {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pattern index `i` ↦ text index `a` for every pair.
    pub fn from_index_pairs(
        pattern: &Permutation,
        text: &Permutation,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PermError> {
        let mut e = Embedding::new();
        for (i, a) in pairs {
            if i == 0 || i > pattern.len() {
                return Err(PermError::NotAPoint { x: i, y: 0 });
            }
            if a == 0 || a > text.len() {
                return Err(PermError::NotAPoint { x: a, y: 0 });
            }
            e.insert(pattern.point(i), text.point(a))?;
        }
        Ok(e)
    }

    /// Full embedding sending pattern index `j` to `indices[j-1]`.
    pub fn from_occurrence(
        pattern: &Permutation,
        text: &Permutation,
        indices: &[usize],
    ) -> Result<Self, PermError> {
        Self::from_index_pairs(pattern, text, indices.iter().enumerate().map(|(j, &a)| (j + 1, a)))
    }

    pub fn insert(&mut self, p: Point, q: Point) -> Result<(), PermError> {
        if self.image.contains(&q) && self.map.get(&p) != Some(&q) {
            return Err(PermError::NotInjective { x: q.x, y: q.y });
        }
        if let Some(old) = self.map.insert(p, q) {
            self.image.remove(&old);
        }
        self.image.insert(q);
        Ok(())
    }

    pub fn get(&self, p: Point) -> Option<Point> {
        self.map.get(&p).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.map.iter().map(|(&p, &q)| (p, q))
    }

    pub fn domain(&self) -> impl Iterator<Item = Point> + '_ {
        self.map.keys().copied()
    }

    /// Text indices in pattern-index order.
    pub fn image_indices(&self) -> Vec<usize> {
        self.map.values().map(|q| q.x).collect()
    }

    pub fn restrict(&self, keep: impl Fn(Point) -> bool) -> Embedding {
        let mut e = Embedding::new();
        for (p, q) in self.iter().filter(|&(p, _)| keep(p)) {
            e.insert(p, q).unwrap();
        }
        e
    }
}

/// Checks the neighbor conditions on every edge of the pattern's incidence
/// graph induced by the embedding's domain.
pub fn validate_embedding(
    pattern: &Permutation,
    text: &Permutation,
    f: &Embedding,
) -> Result<bool, PermError> {
    for (p, q) in f.iter() {
        if !pattern.contains_point(p) {
            return Err(PermError::NotAPoint { x: p.x, y: p.y });
        }
        if !text.contains_point(q) {
            return Err(PermError::NotAPoint { x: q.x, y: q.y });
        }
    }
    for (p, q) in f.iter() {
        for dir in [Direction::Right, Direction::Up] {
            let r = pattern.neighbor_of_index(p.x, dir);
            let Some(fr) = f.get(r) else { continue };
            let ok = match dir {
                Direction::Right => q.x < fr.x,
                _ => q.y < fr.y,
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Lengths of a longest increasing and a longest decreasing subsequence.
pub fn lis_lds(sigma: &Permutation) -> (usize, usize) {
    fn lis(seq: impl Iterator<Item = usize>) -> usize {
        // tails[l] = smallest tail of an increasing run of length l+1
        let mut tails: Vec<usize> = Vec::new();
        for v in seq {
            let pos = tails.partition_point(|&t| t < v);
            if pos == tails.len() {
                tails.push(v);
            } else {
                tails[pos] = v;
            }
        }
        tails.len()
    }
    let n = sigma.len();
    (
        lis(sigma.values().iter().copied()),
        lis(sigma.values().iter().map(|&v| n + 1 - v)),
    )
}
