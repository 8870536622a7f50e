//! Partitioned subgraph isomorphism to colored pattern matching, and counting
//! colorful occurrences by inclusion–exclusion over color subsets.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use rayon::prelude::*;
use thiserror::Error;

use crate::count::MatchCount;
use crate::graph::Graph;
use crate::perm::{parse_permutation, PermError, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HardnessError {
    #[error("text has {text} entries but {colors} colors were given")]
    LengthMismatch { text: usize, colors: usize },
    #[error("color {color} at position {position} is outside 1..={k}")]
    BadColor { position: usize, color: usize, k: usize },
    #[error("class sizes sum to {sum} but the graph has {n} vertices")]
    ClassSizes { sum: usize, n: usize },
    #[error("edge {0}-{1} joins two vertices of the same class")]
    IntraClassEdge(usize, usize),
    #[error("edge {0}-{1} joins classes that are not adjacent in H")]
    UnmatchedEdge(usize, usize),
    #[error("bad permutation: {0}")]
    Perm(#[from] PermError),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Text, pattern, and a color in `1..=|pattern|` for each text entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PppmInstance {
    text: Permutation,
    colors: Vec<usize>,
    pattern: Permutation,
}

impl PppmInstance {
    pub fn new(text: Permutation, colors: Vec<usize>, pattern: Permutation) -> Result<Self, HardnessError> {
        let inst = PppmInstance {
            text,
            colors,
            pattern,
        };
        inst.check_colors()?;
        Ok(inst)
    }

    pub fn text(&self) -> &Permutation {
        &self.text
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern
    }

    /// Color of text index `i` is `colors()[i-1]`.
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn check_colors(&self) -> Result<(), HardnessError> {
        if self.colors.len() != self.text.len() {
            return Err(HardnessError::LengthMismatch {
                text: self.text.len(),
                colors: self.colors.len(),
            });
        }
        let k = self.pattern.len();
        match self.colors.iter().position(|&c| c == 0 || c > k) {
            Some(p) => Err(HardnessError::BadColor {
                position: p + 1,
                color: self.colors[p],
                k,
            }),
            None => Ok(()),
        }
    }

    /// Text entries whose color lies in `keep`, renumbered to a permutation.
    pub fn restrict_text(&self, keep: impl Fn(usize) -> bool) -> Option<Permutation> {
        let vals: Vec<usize> = (1..=self.text.len())
            .filter(|&i| keep(self.colors[i - 1]))
            .map(|i| self.text.value(i))
            .collect();
        (!vals.is_empty()).then(|| Permutation::from_order(&vals))
    }
}

impl fmt::Display for PppmInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let colors: Vec<String> = self.colors.iter().map(|c| c.to_string()).collect();
        writeln!(f, "{}", self.text)?;
        writeln!(f, "{}", colors.join(" "))?;
        writeln!(f, "{}", self.pattern)
    }
}

impl FromStr for PppmInstance {
    type Err = HardnessError;

    /// Three non-empty lines: text, colors, pattern.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lines: Vec<(usize, &str)> = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        if lines.len() != 3 {
            return Err(HardnessError::Parse {
                line: lines.last().map_or(1, |l| l.0),
                message: format!("expected 3 lines (text, colors, pattern), found {}", lines.len()),
            });
        }
        let text = parse_permutation(lines[0].1)?;
        let colors = lines[1]
            .1
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>().map_err(|_| HardnessError::Parse {
                    line: lines[1].0,
                    message: format!("bad color {t:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let pattern = parse_permutation(lines[2].1)?;
        PppmInstance::new(text, colors, pattern)
    }
}

/// Graph `G` with its vertices grouped into consecutive classes, one class per
/// vertex of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiInstance {
    g: Graph,
    h: Graph,
    class_of: Vec<usize>,
}

impl PsiInstance {
    /// Drops every edge of `G` that no edge of `H` can use: edges inside a
    /// class and edges between classes that are not adjacent in `H`.
    pub fn new(g: Graph, h: Graph, class_sizes: &[usize]) -> Result<Self, HardnessError> {
        let mut inst = Self::new_raw(g, h, class_sizes)?;
        let unusable: Vec<(usize, usize)> = inst
            .g
            .edges()
            .filter(|&(u, v)| {
                let (a, b) = (inst.class_of[u], inst.class_of[v]);
                a == b || !inst.h.has_edge(a, b)
            })
            .collect();
        for (u, v) in unusable {
            inst.g.remove_edge(u, v);
        }
        Ok(inst)
    }

    /// Keeps `G` as given; [`psi_to_pppm`] rejects it if unusable edges remain.
    pub fn new_raw(g: Graph, h: Graph, class_sizes: &[usize]) -> Result<Self, HardnessError> {
        let sum: usize = class_sizes.iter().sum();
        if class_sizes.len() != h.vertex_count() || sum != g.vertex_count() {
            return Err(HardnessError::ClassSizes {
                sum,
                n: g.vertex_count(),
            });
        }
        let class_of = class_sizes
            .iter()
            .enumerate()
            .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
            .collect();
        Ok(PsiInstance { g, h, class_of })
    }

    pub fn g(&self) -> &Graph {
        &self.g
    }

    pub fn h(&self) -> &Graph {
        &self.h
    }

    /// 0-based class (vertex of `H`) of each vertex of `G`.
    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn class_members(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.class_of.len()).filter(move |&u| self.class_of[u] == c)
    }
}

/// Where a point sits in the tilted-grid layout, in terms of classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Role {
    Anchor,
    RowLeft(usize),
    RowRight(usize),
    ColLower(usize),
    ColUpper(usize),
    Cell(usize, usize),
}

/// Points of the tilted grid for a graph on `class_of.len()` vertices; each
/// point carries an x-key, a y-key, and its role.
fn tilted_grid(
    class_of: &[usize],
    edges: impl Iterator<Item = (usize, usize)>,
) -> Vec<((usize, usize, usize, usize), (usize, usize, usize, usize), Role)> {
    let n = class_of.len();
    let mut pts = Vec::with_capacity(5 * n + 1);
    // row 0 sits above every vertex row; the anchor is its lowest point
    pts.push(((0, 0, 0, 0), (2, 0, 0, 0), Role::Anchor));
    for t in 1..=n {
        let c = class_of[t - 1];
        pts.push(((1, t, 0, 0), (2, 2 * t, 0, 0), Role::RowLeft(c)));
        pts.push(((1, t, 2, 0), (2, 2 * t - 1, 0, 0), Role::RowRight(c)));
        pts.push(((0, t, 0, 0), (1, n - t, 0, 0), Role::ColLower(c)));
        pts.push(((0, t, 1, 0), (1, n - t, 2, 0), Role::ColUpper(c)));
    }
    let mut cell = |i: usize, j: usize| {
        pts.push((
            (1, i, 1, j),
            (1, n - j, 1, i),
            Role::Cell(class_of[i - 1], class_of[j - 1]),
        ));
    };
    for t in 1..=n {
        cell(t, t);
    }
    for (u, v) in edges {
        cell(u + 1, v + 1);
        cell(v + 1, u + 1);
    }
    pts
}

/// Orders points by x-key for indices and by y-key for values.
fn compress<K: Ord + Copy>(pts: &[(K, K, Role)]) -> (Permutation, Vec<Role>) {
    let mut by_x: Vec<usize> = (0..pts.len()).collect();
    by_x.sort_by_key(|&p| pts[p].0);
    let ys: Vec<K> = by_x.iter().map(|&p| pts[p].1).collect();
    let roles = by_x.iter().map(|&p| pts[p].2).collect();
    (Permutation::from_order(&ys), roles)
}

/// Builds the colored instance; its pattern has `5k + 2|E(H)| + 1` entries and
/// its text `5n + 2m + 1`.
pub fn psi_to_pppm(psi: &PsiInstance) -> Result<PppmInstance, HardnessError> {
    for (u, v) in psi.g.edges() {
        let (a, b) = (psi.class_of[u], psi.class_of[v]);
        if a == b {
            return Err(HardnessError::IntraClassEdge(u + 1, v + 1));
        }
        if !psi.h.has_edge(a, b) {
            return Err(HardnessError::UnmatchedEdge(u + 1, v + 1));
        }
    }
    let k = psi.h.vertex_count();
    let h_classes: Vec<usize> = (0..k).collect();
    let (pattern, pattern_roles) = compress(&tilted_grid(&h_classes, psi.h.edges()));
    let (text, text_roles) = compress(&tilted_grid(&psi.class_of, psi.g.edges()));
    let colors = text_roles
        .iter()
        .map(|r| {
            pattern_roles
                .iter()
                .position(|q| q == r)
                .map(|p| p + 1)
                .expect("every text role occurs in the pattern")
        })
        .collect();
    PppmInstance::new(text, colors, pattern)
}

/// Is there one vertex per class with every `H`-edge present between the
/// chosen vertices?
pub fn solve_psi_brute(psi: &PsiInstance) -> bool {
    let k = psi.h.vertex_count();
    let members: Vec<Vec<usize>> = (0..k).map(|c| psi.class_members(c).collect()).collect();
    let mut chosen = Vec::with_capacity(k);
    fn rec(psi: &PsiInstance, members: &[Vec<usize>], chosen: &mut Vec<usize>) -> bool {
        let c = chosen.len();
        if c == members.len() {
            return true;
        }
        for &u in &members[c] {
            let ok = psi
                .h
                .neighbors(c)
                .iter()
                .filter(|&&d| d < c)
                .all(|&d| psi.g.has_edge(u, chosen[d]));
            if ok {
                chosen.push(u);
                if rec(psi, members, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    rec(psi, &members, &mut chosen)
}

/// Occurrences in which the images carry every color `1..=k` exactly once.
pub fn count_colorful<F>(inst: &PppmInstance, backend: F) -> MatchCount
where
    F: Fn(&Permutation, &Permutation) -> MatchCount + Sync,
{
    let k = inst.pattern.len();
    let total: BigInt = (0u64..1 << k)
        .into_par_iter()
        .map(|mask| {
            let size = mask.count_ones() as usize;
            let Some(text) = inst.restrict_text(|c| mask >> (c - 1) & 1 == 1) else {
                return BigInt::from(0);
            };
            if text.len() < k {
                return BigInt::from(0);
            }
            let c = BigInt::from_biguint(Sign::Plus, backend(&text, &inst.pattern).into_biguint());
            if (k - size) % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .sum();
    MatchCount::from(total.to_biguint().expect("inclusion-exclusion total is non-negative"))
}

/// `G` as an edge file: vertex count, then one `u v` pair (1-based) per line.
pub fn parse_edge_file(s: &str) -> Result<Graph, HardnessError> {
    let mut lines = s
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let bad = |line: usize, message: String| HardnessError::Parse { line, message };
    let (line, header) = lines.next().ok_or_else(|| bad(1, "missing vertex count".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| bad(line, format!("bad vertex count {header:?}")))?;
    let mut g = Graph::new(n);
    for (line, l) in lines {
        let ends: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(line, format!("bad vertex {t:?}"))))
            .collect::<Result<_, _>>()?;
        match ends.as_slice() {
            &[u, v] if (1..=n).contains(&u) && (1..=n).contains(&v) && u != v => {
                g.add_edge(u - 1, v - 1);
            }
            _ => return Err(bad(line, format!("expected two distinct vertices in 1..={n}"))),
        }
    }
    Ok(g)
}

pub fn format_edge_file(g: &Graph) -> String {
    let mut out = format!("{}\n", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_count, brute_pppm_contains, brute_pppm_count, for_each_occurrence};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn pattern_sizes() {
        let c4 = PsiInstance::new(Graph::cycle(4), Graph::cycle(4), &[1, 1, 1, 1]).unwrap();
        let inst = psi_to_pppm(&c4).unwrap();
        assert_eq!(inst.pattern().len(), 29);
        assert_eq!(inst.text().len(), 5 * 4 + 2 * 4 + 1);
        let k4 = PsiInstance::new(Graph::complete(4), Graph::complete(4), &[1, 1, 1, 1]).unwrap();
        assert_eq!(psi_to_pppm(&k4).unwrap().pattern().len(), 33);
    }

    #[test]
    fn single_vertex_layout() {
        let psi = PsiInstance::new(Graph::new(1), Graph::new(1), &[1]).unwrap();
        let inst = psi_to_pppm(&psi).unwrap();
        // anchor, column pair, row pair around the diagonal cell
        assert_eq!(inst.pattern(), &p("4 1 3 6 2 5"));
        assert_eq!(inst.text(), &p("4 1 3 6 2 5"));
        assert_eq!(inst.colors(), &[1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn preprocessing_drops_unusable_edges() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let h = Graph::from_edges(2, [(0, 1)]);
        let psi = PsiInstance::new(g.clone(), h.clone(), &[2, 2]).unwrap();
        assert_eq!(psi.g().edge_count(), 1);
        let raw = PsiInstance::new_raw(g, h, &[2, 2]).unwrap();
        assert_eq!(psi_to_pppm(&raw), Err(HardnessError::IntraClassEdge(1, 2)));
        assert!(matches!(
            PsiInstance::new(Graph::new(3), Graph::new(2), &[1, 1]),
            Err(HardnessError::ClassSizes { .. })
        ));
    }

    #[test]
    fn psi_examples() {
        let psi = PsiInstance::new(Graph::new(2), Graph::new(1), &[2]).unwrap();
        assert!(solve_psi_brute(&psi));
        let h = Graph::from_edges(2, [(0, 1)]);
        let psi = PsiInstance::new(Graph::new(3), h.clone(), &[1, 2]).unwrap();
        assert!(!solve_psi_brute(&psi));
        assert!(!brute_pppm_contains(&psi_to_pppm(&psi).unwrap()).unwrap());
        let psi = PsiInstance::new(Graph::from_edges(3, [(0, 2)]), h, &[1, 2]).unwrap();
        assert!(solve_psi_brute(&psi));
        let inst = psi_to_pppm(&psi).unwrap();
        assert_eq!(inst.text().len(), 5 * 3 + 2 + 1);
        assert!(brute_pppm_contains(&inst).unwrap());
    }

    #[test]
    fn colorful_example() {
        let inst = PppmInstance::new(p("1 3 2"), vec![1, 2, 2], p("1 2")).unwrap();
        assert_eq!(count_colorful(&inst, brute_count), 2);
        let inst = PppmInstance::new(p("1 2"), vec![2, 1], p("1 2")).unwrap();
        // colorful but not color-respecting
        assert_eq!(count_colorful(&inst, brute_count), 1);
        assert_eq!(brute_pppm_count(&inst).unwrap(), 0);
        let inst = PppmInstance::new(p("2 1 3"), vec![1, 1, 1], p("1")).unwrap();
        assert_eq!(count_colorful(&inst, brute_count), 3);
    }

    #[test]
    fn reduction_does_not_permute_colors() {
        let g = Graph::from_edges(4, [(0, 2), (1, 3), (0, 3)]);
        let h = Graph::from_edges(2, [(0, 1)]);
        let psi = PsiInstance::new(g, h, &[2, 2]).unwrap();
        let inst = psi_to_pppm(&psi).unwrap();
        let mut using = 0;
        for_each_occurrence(inst.text(), inst.pattern(), |occ| {
            let cols: Vec<usize> = occ.iter().map(|&a| inst.colors()[a - 1]).collect();
            let mut sorted = cols.clone();
            sorted.sort_unstable();
            if sorted == (1..=occ.len()).collect::<Vec<_>>() {
                using += 1;
                assert_eq!(cols, sorted);
            }
        });
        assert_eq!(MatchCount::from(using as u64), brute_pppm_count(&inst).unwrap());
        assert_eq!(using, 3);
    }

    #[test]
    fn file_formats() {
        let g = parse_edge_file("# comment\n4\n1 2\n3 4\n\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(parse_edge_file(&format_edge_file(&g)).unwrap(), g);
        assert!(parse_edge_file("2\n1 3\n").is_err());
        assert!(parse_edge_file("").is_err());
        let inst = PppmInstance::new(p("1 3 2"), vec![1, 2, 2], p("1 2")).unwrap();
        let back: PppmInstance = inst.to_string().parse().unwrap();
        assert_eq!(back, inst);
        assert!("1 2\n1 3\n1 2\n".parse::<PppmInstance>().is_err());
        assert!("1 2\n1\n1 2\n".parse::<PppmInstance>().is_err());
    }
}
