//! Pattern matching as a binary CSP.
//!
//! Variable `v` (0-based) stands for pattern index `v + 1`; its values are text
//! indices (1-based). One constraint per incidence-graph edge of the pattern,
//! evaluated against the text on demand rather than tabulated.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::graph::Graph;
use crate::perm::{Direction, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CspError {
    #[error("variables {0} and {1} share no constraint")]
    Unconstrained(usize, usize),
    #[error("assignment is inconsistent with the constraints")]
    Inconsistent,
    #[error("variable {0} out of range")]
    NoSuchVariable(usize),
}

/// An order constraint between pattern-adjacent variables `low < high`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub low: usize,
    pub high: usize,
    /// Neighbor relations of `low` towards `high` that produced this edge.
    pub tags: Vec<Direction>,
    /// `π(low) < π(high)`.
    pub ascending: bool,
}

impl Constraint {
    /// Whether `x_low = a, x_high = b` keeps both the index and the value order.
    pub fn holds(&self, text: &Permutation, a: usize, b: usize) -> bool {
        a < b && (text.value(a) < text.value(b)) == self.ascending
    }

    pub fn is_index_edge(&self) -> bool {
        self.tags.contains(&Direction::Right)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<usize, usize>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, var: usize, value: usize) -> Option<usize> {
        self.0.insert(var, value)
    }

    pub fn get(&self, var: usize) -> Option<usize> {
        self.0.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(&v, &a)| (v, a))
    }
}

impl FromIterator<(usize, usize)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

#[derive(Clone, Debug)]
pub struct CspInstance {
    text: Permutation,
    pattern: Permutation,
    domains: Vec<Vec<usize>>,
    fixed: Vec<Option<usize>>,
    constraints: Vec<Constraint>,
    lookup: HashMap<(usize, usize), usize>,
}

pub fn build_csp(text: &Permutation, pattern: &Permutation) -> CspInstance {
    let k = pattern.len();
    let n = text.len();
    let mut tags: BTreeMap<(usize, usize), Vec<Direction>> = BTreeMap::new();
    for v in 1..k {
        tags.entry((v - 1, v)).or_default().push(Direction::Right);
    }
    for y in 1..k {
        let a = pattern.position(y) - 1;
        let b = pattern.position(y + 1) - 1;
        let (key, dir) = if a < b {
            ((a, b), Direction::Up)
        } else {
            ((b, a), Direction::Down)
        };
        tags.entry(key).or_default().push(dir);
    }
    let constraints = tags
        .into_iter()
        .map(|((low, high), tags)| Constraint {
            low,
            high,
            tags,
            ascending: pattern.values()[low] < pattern.values()[high],
        })
        .collect();
    CspInstance::from_parts(
        text.clone(),
        pattern.clone(),
        vec![(1..=n).collect(); k],
        vec![None; k],
        constraints,
    )
}

impl CspInstance {
    fn from_parts(
        text: Permutation,
        pattern: Permutation,
        domains: Vec<Vec<usize>>,
        fixed: Vec<Option<usize>>,
        constraints: Vec<Constraint>,
    ) -> Self {
        let lookup = constraints
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.low, c.high), i))
            .collect();
        CspInstance {
            text,
            pattern,
            domains,
            fixed,
            constraints,
            lookup,
        }
    }

    pub fn text(&self) -> &Permutation {
        &self.text
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern
    }

    pub fn variable_count(&self) -> usize {
        self.domains.len()
    }

    /// Admissible values of `var`; a single value once the variable is fixed.
    pub fn domain(&self, var: usize) -> &[usize] {
        &self.domains[var]
    }

    pub fn fixed_value(&self, var: usize) -> Option<usize> {
        self.fixed[var]
    }

    pub fn is_active(&self, var: usize) -> bool {
        self.fixed[var].is_none()
    }

    pub fn active_variables(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.variable_count()).filter(|&v| self.is_active(v))
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, u: usize, v: usize) -> Option<&Constraint> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.lookup.get(&key).map(|&i| &self.constraints[i])
    }

    /// Whether `x_i = a, x_j = b` is allowed by the constraint between `i` and `j`.
    pub fn constraint_satisfied(
        &self,
        i: usize,
        j: usize,
        a: usize,
        b: usize,
    ) -> Result<bool, CspError> {
        let c = self.constraint(i, j).ok_or(CspError::Unconstrained(i, j))?;
        if a == 0 || b == 0 || a > self.text.len() || b > self.text.len() {
            return Ok(false);
        }
        Ok(if i < j {
            c.holds(&self.text, a, b)
        } else {
            c.holds(&self.text, b, a)
        })
    }

    /// Variables as vertices, constrained pairs as edges.
    pub fn constraint_graph(&self) -> Graph {
        Graph::from_edges(
            self.variable_count(),
            self.constraints.iter().map(|c| (c.low, c.high)),
        )
    }

    /// Whether a full assignment (`values[v]` for every variable) is a solution.
    pub fn is_solution(&self, values: &[usize]) -> bool {
        values.len() == self.variable_count()
            && values
                .iter()
                .enumerate()
                .all(|(v, a)| self.domains[v].binary_search(a).is_ok())
            && self
                .constraints
                .iter()
                .all(|c| c.holds(&self.text, values[c.low], values[c.high]))
    }

    /// Fixes the assigned variables, filters their neighbors' domains and drops
    /// every constraint touching a fixed variable.
    pub fn assign_and_simplify(&self, asg: &Assignment) -> Result<CspInstance, CspError> {
        let mut fixed = self.fixed.clone();
        let mut domains = self.domains.clone();
        let mut used = std::collections::HashSet::new();
        for (var, a) in asg.iter() {
            if var >= self.variable_count() {
                return Err(CspError::NoSuchVariable(var));
            }
            if self.domains[var].binary_search(&a).is_err() || !used.insert(a) {
                return Err(CspError::Inconsistent);
            }
            fixed[var] = Some(a);
            domains[var] = vec![a];
        }
        for (v, &a) in self.fixed.iter().enumerate().filter_map(|(v, f)| f.as_ref().map(|a| (v, a))) {
            if asg.get(v).is_none() && !used.insert(a) {
                return Err(CspError::Inconsistent);
            }
        }
        let mut kept = Vec::new();
        for c in &self.constraints {
            match (asg.get(c.low), asg.get(c.high)) {
                (Some(a), Some(b)) => {
                    if !c.holds(&self.text, a, b) {
                        return Err(CspError::Inconsistent);
                    }
                }
                (Some(a), None) => {
                    domains[c.high].retain(|&b| c.holds(&self.text, a, b));
                }
                (None, Some(b)) => {
                    domains[c.low].retain(|&a| c.holds(&self.text, a, b));
                }
                (None, None) => kept.push(c.clone()),
            }
        }
        if domains.iter().any(Vec::is_empty) {
            return Err(CspError::Inconsistent);
        }
        Ok(CspInstance::from_parts(
            self.text.clone(),
            self.pattern.clone(),
            domains,
            fixed,
            kept,
        ))
    }

    /// Keeps only domain values accepted by `keep`.
    pub fn restrict_domain(&mut self, var: usize, keep: impl Fn(usize) -> bool) {
        self.domains[var].retain(|&a| keep(a));
    }

    /// Drops the index-path component of the constraint between `var - 1` and
    /// `var`. The edge disappears unless it is also a value-path edge.
    pub fn remove_left_constraint(&mut self, var: usize) {
        if var == 0 {
            return;
        }
        let Some(&idx) = self.lookup.get(&(var - 1, var)) else {
            return;
        };
        self.constraints[idx].tags.retain(|&d| d != Direction::Right);
        if self.constraints[idx].tags.is_empty() {
            let mut constraints = std::mem::take(&mut self.constraints);
            constraints.remove(idx);
            *self = CspInstance::from_parts(
                self.text.clone(),
                self.pattern.clone(),
                std::mem::take(&mut self.domains),
                std::mem::take(&mut self.fixed),
                constraints,
            );
        }
    }
}
