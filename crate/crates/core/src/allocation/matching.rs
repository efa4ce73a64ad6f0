use serde::{Deserialize, Serialize};

use crate::network::Scenario;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Max,
    Min,
}

/// Dense weighted bipartite graph. `None` marks a forbidden edge.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph {
    rows: usize,
    cols: usize,
    weights: Vec<Option<f64>>,
}

impl BipartiteGraph {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidScenario("ragged weight matrix".into()));
        }
        if rows.iter().flatten().any(|w| !w.is_finite()) {
            return Err(Error::InvalidScenario("non-finite edge weight".into()));
        }
        Ok(Self { rows: r, cols: c, weights: rows.iter().flatten().map(|&w| Some(w)).collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn weight(&self, r: usize, c: usize) -> Option<f64> {
        self.weights[r * self.cols + c]
    }

    pub fn forbid(&mut self, r: usize, c: usize) {
        self.weights[r * self.cols + c] = None;
    }
}

/// Row-to-column matching covering every row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matching {
    pub row_to_col: Vec<usize>,
    pub total: f64,
}

impl Matching {
    pub fn assignment_matrix(&self, cols: usize) -> AssignmentMatrix {
        let rows = self.row_to_col.len();
        let mut entries = vec![false; rows * cols];
        for (r, &c) in self.row_to_col.iter().enumerate() {
            entries[r * cols + c] = true;
        }
        AssignmentMatrix { rows, cols, entries }
    }
}

/// Binary `L x Q` cellular-to-channel matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<bool>,
}

impl AssignmentMatrix {
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.entries[r * self.cols + c]
    }

    pub fn row_sum(&self, r: usize) -> usize {
        (0..self.cols).filter(|&c| self.get(r, c)).count()
    }

    pub fn col_sum(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    /// Column sums at most one, row sums exactly one.
    pub fn is_valid(&self) -> bool {
        (0..self.rows).all(|r| self.row_sum(r) == 1) && (0..self.cols).all(|c| self.col_sum(c) <= 1)
    }

    pub fn is_perfect(&self) -> bool {
        self.is_valid() && self.rows == self.cols
    }
}

/// Hungarian algorithm (shortest augmenting paths with potentials), `O(n^3)`.
///
/// Every row must be matched, so `rows <= cols`. Missing rows are padded with
/// zero-weight dummy vertices to make the cost matrix square; maximization is
/// handled by negating weights.
pub fn hungarian_matching(graph: &BipartiteGraph, sense: Sense) -> Result<Matching> {
    let (rows, cols) = (graph.rows, graph.cols);
    if rows == 0 {
        return Ok(Matching { row_to_col: vec![], total: 0.0 });
    }
    if rows > cols {
        return Err(Error::InfeasibleMatching(cols));
    }
    for r in 0..rows {
        if (0..cols).all(|c| graph.weight(r, c).is_none()) {
            return Err(Error::InfeasibleMatching(r));
        }
    }
    let n = cols;
    let max_abs = graph.weights.iter().flatten().fold(0.0f64, |m, w| m.max(w.abs()));
    let forbidden_cost = (2.0 * n as f64 + 1.0) * (max_abs + 1.0);
    let cost = |r: usize, c: usize| -> f64 {
        if r >= rows {
            return 0.0;
        }
        match graph.weight(r, c) {
            Some(w) if sense == Sense::Max => -w,
            Some(w) => w,
            None => forbidden_cost,
        }
    };

    // 1-based arrays; column 0 is the virtual root of each augmenting search.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![usize::MAX; rows];
    for j in 1..=n {
        let r = owner[j] - 1;
        if r < rows {
            row_to_col[r] = j - 1;
        }
    }
    let mut total = 0.0;
    for (r, &c) in row_to_col.iter().enumerate() {
        match graph.weight(r, c) {
            Some(w) => total += w,
            None => return Err(Error::InfeasibleMatching(r)),
        }
    }
    Ok(Matching { row_to_col, total })
}

/// Cellular-to-channel graph with weights `ln(p_c h_bl,q)`.
pub fn build_cellular_graph(scenario: &Scenario) -> Result<BipartiteGraph> {
    let rows: Vec<Vec<f64>> = (0..scenario.cellular_count())
        .map(|l| {
            (0..scenario.num_channels)
                .map(|q| (scenario.power.bs_power * scenario.bs_to_cellular(l, q)).ln())
                .collect()
        })
        .collect();
    BipartiteGraph::from_rows(&rows)
}

/// Max-weight cellular matching; returns the channel of each cellular user.
pub fn cellular_assignment(scenario: &Scenario) -> Result<Matching> {
    hungarian_matching(&build_cellular_graph(scenario)?, Sense::Max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton() {
        let g = BipartiteGraph::from_rows(&[vec![3.5]]).unwrap();
        let m = hungarian_matching(&g, Sense::Max).unwrap();
        assert_eq!(m.row_to_col, vec![0]);
        assert_eq!(m.total, 3.5);
        assert!(m.assignment_matrix(1).is_perfect());
    }

    #[test]
    fn min_and_max_differ() {
        let g = BipartiteGraph::from_rows(&[vec![1.0, 5.0], vec![2.0, 1.0]]).unwrap();
        assert_eq!(hungarian_matching(&g, Sense::Max).unwrap().row_to_col, vec![1, 0]);
        assert_eq!(hungarian_matching(&g, Sense::Min).unwrap().row_to_col, vec![0, 1]);
    }

    #[test]
    fn rectangular_uses_dummies() {
        let g = BipartiteGraph::from_rows(&[vec![4.0, 1.0, 9.0]]).unwrap();
        let m = hungarian_matching(&g, Sense::Min).unwrap();
        assert_eq!(m.row_to_col, vec![1]);
        let a = m.assignment_matrix(3);
        assert!(a.is_valid());
        assert!(!a.is_perfect());
        let tall = BipartiteGraph::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
        assert!(hungarian_matching(&tall, Sense::Max).is_err());
    }

    #[test]
    fn forbidden_edges() {
        let mut g = BipartiteGraph::from_rows(&[vec![10.0, 1.0], vec![10.0, 1.0]]).unwrap();
        g.forbid(0, 0);
        let m = hungarian_matching(&g, Sense::Max).unwrap();
        assert_eq!(m.row_to_col, vec![1, 0]);
        g.forbid(0, 1);
        assert!(matches!(hungarian_matching(&g, Sense::Max), Err(Error::InfeasibleMatching(0))));
        let mut h = BipartiteGraph::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        h.forbid(0, 1);
        h.forbid(1, 1);
        assert!(matches!(hungarian_matching(&h, Sense::Max), Err(Error::InfeasibleMatching(_))));
    }

    #[test]
    fn negative_weights() {
        let g = BipartiteGraph::from_rows(&[vec![-3.0, -1.0], vec![-2.0, -5.0]]).unwrap();
        let m = hungarian_matching(&g, Sense::Max).unwrap();
        assert_eq!(m.row_to_col, vec![1, 0]);
        assert_eq!(m.total, -3.0);
    }
}
