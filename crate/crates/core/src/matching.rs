//! Bipartite matchings on the support of a matrix and the dual ascent that
//! computes the minimum weight of a perfect matching.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("weight matrix must be n×n with n = {0}")]
    Dimension(usize),
    #[error("negative weight {w} at ({i}, {j})")]
    NegativeWeight { i: usize, j: usize, w: i64 },
    #[error("dual violates feasibility at edge ({0}, {1})")]
    InfeasibleDual(usize, usize),
}

/// Rows and columns `0..n`; `weights[i][j] = None` means no edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedBipartite {
    n: usize,
    weights: Vec<Option<i64>>,
}

impl WeightedBipartite {
    pub fn new(n: usize, weights: Vec<Option<i64>>) -> Result<Self, MatchingError> {
        if weights.len() != n * n {
            return Err(MatchingError::Dimension(n));
        }
        for (k, w) in weights.iter().enumerate() {
            if let Some(w) = *w {
                if w < 0 {
                    return Err(MatchingError::NegativeWeight {
                        i: k / n,
                        j: k % n,
                        w,
                    });
                }
            }
        }
        Ok(WeightedBipartite { n, weights })
    }

    pub fn from_rows(rows: &[Vec<Option<i64>>]) -> Result<Self, MatchingError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatchingError::Dimension(n));
        }
        WeightedBipartite::new(n, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<i64> {
        self.weights[i * self.n + j]
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| self.weight(i, j).is_some())
                    .collect()
            })
            .collect()
    }

    /// Edges with `dp_i + dq_j = w_ij`, all given weight 0.
    pub fn tight_subgraph(
        &self,
        dp: &[i64],
        dq: &[i64],
    ) -> Result<WeightedBipartite, MatchingError> {
        let n = self.n;
        if dp.len() != n || dq.len() != n {
            return Err(MatchingError::Dimension(n));
        }
        let mut weights = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                if let Some(w) = self.weight(i, j) {
                    let s = dp[i] + dq[j];
                    if s > w {
                        return Err(MatchingError::InfeasibleDual(i, j));
                    }
                    if s == w {
                        weights[i * n + j] = Some(0);
                    }
                }
            }
        }
        Ok(WeightedBipartite { n, weights })
    }
}

/// `row_to_col[i] = Some(j)` when row `i` is matched to column `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub row_to_col: Vec<Option<usize>>,
    pub col_to_row: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.row_to_col.iter().flatten().count()
    }

    pub fn is_perfect(&self) -> bool {
        self.row_to_col.iter().all(Option::is_some)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.row_to_col
            .iter()
            .enumerate()
            .filter_map(|(i, j)| j.map(|j| (i, j)))
            .collect()
    }
}

/// Maximum-cardinality matching on the present edges (Hopcroft–Karp).
pub fn max_matching(g: &WeightedBipartite) -> Matching {
    let n = g.n;
    let adj = g.adjacency();
    let mut row_to_col = vec![None; n];
    let mut col_to_row: Vec<Option<usize>> = vec![None; n];
    const INF: usize = usize::MAX;
    let mut dist = vec![INF; n];
    loop {
        // layered BFS from free rows
        let mut queue = VecDeque::new();
        for i in 0..n {
            if row_to_col[i].is_none() {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = INF;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                match col_to_row[j] {
                    None => found = true,
                    Some(r) if dist[r] == INF => {
                        dist[r] = dist[i] + 1;
                        queue.push_back(r);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        for i in 0..n {
            if row_to_col[i].is_none() {
                augment(i, &adj, &mut dist, &mut row_to_col, &mut col_to_row);
            }
        }
    }
    Matching {
        row_to_col,
        col_to_row,
    }
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    dist: &mut [usize],
    row_to_col: &mut [Option<usize>],
    col_to_row: &mut [Option<usize>],
) -> bool {
    for &j in &adj[i] {
        let ok = match col_to_row[j] {
            None => true,
            Some(r) => dist[r] == dist[i] + 1 && augment(r, adj, dist, row_to_col, col_to_row),
        };
        if ok {
            row_to_col[i] = Some(j);
            col_to_row[j] = Some(i);
            return true;
        }
    }
    dist[i] = usize::MAX;
    false
}

/// König cover from a maximum matching: with `Z` the vertices reachable
/// from free rows along alternating paths, `I` is the rows outside `Z`
/// and `J` the columns inside `Z`.
pub fn vertex_cover(g: &WeightedBipartite, m: &Matching) -> (Vec<usize>, Vec<usize>) {
    let n = g.n;
    let adj = g.adjacency();
    let mut row_seen = vec![false; n];
    let mut col_seen = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| m.row_to_col[i].is_none()).collect();
    for &i in &queue {
        row_seen[i] = true;
    }
    while let Some(i) = queue.pop_front() {
        for &j in &adj[i] {
            if col_seen[j] {
                continue;
            }
            col_seen[j] = true;
            if let Some(r) = m.col_to_row[j] {
                if !row_seen[r] {
                    row_seen[r] = true;
                    queue.push_back(r);
                }
            }
        }
    }
    let rows = (0..n).filter(|&i| !row_seen[i]).collect();
    let cols = (0..n).filter(|&j| col_seen[j]).collect();
    (rows, cols)
}

/// Value of the dual problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DualValue {
    Finite(i64),
    /// The support has no perfect matching.
    Infinite,
    /// The running dual objective passed the abort threshold.
    ExceedsThreshold,
}

/// Row duals `dp ≤ 0`, column duals `dq`, feasible for the weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualSolution {
    pub dp: Vec<i64>,
    pub dq: Vec<i64>,
    pub value: DualValue,
}

/// One dual update as seen by an observer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualStep {
    pub dp: Vec<i64>,
    pub dq: Vec<i64>,
    pub objective: i64,
    pub cover_rows: Vec<usize>,
    pub cover_cols: Vec<usize>,
}

pub fn min_weight_pm_dual(g: &WeightedBipartite, abort_threshold: Option<i64>) -> DualSolution {
    min_weight_pm_dual_observed(g, abort_threshold, |_| {})
}

/// Dual ascent from `(0, 0)`.
///
/// While the tight subgraph lacks a perfect matching, a König cover
/// `(I, J)` of it has `|I| + |J| < n`; lowering `dp` on `I` and raising
/// `dq` outside `J` keeps feasibility (only uncovered, hence slack, edges
/// gain) and raises the objective by `n − |I| − |J|`. The observer sees
/// the state after each update.
pub fn min_weight_pm_dual_observed(
    g: &WeightedBipartite,
    abort_threshold: Option<i64>,
    mut observe: impl FnMut(&DualStep),
) -> DualSolution {
    let n = g.n;
    let mut dp = vec![0i64; n];
    let mut dq = vec![0i64; n];
    if !max_matching(g).is_perfect() {
        return DualSolution {
            dp,
            dq,
            value: DualValue::Infinite,
        };
    }
    let mut objective = 0i64;
    loop {
        let tight = g
            .tight_subgraph(&dp, &dq)
            .expect("ascent keeps the dual feasible");
        let m = max_matching(&tight);
        if m.is_perfect() {
            return DualSolution {
                dp,
                dq,
                value: DualValue::Finite(objective),
            };
        }
        let (rows, cols) = vertex_cover(&tight, &m);
        for &i in &rows {
            dp[i] -= 1;
        }
        let mut in_cols = vec![false; n];
        for &j in &cols {
            in_cols[j] = true;
        }
        for j in 0..n {
            if !in_cols[j] {
                dq[j] += 1;
            }
        }
        objective += (n - rows.len() - cols.len()) as i64;
        observe(&DualStep {
            dp: dp.clone(),
            dq: dq.clone(),
            objective,
            cover_rows: rows,
            cover_cols: cols,
        });
        if abort_threshold.is_some_and(|t| objective > t) {
            return DualSolution {
                dp,
                dq,
                value: DualValue::ExceedsThreshold,
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rows: &[&[Option<i64>]]) -> WeightedBipartite {
        WeightedBipartite::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    const X: Option<i64> = None;
    const Z: Option<i64> = Some(0);

    #[test]
    fn matchings() {
        assert_eq!(max_matching(&g(&[&[Z, Z], &[Z, Z]])).size(), 2);
        assert_eq!(max_matching(&g(&[&[Z, Z], &[X, X]])).size(), 1);
        let perm = g(&[&[X, Z, X], &[X, X, Z], &[Z, X, X]]);
        assert_eq!(max_matching(&perm).pairs(), vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn covers() {
        let h = g(&[&[Z, Z], &[X, X]]);
        let m = max_matching(&h);
        assert_eq!(vertex_cover(&h, &m), (vec![0], vec![]));
        let full = g(&[&[Z, Z], &[Z, Z]]);
        let (i, j) = vertex_cover(&full, &max_matching(&full));
        assert_eq!(i.len() + j.len(), 2);
        let empty = g(&[&[X, X], &[X, X]]);
        assert_eq!(
            vertex_cover(&empty, &max_matching(&empty)),
            (vec![], vec![])
        );
    }

    #[test]
    fn tight_edges() {
        let w = g(&[&[Z, Some(1)], &[Some(1), Z]]);
        assert_eq!(
            w.tight_subgraph(&[0, 0], &[0, 0]).unwrap(),
            g(&[&[Z, X], &[X, Z]])
        );
        let w = g(&[&[Some(2)]]);
        assert_eq!(w.tight_subgraph(&[0], &[1]).unwrap(), g(&[&[X]]));
        assert!(w.tight_subgraph(&[0], &[3]).is_err());
    }

    #[test]
    fn dual_values() {
        let w = g(&[&[Z, Some(2)], &[Some(3), Some(1)]]);
        assert_eq!(min_weight_pm_dual(&w, None).value, DualValue::Finite(1));
        let w = g(&[&[Z, Some(1)], &[Some(1), Z]]);
        assert_eq!(min_weight_pm_dual(&w, None).value, DualValue::Finite(0));
        let w = g(&[&[Z, Z], &[X, X]]);
        assert_eq!(min_weight_pm_dual(&w, None).value, DualValue::Infinite);
        let w = g(&[&[Some(5)]]);
        assert_eq!(
            min_weight_pm_dual(&w, Some(3)).value,
            DualValue::ExceedsThreshold
        );
    }
}
