use crate::value::{int, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct Matching {
    /// `(row, col)` pairs, sorted by row.
    pub pairs: Vec<(usize, usize)>,
    pub weight: Value,
}

/// Maximum-weight matching in a bipartite graph given as a `rows x cols`
/// matrix; `None` marks an absent edge, which is never matched. Weights must be
/// non-negative. Deterministic for a fixed input.
pub fn max_weight_matching(weights: &[Vec<Option<Value>>]) -> Matching {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Matching { pairs: Vec::new(), weight: int(0) };
    }
    let transposed = rows > cols;
    let cost: Vec<Vec<Value>> = if transposed {
        (0..cols).map(|c| (0..rows).map(|r| -weights[r][c].unwrap_or_else(|| int(0))).collect()).collect()
    } else {
        weights.iter().map(|row| row.iter().map(|w| -w.unwrap_or_else(|| int(0))).collect()).collect()
    };
    let assignment = min_cost_assignment(&cost);
    let mut pairs: Vec<(usize, usize)> = assignment
        .into_iter()
        .enumerate()
        .map(|(a, b)| if transposed { (b, a) } else { (a, b) })
        .filter(|&(r, c)| weights[r][c].is_some())
        .collect();
    pairs.sort_unstable();
    let weight = pairs.iter().map(|&(r, c)| weights[r][c].expect("kept pairs exist")).sum();
    Matching { pairs, weight }
}

/// Hungarian method with potentials; `cost` has no more rows than columns.
/// Returns the column assigned to each row.
fn min_cost_assignment(cost: &[Vec<Value>]) -> Vec<usize> {
    let n = cost.len();
    let m = cost[0].len();
    debug_assert!(n <= m);
    let inf: Value = cost.iter().flatten().map(|c| if *c < int(0) { -c } else { *c }).sum::<Value>() * int(2) + int(1);
    let zero = int(0);
    let mut u = vec![zero; n + 1];
    let mut v = vec![zero; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![usize::MAX; n];
    for j in 1..=m {
        if p[j] != 0 {
            out[p[j] - 1] = j - 1;
        }
    }
    out
}
