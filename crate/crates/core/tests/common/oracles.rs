//! Brute-force reference computations. None of these call into the library's algorithms.

use maxplus_csr::MaxPlusMatrix;

pub type Grid = Vec<Vec<Option<f64>>>;

pub fn grid(m: &MaxPlusMatrix) -> Grid {
    m.to_options()
}

fn better(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Best weight over every walk `i → j` whose step `s` uses `stages[s]`, by enumeration.
pub fn best_walk(stages: &[&Grid], i: usize, j: usize) -> Option<f64> {
    fn go(stages: &[&Grid], at: usize, j: usize, acc: f64) -> Option<f64> {
        let Some((first, rest)) = stages.split_first() else {
            return (at == j).then_some(acc);
        };
        let mut best = None;
        for (next, w) in first[at].iter().enumerate() {
            if let Some(w) = w {
                best = better(best, go(rest, next, j, acc + w));
            }
        }
        best
    }
    go(stages, i, j, 0.0)
}

/// All-pairs best walk weights through the given stages.
pub fn walk_table(stages: &[&Grid], n: usize) -> Grid {
    (0..n)
        .map(|i| (0..n).map(|j| best_walk(stages, i, j)).collect())
        .collect()
}

/// `A^k` entries by walk enumeration.
pub fn power_by_walks(a: &Grid, k: usize) -> Grid {
    let stages: Vec<&Grid> = vec![a; k];
    walk_table(&stages, a.len())
}

/// Product along a word by walk enumeration.
pub fn product_by_walks(gens: &[Grid], word: &[usize]) -> Grid {
    let stages: Vec<&Grid> = word.iter().map(|&l| &gens[l]).collect();
    walk_table(&stages, gens[0].len())
}

/// Largest mean over all simple cycles.
pub fn max_cycle_mean_by_cycles(a: &Grid) -> Option<f64> {
    let n = a.len();
    let mut best: Option<f64> = None;
    fn extend(a: &Grid, start: usize, at: usize, on: &mut Vec<bool>, weight: f64, len: usize, best: &mut Option<f64>) {
        for (next, w) in a[at].iter().enumerate() {
            let Some(w) = w else { continue };
            if next == start {
                let mean = (weight + w) / (len + 1) as f64;
                *best = Some(best.map_or(mean, |b: f64| b.max(mean)));
            } else if next > start && !on[next] {
                on[next] = true;
                extend(a, start, next, on, weight + w, len + 1, best);
                on[next] = false;
            }
        }
    }
    for s in 0..n {
        let mut on = vec![false; n];
        on[s] = true;
        extend(a, s, s, &mut on, 0.0, 0, &mut best);
    }
    best
}

/// Best initial walk from each node whose first critical node is its endpoint
/// (0 for a critical start), and the mirror quantity for final walks.
pub fn first_passage_by_walks(gens: &[Grid], word: &[usize], critical: &[bool]) -> (Vec<Option<f64>>, Vec<Option<f64>>) {
    let n = gens[0].len();
    let k = word.len();
    fn fwd(gens: &[Grid], word: &[usize], critical: &[bool], at: usize, pos: usize, acc: f64) -> Option<f64> {
        if pos == word.len() {
            return None;
        }
        let mut best = None;
        for (next, w) in gens[word[pos]][at].iter().enumerate() {
            let Some(w) = w else { continue };
            if critical[next] {
                best = better(best, Some(acc + w));
            } else {
                best = better(best, fwd(gens, word, critical, next, pos + 1, acc + w));
            }
        }
        best
    }
    fn bwd(gens: &[Grid], word: &[usize], critical: &[bool], at: usize, remaining: usize, acc: f64) -> Option<f64> {
        if remaining == 0 {
            return None;
        }
        let a = &gens[word[remaining - 1]];
        let mut best = None;
        for prev in 0..a.len() {
            let Some(w) = a[prev][at] else { continue };
            if critical[prev] {
                best = better(best, Some(acc + w));
            } else {
                best = better(best, bwd(gens, word, critical, prev, remaining - 1, acc + w));
            }
        }
        best
    }
    let w = (0..n)
        .map(|i| if critical[i] { Some(0.0) } else { fwd(gens, word, critical, i, 0, 0.0) })
        .collect();
    let v = (0..n)
        .map(|j| if critical[j] { Some(0.0) } else { bwd(gens, word, critical, j, k, 0.0) })
        .collect();
    (w, v)
}

/// CSR entries as best walks of length `2k + v` through the product, `v` critical
/// steps, and the product again.
pub fn symmetric_trellis_csr(gens: &[Grid], word: &[usize], critical_edges: &[(usize, usize)], v: usize) -> Grid {
    let n = gens[0].len();
    let mut s: Grid = vec![vec![None; n]; n];
    for &(i, j) in critical_edges {
        s[i][j] = Some(0.0);
    }
    let mut stages: Vec<&Grid> = word.iter().map(|&l| &gens[l]).collect();
    stages.extend(std::iter::repeat_n(&s, v));
    stages.extend(word.iter().map(|&l| &gens[l]));
    walk_table(&stages, n)
}

/// Factor rank at most one: finite entries form a combinatorial rectangle on which
/// `a_ij + a_kl = a_il + a_kj`.
pub fn has_rank_at_most_one(a: &Grid) -> bool {
    let rows: Vec<usize> = (0..a.len()).filter(|&i| a[i].iter().any(Option::is_some)).collect();
    let cols: Vec<usize> = (0..a[0].len()).filter(|&j| a.iter().any(|r| r[j].is_some())).collect();
    for &i in &rows {
        for &j in &cols {
            if a[i][j].is_none() {
                return false;
            }
        }
    }
    for &i in &rows {
        for &k in &rows {
            for &j in &cols {
                for &l in &cols {
                    let lhs = a[i][j].unwrap() + a[k][l].unwrap();
                    let rhs = a[i][l].unwrap() + a[k][j].unwrap();
                    if (lhs - rhs).abs() > 1e-9 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Every word of length `k` over `m` letters.
pub fn all_words(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..m).map(move |l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn grid_le(a: &Grid, b: &Grid) -> bool {
    a.iter().zip(b).all(|(ra, rb)| {
        ra.iter().zip(rb).all(|(x, y)| match (x, y) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(x), Some(y)) => x <= y,
        })
    })
}

/// Edges lying on some simple cycle whose mean is within `1e-9` of `lambda`.
pub fn edges_on_optimal_cycles(a: &Grid, lambda: f64) -> Vec<(usize, usize)> {
    let n = a.len();
    let mut found = std::collections::BTreeSet::new();
    fn extend(
        a: &Grid,
        start: usize,
        path: &mut Vec<usize>,
        weight: f64,
        lambda: f64,
        found: &mut std::collections::BTreeSet<(usize, usize)>,
    ) {
        let at = *path.last().unwrap();
        for (next, w) in a[at].iter().enumerate() {
            let Some(w) = w else { continue };
            if next == start {
                let len = path.len() as f64;
                if ((weight + w) / len - lambda).abs() <= 1e-9 {
                    for t in 0..path.len() {
                        found.insert((path[t], path[(t + 1) % path.len()]));
                    }
                }
            } else if next > start && !path.contains(&next) {
                path.push(next);
                extend(a, start, path, weight + w, lambda, found);
                path.pop();
            }
        }
    }
    for s in 0..n {
        extend(a, s, &mut vec![s], 0.0, lambda, &mut found);
    }
    found.into_iter().collect()
}
