//! Words, inhomogeneous products and first-passage dynamic programs over the trellis.

use std::fmt;
use std::str::FromStr;

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::semiring::{MaxPlus, MaxPlusMatrix};

/// Sequence of generator indices, stored 0-based. Text form is 1-based and comma separated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    /// From 0-based letters.
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word(letters))
    }

    pub fn from_one_based(letters: &[usize]) -> Result<Self> {
        if let Some(p) = letters.iter().position(|&l| l == 0) {
            return Err(Error::WordSyntax(format!("letter at position {} is 0", p + 1)));
        }
        Self::new(letters.iter().map(|l| l - 1).collect())
    }

    /// `a` repeated `times` times followed by one `b` (0-based letters).
    pub fn power_then(a: usize, times: usize, b: usize) -> Self {
        let mut v = vec![a; times];
        v.push(b);
        Word(v)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, generator_count: usize) -> Result<()> {
        for (position, &l) in self.0.iter().enumerate() {
            if l >= generator_count {
                return Err(Error::LetterOutOfRange {
                    position: position + 1,
                    letter: l + 1,
                    count: generator_count,
                });
            }
        }
        Ok(())
    }

    /// First `k` letters.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        Self::new(self.0[..k.min(self.0.len())].to_vec())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::WordSyntax(format!("`{t}` is not a positive integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_based(&letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| (l + 1).to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Product of the visualised generators in word order.
pub fn gamma_product(e: &Ensemble, w: &Word) -> Result<MaxPlusMatrix> {
    w.validate(e.generator_count())?;
    let mut letters = w.letters().iter();
    let first = letters.next().ok_or(Error::EmptyWord)?;
    let mut acc = e.visualised[*first].clone();
    for &l in letters {
        acc = acc.multiply(&e.visualised[l])?;
    }
    Ok(acc)
}

/// Γ(k) and the first-passage weights w*, v* with the lengths of walks attaining them.
#[derive(Clone, Debug, PartialEq)]
pub struct TrellisWeights {
    pub product: MaxPlusMatrix,
    pub w_star: Vec<MaxPlus>,
    pub v_star: Vec<MaxPlus>,
    pub w_len: Vec<Option<usize>>,
    pub v_len: Vec<Option<usize>>,
}

/// Best weight and shortest length of an initial walk from `start` whose only critical node is its last.
fn forward_first_passage(e: &Ensemble, w: &Word, start: usize) -> (MaxPlus, Option<usize>) {
    let crit = &e.critical;
    if crit.is_critical(start) {
        return (MaxPlus::ZERO, Some(0));
    }
    let n = e.n();
    let mut cur = vec![MaxPlus::EPSILON; n];
    cur[start] = MaxPlus::ZERO;
    let mut best = (MaxPlus::EPSILON, None);
    for (stage, &l) in w.letters().iter().enumerate() {
        let a = &e.visualised[l];
        let mut next = vec![MaxPlus::EPSILON; n];
        for (u, &cu) in cur.iter().enumerate() {
            if cu.is_epsilon() {
                continue;
            }
            for (j, slot) in next.iter_mut().enumerate() {
                *slot = slot.oplus(cu.otimes(a.get(u, j)));
            }
        }
        for &c in &crit.critical_nodes {
            if next[c] > best.0 {
                best = (next[c], Some(stage + 1));
            }
            next[c] = MaxPlus::EPSILON;
        }
        if next.iter().all(|x| x.is_epsilon()) {
            break;
        }
        cur = next;
    }
    best
}

/// Mirror of [`forward_first_passage`]: final walks ending at `end` at stage k
/// whose only critical node is their first.
fn backward_first_passage(e: &Ensemble, w: &Word, end: usize) -> (MaxPlus, Option<usize>) {
    let crit = &e.critical;
    if crit.is_critical(end) {
        return (MaxPlus::ZERO, Some(0));
    }
    let n = e.n();
    let mut cur = vec![MaxPlus::EPSILON; n];
    cur[end] = MaxPlus::ZERO;
    let mut best = (MaxPlus::EPSILON, None);
    for (steps, &l) in w.letters().iter().rev().enumerate() {
        let a = &e.visualised[l];
        let mut next = vec![MaxPlus::EPSILON; n];
        for (u, slot) in next.iter_mut().enumerate() {
            for (x, &cx) in cur.iter().enumerate() {
                if cx.is_finite() {
                    *slot = slot.oplus(a.get(u, x).otimes(cx));
                }
            }
        }
        for &c in &crit.critical_nodes {
            if next[c] > best.0 {
                best = (next[c], Some(steps + 1));
            }
            next[c] = MaxPlus::EPSILON;
        }
        if next.iter().all(|x| x.is_epsilon()) {
            break;
        }
        cur = next;
    }
    best
}

pub fn first_passage_weights(e: &Ensemble, w: &Word) -> Result<TrellisWeights> {
    let product = gamma_product(e, w)?;
    let n = e.n();
    let (w_star, w_len) = (0..n).map(|i| forward_first_passage(e, w, i)).unzip();
    let (v_star, v_len) = (0..n).map(|j| backward_first_passage(e, w, j)).unzip();
    Ok(TrellisWeights {
        product,
        w_star,
        v_star,
        w_len,
        v_len,
    })
}

/// Realised first-passage lengths against their analytic bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkLengthReport {
    pub w_len: Vec<Option<usize>>,
    pub v_len: Vec<Option<usize>>,
    /// `(w*_i − α_i)/λ* + (n − q)`, or `n − q` when λ* = ε. `None` where w*_i = ε.
    pub w_bound: Vec<Option<f64>>,
    pub v_bound: Vec<Option<f64>>,
    /// `min(w_bound_i, k)`: initial walks of at least this length already attain w*_i.
    pub w_saturation: Vec<Option<f64>>,
    pub v_saturation: Vec<Option<f64>>,
    /// `(node, realised length, bound)` for every length above its bound.
    pub violations: Vec<(usize, usize, f64)>,
}

impl WalkLengthReport {
    pub fn within_bounds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `(value − reference)/λ* + (n − q)`, reading the quotient as 0 when λ* = ε.
pub(crate) fn length_bound(value: MaxPlus, reference: MaxPlus, lambda_star: MaxPlus, slack: f64) -> Option<f64> {
    let v = value.value()?;
    match lambda_star.value() {
        None => Some(slack),
        Some(l) => Some((v - reference.value()?) / l + slack),
    }
}

pub(crate) fn require_negative_lambda_star(e: &Ensemble) -> Result<()> {
    match e.lambda_star.value() {
        Some(l) if l >= 0.0 => Err(Error::NonNegativeLambdaStar { lambda_star: l }),
        _ => Ok(()),
    }
}

pub fn optimal_walk_lengths(e: &Ensemble, w: &Word) -> Result<WalkLengthReport> {
    require_negative_lambda_star(e)?;
    let tw = first_passage_weights(e, w)?;
    let pw = e.path_weights()?;
    let n = e.n();
    let slack = (n - e.critical.q()) as f64;
    let k = w.len() as f64;
    let w_bound: Vec<Option<f64>> = (0..n)
        .map(|i| length_bound(tw.w_star[i], pw.alpha[i], e.lambda_star, slack))
        .collect();
    let v_bound: Vec<Option<f64>> = (0..n)
        .map(|j| length_bound(tw.v_star[j], pw.beta[j], e.lambda_star, slack))
        .collect();
    let mut violations = Vec::new();
    for (lens, bounds) in [(&tw.w_len, &w_bound), (&tw.v_len, &v_bound)] {
        for node in 0..n {
            if let (Some(l), Some(b)) = (lens[node], bounds[node]) {
                if l as f64 > b + 1e-9 {
                    violations.push((node, l, b));
                }
            }
        }
    }
    let saturate = |b: &Vec<Option<f64>>| b.iter().map(|x| x.map(|v| v.min(k))).collect();
    Ok(WalkLengthReport {
        w_saturation: saturate(&w_bound),
        v_saturation: saturate(&v_bound),
        w_len: tw.w_len,
        v_len: tw.v_len,
        w_bound,
        v_bound,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexamples::{build_family, FamilyId};
    use crate::reference;

    #[test]
    fn word_parsing() {
        let w: Word = "5,5,1".parse().unwrap();
        assert_eq!(w.letters(), &[4, 4, 0]);
        assert_eq!(w.to_string(), "5,5,1");
        assert!("".parse::<Word>().is_err());
        assert!("1,0".parse::<Word>().is_err());
        assert!("1,x".parse::<Word>().is_err());
        assert_eq!("2 3".parse::<Word>().unwrap().letters(), &[1, 2]);
    }

    #[test]
    fn out_of_range_letter() {
        let e = Ensemble::build(build_family(FamilyId::P3Four).generators).unwrap();
        let w: Word = "1,3".parse().unwrap();
        assert!(matches!(
            gamma_product(&e, &w),
            Err(Error::LetterOutOfRange { position: 2, letter: 3, count: 2 })
        ));
    }

    #[test]
    fn single_letter_product_is_the_generator() {
        let f = build_family(FamilyId::P3Four);
        let e = Ensemble::build(f.generators.clone()).unwrap();
        let g = gamma_product(&e, &"2".parse().unwrap()).unwrap();
        assert_eq!(g, f.generators[1]);
    }

    #[test]
    fn eight_node_product_matches_display() {
        let e = Ensemble::build(reference::eight_node_generators()).unwrap();
        let g = gamma_product(&e, &reference::eight_node_word()).unwrap();
        assert_eq!(g, reference::eight_node_gamma24());
        assert_eq!(g.get(6, 0), MaxPlus::from(-11));
    }

    #[test]
    fn first_family_u_entry() {
        let e = Ensemble::build(build_family(FamilyId::P1Six).generators).unwrap();
        let g = gamma_product(&e, &Word::power_then(0, 20, 1)).unwrap();
        assert_eq!(g.get(5, 4), MaxPlus::from(-401));
    }

    #[test]
    fn first_passage_on_eight_node_word() {
        let e = Ensemble::build(reference::eight_node_generators()).unwrap();
        let tw = first_passage_weights(&e, &reference::eight_node_word()).unwrap();
        for c in 0..4 {
            assert_eq!(tw.w_star[c], MaxPlus::ZERO);
            assert_eq!(tw.w_len[c], Some(0));
        }
        assert_eq!(tw.w_star[6], MaxPlus::from(-11));
        assert_eq!(tw.v_star[0], MaxPlus::ZERO);
        assert!(tw.w_star[4] >= MaxPlus::from(-19));
        // w*_i equals the best entry of row i over critical columns
        for i in 0..8 {
            let best = (0..4).map(|c| tw.product.get(i, c)).max().unwrap();
            assert_eq!(tw.w_star[i], best);
            let best_v = (0..4).map(|c| tw.product.get(c, i)).max().unwrap();
            assert_eq!(tw.v_star[i], best_v);
        }
    }

    #[test]
    fn walk_lengths_within_bounds() {
        let e = Ensemble::build(reference::eight_node_generators()).unwrap();
        let r = optimal_walk_lengths(&e, &reference::eight_node_word()).unwrap();
        assert!(r.within_bounds(), "{:?}", r.violations);
        assert_eq!(r.w_len[0], Some(0));
        assert_eq!(r.w_bound[0], Some(4.0));
        // node 6: (w*_6 - α_6)/λ* + 4
        let b6 = r.w_bound[5].unwrap();
        assert!(r.w_len[5].unwrap() as f64 <= b6);
    }

    #[test]
    fn acyclic_avoiding_graph_uses_n_minus_q() {
        // critical loop at node 1, node 2 has no cycle avoiding node 1
        let a: MaxPlusMatrix = "0 -1; -2 e".parse().unwrap();
        let e = Ensemble::build(vec![a]).unwrap();
        assert!(e.lambda_star.is_epsilon());
        let r = optimal_walk_lengths(&e, &"1,1,1".parse().unwrap()).unwrap();
        assert_eq!(r.w_bound[1], Some(1.0));
        assert_eq!(r.w_len[1], Some(1));
    }

    #[test]
    fn rejects_nonnegative_lambda_star() {
        // the supremum has a positive 2-cycle on nodes 1, 2, leaving the 0-loop at node 3 outside it
        let a: MaxPlusMatrix = "0 2 -1; -3 e e; -1 e 0".parse().unwrap();
        let b: MaxPlusMatrix = "-5 -3 -1; 2 e e; -1 e 0".parse().unwrap();
        let e = Ensemble::build(vec![a, b]).unwrap();
        assert!(!e.report.sup_normalized);
        assert_eq!(e.lambda_star, MaxPlus::ZERO);
        assert!(matches!(
            optimal_walk_lengths(&e, &"1".parse().unwrap()),
            Err(Error::NonNegativeLambdaStar { .. })
        ));
    }
}
