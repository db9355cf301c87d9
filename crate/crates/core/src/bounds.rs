//! Transient bounds: Wielandt and Schwarz numbers, the weak (upper-bound) threshold
//! and the explicit threshold for the strongly connected critical case.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::csr::is_csr;
use crate::ensemble::{Ensemble, Profile};
use crate::error::{Error, Result};
use crate::semiring::{MaxPlus, MaxPlusMatrix};
use crate::trellis::{first_passage_weights, require_negative_lambda_star, Word};

const SLACK: f64 = 1e-9;

/// `(n−1)² + 1` for `n ≥ 1`, and 0 for `n = 0`.
pub fn wielandt(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (n - 1) * (n - 1) + 1
    }
}

/// `γ·Wi(⌊n/γ⌋) + n mod γ`.
pub fn schwarz(gamma: usize, n: usize) -> usize {
    assert!(gamma >= 1, "cyclicity must be positive");
    gamma * wielandt(n / gamma) + n % gamma
}

/// `num/λ*`, taken as 0 when λ* = ε (no walk avoids the critical nodes for long).
fn over_lambda(num: f64, lambda_star: MaxPlus) -> f64 {
    lambda_star.value().map_or(0.0, |l| num / l)
}

fn max_finite(m: &MaxPlusMatrix) -> Option<(f64, usize, usize)> {
    m.entries()
        .filter_map(|(i, j, x)| x.value().map(|v| (v, i, j)))
        .fold(None, |best, cur| match best {
            Some((b, _, _)) if b >= cur.0 => best,
            _ => Some(cur),
        })
}

/// `(top_ij − γ_ij)/λ* + (n − q)` wherever both `top_ij` and `γ_ij` are finite.
fn avoiding_values(e: &Ensemble, top: &MaxPlusMatrix, gamma: &MaxPlusMatrix) -> MaxPlusMatrix {
    let slack = (e.n() - e.critical.q()) as f64;
    MaxPlusMatrix::from_fn(e.n(), e.n(), |i, j| match (top.get(i, j).value(), gamma.get(i, j).value()) {
        (Some(u), Some(g)) => MaxPlus::finite(over_lambda(u - g, e.lambda_star) + slack),
        _ => MaxPlus::EPSILON,
    })
}

/// Smallest integer strictly above `x` (and at least 1).
fn strictly_above(x: Option<f64>) -> usize {
    match x {
        None => 1,
        Some(v) if v < 1.0 => 1,
        Some(v) => (v + SLACK).floor() as usize + 1,
    }
}

/// Smallest integer `≥ x` (and at least 1).
fn at_least(x: f64) -> usize {
    if x <= 1.0 {
        1
    } else {
        (x - SLACK).ceil() as usize
    }
}

/// Word-specific upper-bound condition, built from Γ(k) itself.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImplicitWeakBound {
    pub k: usize,
    pub values: MaxPlusMatrix,
    pub max: Option<f64>,
    /// `k` exceeds every value.
    pub satisfied: bool,
}

pub fn weak_bound_implicit(e: &Ensemble, w: &Word) -> Result<ImplicitWeakBound> {
    require_negative_lambda_star(e)?;
    let product = crate::trellis::gamma_product(e, w)?;
    let gamma = e.path_weights()?.gamma_avoid;
    let values = avoiding_values(e, &product, &gamma);
    let max = max_finite(&values).map(|m| m.0);
    Ok(ImplicitWeakBound {
        k: w.len(),
        satisfied: w.len() >= strictly_above(max),
        values,
        max,
    })
}

/// Outcome of the search for the smallest length satisfying the explicit weak condition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakBound {
    pub k: Option<usize>,
    pub k_max: usize,
    /// Values `(u^k_ij − γ_ij)/λ* + (n − q)` at the reported `k`, or at `k_max` if none was found.
    pub values: MaxPlusMatrix,
    /// Largest finite value, with its position.
    pub realized_max: Option<(f64, usize, usize)>,
    pub diagnostics: Vec<String>,
}

/// Smallest `k ≤ k_max` exceeding every `(u^k_ij − γ_ij)/λ* + (n − q)`.
pub fn weak_csr_bound(e: &Ensemble, k_max: usize) -> Result<WeakBound> {
    require_negative_lambda_star(e)?;
    if k_max == 0 {
        return Err(Error::Precondition("k_max must be positive".into()));
    }
    let gamma = e.path_weights()?.gamma_avoid;
    let mut u = e.a_inf.clone();
    let mut last = None;
    for k in 1..=k_max {
        if k > 1 {
            u = u.multiply(&e.a_inf)?;
        }
        let values = avoiding_values(e, &u, &gamma);
        let realized_max = max_finite(&values);
        if k >= strictly_above(realized_max.map(|m| m.0)) {
            return Ok(WeakBound {
                k: Some(k),
                k_max,
                values,
                realized_max,
                diagnostics: Vec::new(),
            });
        }
        last = Some((values, realized_max));
    }
    let (values, realized_max) = last.expect("k_max >= 1");
    Ok(WeakBound {
        k: None,
        k_max,
        diagnostics: vec![format!(
            "no k up to {k_max} exceeds the condition; last maximum {:?}",
            realized_max.map(|m| m.0)
        )],
        values,
        realized_max,
    })
}

/// Which branch of the ambient bound attains its maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    Schwarz,
    Avoiding,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub profile: Profile,
    pub lambda_star: MaxPlus,
    pub n: usize,
    pub q: usize,
    pub gamma: usize,
    pub schwarz: usize,
    /// `(w_i + v_j − α_i − β_j)/λ* + 2(n−q) + Sch(γ, q)`.
    pub branch_one: MaxPlusMatrix,
    /// `(w_i + v_j − γ_ij)/λ* + (n−q+1)`, ε where γ_ij = ε.
    pub branch_two: MaxPlusMatrix,
    pub ambient_bound: f64,
    pub ambient_k: usize,
    /// Branch and entry attaining the bound.
    pub argmax: (Branch, usize, usize),
}

fn require_p0(e: &Ensemble) -> Result<()> {
    if e.report.profile != Profile::P0 {
        let mut msg = format!(
            "profile {} (critical components {}, critical cyclicity {}, ambient cyclicity {})",
            e.report.profile, e.report.critical_components, e.report.critical_cyclicity, e.report.ambient_cyclicity
        );
        for d in &e.report.diagnostics {
            msg.push_str("; ");
            msg.push_str(d);
        }
        return Err(Error::Precondition(msg));
    }
    Ok(())
}

fn branches(e: &Ensemble, w: &[MaxPlus], v: &[MaxPlus]) -> Result<(MaxPlusMatrix, MaxPlusMatrix, usize)> {
    let pw = e.path_weights()?;
    let n = e.n();
    let q = e.critical.q();
    let sch = schwarz(e.critical.global_cyclicity, q);
    let nq = (n - q) as f64;
    let u = |i: usize, j: usize| w[i].otimes(v[j]);
    let branch_one = MaxPlusMatrix::from_fn(n, n, |i, j| {
        match (u(i, j).value(), pw.alpha[i].value(), pw.beta[j].value()) {
            (Some(u), Some(a), Some(b)) => {
                MaxPlus::finite(over_lambda(u - a - b, e.lambda_star) + 2.0 * nq + sch as f64)
            }
            _ => MaxPlus::EPSILON,
        }
    });
    let branch_two = MaxPlusMatrix::from_fn(n, n, |i, j| {
        match (u(i, j).value(), pw.gamma_avoid.get(i, j).value()) {
            (Some(u), Some(g)) => MaxPlus::finite(over_lambda(u - g, e.lambda_star) + nq + 1.0),
            _ => MaxPlus::EPSILON,
        }
    });
    Ok((branch_one, branch_two, sch))
}

fn combine(one: &MaxPlusMatrix, two: &MaxPlusMatrix) -> Result<(f64, (Branch, usize, usize))> {
    let a = max_finite(one);
    let b = max_finite(two);
    match (a, b) {
        (Some(a), Some(b)) if b.0 > a.0 => Ok((b.0, (Branch::Avoiding, b.1, b.2))),
        (Some(a), _) => Ok((a.0, (Branch::Schwarz, a.1, a.2))),
        (None, Some(b)) => Ok((b.0, (Branch::Avoiding, b.1, b.2))),
        (None, None) => Err(Error::Consistency("both bound branches are empty".into())),
    }
}

/// Explicit length after which every product is CSR, for a strongly connected
/// critical digraph whose cyclicity equals the ambient one.
pub fn ambient_csr_bound(e: &Ensemble) -> Result<BoundReport> {
    require_p0(e)?;
    require_negative_lambda_star(e)?;
    let pw = e.path_weights()?;
    let (branch_one, branch_two, sch) = branches(e, &pw.w_inf, &pw.v_inf)?;
    let (ambient_bound, argmax) = combine(&branch_one, &branch_two)?;
    Ok(BoundReport {
        profile: e.report.profile,
        lambda_star: e.lambda_star,
        n: e.n(),
        q: e.critical.q(),
        gamma: e.critical.global_cyclicity,
        schwarz: sch,
        branch_one,
        branch_two,
        ambient_bound,
        ambient_k: at_least(ambient_bound),
        argmax,
    })
}

/// Entrywise checks of the closed form of Γ(k) in terms of w* and v*.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueCheckReport {
    pub k: usize,
    /// Same bound as [`ambient_csr_bound`] but with the word's own w*, v*.
    pub implicit_bound: f64,
    pub length_condition_met: bool,
    pub unreachable_checked: usize,
    pub reachable_checked: usize,
    pub failures: Vec<String>,
}

impl ValueCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// If the class of `i` does not reach the class of `j` in `k` steps, Γ(k)_ij = ε;
/// otherwise Γ(k)_ij = w*_i + v*_j and equals the CSR entry.
pub fn closed_form_value_check(e: &Ensemble, w: &Word) -> Result<ValueCheckReport> {
    require_p0(e)?;
    require_negative_lambda_star(e)?;
    let tw = first_passage_weights(e, w)?;
    let (one, two, _) = branches(e, &tw.w_star, &tw.v_star)?;
    let (implicit_bound, _) = combine(&one, &two)?;
    let k = w.len();
    let csr = is_csr(e, w)?.csr;
    let mut report = ValueCheckReport {
        k,
        implicit_bound,
        length_condition_met: k as f64 + SLACK >= implicit_bound,
        unreachable_checked: 0,
        reachable_checked: 0,
        failures: Vec::new(),
    };
    let n = e.n();
    for i in 0..n {
        for j in 0..n {
            let g = tw.product.get(i, j);
            let reach = e
                .critical
                .ambient_reachable(i, j, k)
                .ok_or_else(|| Error::Precondition("ambient digraph is not strongly connected".into()))?;
            if !reach {
                report.unreachable_checked += 1;
                if !g.is_epsilon() || !csr.get(i, j).is_epsilon() {
                    report.failures.push(format!(
                        "({}, {}): classes do not connect in {k} steps but Γ = {g}, CSR = {}",
                        i + 1,
                        j + 1,
                        csr.get(i, j)
                    ));
                }
            } else {
                report.reachable_checked += 1;
                let expected = tw.w_star[i].otimes(tw.v_star[j]);
                if g != expected || csr.get(i, j) != expected {
                    report.failures.push(format!(
                        "({}, {}): Γ = {g}, w* + v* = {expected}, CSR = {}",
                        i + 1,
                        j + 1,
                        csr.get(i, j)
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Uniformly random word of length `k` over `generators` letters.
pub fn random_word(rng: &mut impl Rng, generators: usize, k: usize) -> Word {
    Word::new((0..k).map(|_| rng.gen_range(0..generators)).collect()).expect("k >= 1")
}

/// Result of testing sampled words of one length.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SampleReport {
    pub k: usize,
    pub samples: usize,
    /// Words whose product equals its CSR product.
    pub csr_equal: usize,
    /// Words whose product is entrywise at most its CSR product.
    pub csr_dominated: usize,
    /// First few words that are not CSR, in 1-based text form.
    pub counterexamples: Vec<String>,
}

/// Checks `samples` random words of length `k`, drawn from a seeded ChaCha stream.
pub fn sample_words(e: &Ensemble, k: usize, samples: usize, seed: u64) -> Result<SampleReport> {
    if k == 0 {
        return Err(Error::EmptyWord);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SampleReport {
        k,
        samples,
        ..Default::default()
    };
    for _ in 0..samples {
        let word = random_word(&mut rng, e.generator_count(), k);
        let v = is_csr(e, &word)?;
        if v.holds {
            report.csr_equal += 1;
        } else if report.counterexamples.len() < 5 {
            report.counterexamples.push(word.to_string());
        }
        if v.product.le(&v.csr) {
            report.csr_dominated += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexamples::{build_family, FamilyId};
    use crate::reference;

    fn m(s: &str) -> MaxPlusMatrix {
        s.parse().unwrap()
    }

    #[test]
    fn wielandt_numbers() {
        assert_eq!(wielandt(0), 0);
        assert_eq!(wielandt(1), 1);
        assert_eq!(wielandt(4), 10);
    }

    #[test]
    fn schwarz_numbers() {
        for n in 0..10 {
            assert_eq!(schwarz(1, n), wielandt(n));
        }
        assert_eq!(schwarz(2, 4), 4);
        assert_eq!(schwarz(3, 3), 3);
        assert_eq!(schwarz(2, 5), 2 * wielandt(2) + 1);
    }

    #[test]
    fn eight_node_branches_match_printed_tables() {
        let e = Ensemble::build(reference::eight_node_generators()).unwrap();
        let r = ambient_csr_bound(&e).unwrap();
        assert!(reference::printed_mismatches(&r.branch_one, reference::EIGHT_NODE_BRANCH_ONE_PRINTED).is_empty());
        assert!(reference::printed_mismatches(&r.branch_two, reference::EIGHT_NODE_BRANCH_TWO_PRINTED).is_empty());
        assert_eq!(r.schwarz, 4);
        assert!(r.branch_one.get(6, 7).approx_eq(MaxPlus::finite(-64.0 / -4.5 + 12.0), 1e-12));
        assert!(r.branch_two.get(6, 7).approx_eq(MaxPlus::finite(21.2), 0.05));
        // the table maximum sits at (7, 8) of the first branch
        assert_eq!(r.argmax, (Branch::Schwarz, 6, 7));
        assert!((r.ambient_bound - 236.0 / 9.0).abs() < 1e-9);
        assert_eq!(r.ambient_k, 27);
    }

    #[test]
    fn eight_node_value_check() {
        let e = Ensemble::build(reference::eight_node_generators()).unwrap();
        let w = reference::eight_node_word();
        let r = closed_form_value_check(&e, &w).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.unreachable_checked > 0);
        let tw = first_passage_weights(&e, &w).unwrap();
        assert_eq!(tw.product.get(0, 1), MaxPlus::EPSILON);
        assert_eq!(tw.product.get(6, 0), MaxPlus::from(-11));
        assert_eq!(tw.w_star[6].otimes(tw.v_star[0]), MaxPlus::from(-11));
    }

    #[test]
    fn non_ambient_profile_is_rejected() {
        let e = Ensemble::build(build_family(FamilyId::P3Four).generators).unwrap();
        assert!(matches!(ambient_csr_bound(&e), Err(Error::Precondition(_))));
    }

    #[test]
    fn single_loop_toy_bound_covers_true_transient() {
        let a = m("0 -1 e; -1 -2 -1; e -1 -3");
        let e = Ensemble::build(vec![a.clone()]).unwrap();
        let r = ambient_csr_bound(&e).unwrap();
        assert!(r.ambient_bound >= (schwarz(1, 1) + 2 * 2) as f64 - 1e-9);
        // one generator: CSR holds for every length from the true transient on
        let first_good = (1..=r.ambient_k + 5)
            .rev()
            .take_while(|&k| is_csr(&e, &Word::new(vec![0; k]).unwrap()).unwrap().holds)
            .last()
            .unwrap();
        assert!(first_good <= r.ambient_k);
    }

    #[test]
    fn weak_bound_vacuous_without_avoiding_walks() {
        // only node 2 is non-critical and has no loop: every γ_ij is ε
        let a = m("0 -1; -1 e");
        let e = Ensemble::build(vec![a]).unwrap();
        let wb = weak_csr_bound(&e, 5).unwrap();
        assert_eq!(wb.k, Some(1));
        assert_eq!(wb.realized_max, None);
    }

    #[test]
    fn weak_bound_on_eight_nodes_dominates() {
        let e = Ensemble::build(reference::eight_node_generators()).unwrap();
        let wb = weak_csr_bound(&e, 200).unwrap();
        let k = wb.k.unwrap();
        let s = sample_words(&e, k, 100, 7).unwrap();
        assert_eq!(s.csr_dominated, 100);
    }

    #[test]
    fn weak_bound_exists_for_three_loops_but_equality_fails() {
        let f = build_family(FamilyId::P3Four);
        let e = Ensemble::build(f.generators).unwrap();
        let k = weak_csr_bound(&e, 200).unwrap().k.unwrap();
        let t = k.max(2);
        let v = is_csr(&e, &Word::power_then(0, t, 1)).unwrap();
        assert!(!v.holds);
        assert!(v.product.le(&v.csr));
    }

    #[test]
    fn implicit_weak_bound_at_reference_word() {
        let e = Ensemble::build(reference::eight_node_generators()).unwrap();
        let r = weak_bound_implicit(&e, &reference::eight_node_word()).unwrap();
        assert_eq!(r.k, 24);
        assert!(r.max.is_some());
    }

    #[test]
    fn sampling_is_deterministic() {
        let e = Ensemble::build(reference::eight_node_generators()).unwrap();
        assert_eq!(sample_words(&e, 10, 20, 3).unwrap(), sample_words(&e, 10, 20, 3).unwrap());
    }

    #[test]
    fn threshold_rounding() {
        assert_eq!(strictly_above(None), 1);
        assert_eq!(strictly_above(Some(3.0)), 4);
        assert_eq!(strictly_above(Some(3.2)), 4);
        assert_eq!(at_least(23.8), 24);
        assert_eq!(at_least(24.0), 24);
        assert_eq!(at_least(-5.0), 1);
    }
}
