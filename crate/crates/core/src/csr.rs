//! CSR terms of a product, the CSR equality test and the rank-compressed factorisation.

use crate::bounds::wielandt;
use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::graph::{CriticalComponent, CriticalStructure};
use crate::semiring::{MaxPlus, MaxPlusMatrix};
use crate::trellis::{gamma_product, Word};

/// Smallest `T ≥ 1` with `S^T = S^{T+γ}`, searched up to `Wi(n) + γ`.
pub fn periodicity_threshold(s: &MaxPlusMatrix, gamma: usize) -> Result<usize> {
    if !s.is_square() {
        return Err(Error::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    if gamma == 0 {
        return Err(Error::Precondition("period must be positive".into()));
    }
    let cap = wielandt(s.rows()) + gamma;
    let mut powers = vec![MaxPlusMatrix::identity(s.rows()), s.clone()];
    for t in 1..=cap {
        while powers.len() <= t + gamma {
            let next = powers.last().expect("non-empty").multiply(s)?;
            powers.push(next);
        }
        if powers[t] == powers[t + gamma] {
            return Ok(t);
        }
    }
    Err(Error::PeriodicityCap { gamma, cap })
}

/// C, S, R terms of one product, globally and per critical component.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrTerms {
    pub k: usize,
    pub gamma: usize,
    pub gamma_nu: Vec<usize>,
    pub product: MaxPlusMatrix,
    pub s_global: MaxPlusMatrix,
    pub s_components: Vec<MaxPlusMatrix>,
    /// T(S).
    pub threshold: usize,
    /// T(S_ν).
    pub thresholds_nu: Vec<usize>,
    /// Smallest t with tγ ≥ T(S).
    pub t_exponent: usize,
    /// t_ν = tγ/γ_ν, so that t_ν γ_ν ≥ tγ.
    pub t_nu: Vec<usize>,
    /// v = (t+1)γ − (k mod γ).
    pub v: usize,
    pub v_nu: Vec<usize>,
    pub c_global: MaxPlusMatrix,
    pub r_global: MaxPlusMatrix,
    pub c_components: Vec<MaxPlusMatrix>,
    pub r_components: Vec<MaxPlusMatrix>,
    /// S^{k mod γ}.
    pub s_residue: MaxPlusMatrix,
    /// S_ν^{k mod γ_ν}.
    pub s_residue_nu: Vec<MaxPlusMatrix>,
    pub components: Vec<CriticalComponent>,
}

impl CsrTerms {
    /// Terms for a given product of length `k` using the smallest admissible t.
    pub fn from_product(critical: &CriticalStructure, product: MaxPlusMatrix, k: usize) -> Result<Self> {
        Self::build(critical, product, k, None)
    }

    /// Terms with an explicit `t`; requires `tγ ≥ T(S)`.
    pub fn with_t(critical: &CriticalStructure, product: MaxPlusMatrix, k: usize, t: usize) -> Result<Self> {
        Self::build(critical, product, k, Some(t))
    }

    fn build(critical: &CriticalStructure, product: MaxPlusMatrix, k: usize, t: Option<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyWord);
        }
        let gamma = critical.global_cyclicity;
        let s_global = critical.s_matrix();
        let threshold = periodicity_threshold(&s_global, gamma)?;
        let min_t = threshold.div_ceil(gamma);
        let t_exponent = match t {
            None => min_t,
            Some(t) if t >= min_t => t,
            Some(t) => {
                return Err(Error::Precondition(format!(
                    "t = {t} gives tγ = {} below T(S) = {threshold}",
                    t * gamma
                )))
            }
        };
        let v = (t_exponent + 1) * gamma - k % gamma;
        let s_v = s_global.power(v)?;
        let c_global = product.multiply(&s_v)?;
        let r_global = s_v.multiply(&product)?;
        let s_residue = s_global.power(k % gamma)?;

        let m = critical.components.len();
        let mut gamma_nu = Vec::with_capacity(m);
        let mut s_components = Vec::with_capacity(m);
        let mut thresholds_nu = Vec::with_capacity(m);
        let mut t_nu = Vec::with_capacity(m);
        let mut v_nu = Vec::with_capacity(m);
        let mut c_components = Vec::with_capacity(m);
        let mut r_components = Vec::with_capacity(m);
        let mut s_residue_nu = Vec::with_capacity(m);
        for (idx, comp) in critical.components.iter().enumerate() {
            let g = comp.cyclicity;
            let s = critical.s_component(idx);
            let thr = periodicity_threshold(&s, g)?;
            let tn = t_exponent * gamma / g;
            if tn * g < thr {
                return Err(Error::Consistency(format!(
                    "component {} exponent t_nu = {tn} is below its threshold {thr}",
                    idx + 1
                )));
            }
            let vn = (tn + 1) * g - k % g;
            let sv = s.power(vn)?;
            c_components.push(product.multiply(&sv)?);
            r_components.push(sv.multiply(&product)?);
            s_residue_nu.push(s.power(k % g)?);
            gamma_nu.push(g);
            s_components.push(s);
            thresholds_nu.push(thr);
            t_nu.push(tn);
            v_nu.push(vn);
        }

        Ok(CsrTerms {
            k,
            gamma,
            gamma_nu,
            product,
            s_global,
            s_components,
            threshold,
            thresholds_nu,
            t_exponent,
            t_nu,
            v,
            v_nu,
            c_global,
            r_global,
            c_components,
            r_components,
            s_residue,
            s_residue_nu,
            components: critical.components.clone(),
        })
    }

    /// `C_ν ⊗ S_ν^{k mod γ_ν} ⊗ R_ν`.
    pub fn component_product(&self, idx: usize) -> Result<MaxPlusMatrix> {
        self.c_components[idx]
            .multiply(&self.s_residue_nu[idx])?
            .multiply(&self.r_components[idx])
    }
}

pub fn csr_terms(e: &Ensemble, w: &Word) -> Result<CsrTerms> {
    let product = gamma_product(e, w)?;
    CsrTerms::from_product(&e.critical, product, w.len())
}

/// `C ⊗ S^{k mod γ} ⊗ R`, checked against the sum of component products and `Γ ⊗ S^v ⊗ Γ`.
pub fn csr_product(terms: &CsrTerms) -> Result<MaxPlusMatrix> {
    let global = terms
        .c_global
        .multiply(&terms.s_residue)?
        .multiply(&terms.r_global)?;
    let n = terms.product.rows();
    let mut sum = MaxPlusMatrix::epsilon(n, n);
    for idx in 0..terms.components.len() {
        sum = sum.oplus(&terms.component_product(idx)?)?;
    }
    if sum != global {
        return Err(Error::Consistency(
            "global CSR product differs from the sum of component products".into(),
        ));
    }
    let closed = terms
        .product
        .multiply(&terms.s_global.power(terms.v)?)?
        .multiply(&terms.product)?;
    if closed != global {
        return Err(Error::Consistency(
            "CSR product differs from Γ ⊗ S^v ⊗ Γ".into(),
        ));
    }
    Ok(global)
}

/// First entry where Γ(k) and its CSR product differ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Witness {
    pub row: usize,
    pub col: usize,
    pub product: MaxPlus,
    pub csr: MaxPlus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsrVerdict {
    pub holds: bool,
    pub product: MaxPlusMatrix,
    pub csr: MaxPlusMatrix,
    pub witness: Option<Witness>,
}

pub fn verdict_from_terms(terms: &CsrTerms) -> Result<CsrVerdict> {
    let csr = csr_product(terms)?;
    let witness = terms.product.first_difference(&csr).map(|(row, col)| Witness {
        row,
        col,
        product: terms.product.get(row, col),
        csr: csr.get(row, col),
    });
    Ok(CsrVerdict {
        holds: witness.is_none(),
        product: terms.product.clone(),
        csr,
        witness,
    })
}

pub fn is_csr(e: &Ensemble, w: &Word) -> Result<CsrVerdict> {
    verdict_from_terms(&csr_terms(e, w)?)
}

/// Factorisation `C′ ⊗ R′` of the CSR product through one node per cyclic class.
#[derive(Clone, Debug, PartialEq)]
pub struct RankFactors {
    /// n × Σγ_ν.
    pub c_prime: MaxPlusMatrix,
    /// Σγ_ν × n.
    pub r_prime: MaxPlusMatrix,
    pub rank_bound: usize,
    /// `(component, class, node)` for each column of C′.
    pub representatives: Vec<(usize, usize, usize)>,
}

pub fn rank_compress(terms: &CsrTerms) -> Result<RankFactors> {
    let n = terms.product.rows();
    let mut columns: Vec<Vec<MaxPlus>> = Vec::new();
    let mut rows: Vec<Vec<MaxPlus>> = Vec::new();
    let mut representatives = Vec::new();
    for (idx, comp) in terms.components.iter().enumerate() {
        let c = &terms.c_components[idx];
        let sr = terms.s_residue_nu[idx].multiply(&terms.r_components[idx])?;
        let reps = comp.representatives();
        for (&node, &class) in comp.nodes.iter().zip(&comp.classes) {
            let rep = reps[class];
            if c.column(node) != c.column(rep) || sr.row(node) != sr.row(rep) {
                return Err(Error::Consistency(format!(
                    "node {} and representative {} of class {class} in component {} disagree",
                    node + 1,
                    rep + 1,
                    idx + 1
                )));
            }
        }
        for (class, &rep) in reps.iter().enumerate() {
            columns.push(c.column(rep));
            rows.push(sr.row(rep).to_vec());
            representatives.push((idx, class, rep));
        }
    }
    let r = columns.len();
    let c_prime = MaxPlusMatrix::from_fn(n, r, |i, j| columns[j][i]);
    let r_prime = MaxPlusMatrix::from_fn(r, n, |i, j| rows[i][j]);
    let rebuilt = c_prime.multiply(&r_prime)?;
    if rebuilt != csr_product(terms)? {
        return Err(Error::Consistency("C' ⊗ R' differs from the CSR product".into()));
    }
    Ok(RankFactors {
        c_prime,
        r_prime,
        rank_bound: r,
        representatives,
    })
}

/// Outcome of the column/row projection identities on critical indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProjectionReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl ProjectionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn compare_projections(
    report: &mut ProjectionReport,
    label: &str,
    full: &MaxPlusMatrix,
    left: &MaxPlusMatrix,
    right: &MaxPlusMatrix,
    nodes: &[usize],
) {
    for &x in nodes {
        report.checks += 2;
        if full.column(x) != left.column(x) {
            report.failures.push(format!("{label}: column {} differs from C S^p", x + 1));
        }
        if full.row(x) != right.row(x) {
            report.failures.push(format!("{label}: row {} differs from S^p R", x + 1));
        }
    }
}

/// Columns with critical index equal those of `C S^p`; rows with critical index equal those of `S^p R`.
pub fn csr_critical_projections(terms: &CsrTerms) -> Result<ProjectionReport> {
    let mut report = ProjectionReport::default();
    for (idx, comp) in terms.components.iter().enumerate() {
        let cs = terms.c_components[idx].multiply(&terms.s_residue_nu[idx])?;
        let sr = terms.s_residue_nu[idx].multiply(&terms.r_components[idx])?;
        let full = cs.multiply(&terms.r_components[idx])?;
        compare_projections(&mut report, &format!("component {}", idx + 1), &full, &cs, &sr, &comp.nodes);
    }
    let cs = terms.c_global.multiply(&terms.s_residue)?;
    let sr = terms.s_residue.multiply(&terms.r_global)?;
    let full = cs.multiply(&terms.r_global)?;
    let all: Vec<usize> = terms.components.iter().flat_map(|c| c.nodes.iter().copied()).collect();
    compare_projections(&mut report, "global", &full, &cs, &sr, &all);
    Ok(report)
}
