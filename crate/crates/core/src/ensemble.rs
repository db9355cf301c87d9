//! Generator sets: normalisation, common visualisation, A^sup / A^inf / B^sup,
//! assumption checks and path-weight tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, CriticalStructure, WeightedDigraph, CRITICAL_TOLERANCE};
use crate::semiring::{MaxPlus, MaxPlusMatrix, LAMBDA_TOLERANCE};

/// On-disk form: `{"generators": [matrix, …]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleFile {
    pub generators: Vec<MaxPlusMatrix>,
}

/// Relationship between the critical digraph and the ambient digraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Profile {
    /// Strongly connected critical digraph whose cyclicity equals the ambient one.
    P0,
    /// Primitive ambient digraph, single critical component with cyclicity above 1.
    P1,
    /// Single critical component with cyclicity above the ambient cyclicity, which exceeds 1.
    P2,
    /// Several critical components.
    P3,
    Unclassified,
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Profile::P0 => "P0",
            Profile::P1 => "P1",
            Profile::P2 => "P2",
            Profile::P3 => "P3",
            Profile::Unclassified => "unclassified",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssumptionReport {
    /// A: every generator is irreducible.
    pub irreducible: bool,
    /// B: common digraph and common critical digraph, shared with A^sup.
    pub strongly_equivalent: bool,
    /// C: A^inf has the same digraph as the generators.
    pub inf_equivalent: bool,
    /// D1: λ(A^sup) = 0.
    pub sup_normalized: bool,
    /// D2: every generator and A^sup are 0 on critical edges and ≤ 0 elsewhere.
    pub visualised: bool,
    pub profile: Profile,
    pub critical_components: usize,
    pub critical_cyclicity: usize,
    pub ambient_cyclicity: usize,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Ensemble {
    /// Input matrices.
    pub generators: Vec<MaxPlusMatrix>,
    /// Maximum cycle mean of each input matrix.
    pub lambdas: Vec<f64>,
    /// Each generator shifted by minus its maximum cycle mean.
    pub normalized: Vec<MaxPlusMatrix>,
    /// Scaling vector `x` of the common visualisation.
    pub visualisation: Vec<f64>,
    /// `X⁻¹ A X` for every normalised generator. Products use these.
    pub visualised: Vec<MaxPlusMatrix>,
    pub a_sup: MaxPlusMatrix,
    pub a_inf: MaxPlusMatrix,
    /// A^sup with critical rows and columns set to ε.
    pub b_sup: MaxPlusMatrix,
    pub lambda_star: MaxPlus,
    pub critical: CriticalStructure,
    pub report: AssumptionReport,
}

/// Optimal path weights on A^sup and A^inf relative to the critical nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct PathWeights {
    pub alpha: Vec<MaxPlus>,
    pub beta: Vec<MaxPlus>,
    /// Best walk of positive length between two nodes with no critical node on it.
    pub gamma_avoid: MaxPlusMatrix,
    pub w_inf: Vec<MaxPlus>,
    pub v_inf: Vec<MaxPlus>,
}

fn entrywise(ms: &[MaxPlusMatrix], f: fn(&MaxPlusMatrix, &MaxPlusMatrix) -> Result<MaxPlusMatrix>) -> Result<MaxPlusMatrix> {
    let mut acc = ms[0].clone();
    for m in &ms[1..] {
        acc = f(&acc, m)?;
    }
    Ok(acc)
}

fn is_visualised(ms: &[MaxPlusMatrix], critical_edges: &[(usize, usize)]) -> bool {
    ms.iter().all(|m| {
        m.entries().all(|(_, _, x)| x.to_f64() <= CRITICAL_TOLERANCE)
            && critical_edges
                .iter()
                .all(|&(i, j)| m.get(i, j).approx_eq(MaxPlus::ZERO, CRITICAL_TOLERANCE))
    })
}

fn same_critical_digraph(a: &CriticalStructure, b: &CriticalStructure) -> bool {
    a.critical_nodes == b.critical_nodes && a.critical_edges == b.critical_edges
}

/// Subeigenvector of `sup` (assumed to satisfy λ ≤ 0): row maxima of the Kleene star over
/// the critical columns, or over all columns if that leaves some entry ε.
fn subeigenvector(sup: &MaxPlusMatrix, critical_nodes: &[usize]) -> Vec<f64> {
    let star = sup.star_unchecked();
    let over = |cols: &mut dyn Iterator<Item = usize>, i: usize| {
        cols.map(|c| star.get(i, c)).fold(MaxPlus::EPSILON, MaxPlus::oplus)
    };
    let n = sup.rows();
    let x: Vec<MaxPlus> = (0..n)
        .map(|i| over(&mut critical_nodes.iter().copied(), i))
        .collect();
    if x.iter().all(|v| v.is_finite()) {
        x.into_iter().map(MaxPlus::to_f64).collect()
    } else {
        (0..n).map(|i| over(&mut (0..n), i).to_f64()).collect()
    }
}

impl Ensemble {
    pub fn build(generators: Vec<MaxPlusMatrix>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyEnsemble)?;
        if !first.is_square() {
            return Err(Error::NotSquare {
                rows: first.rows(),
                cols: first.cols(),
            });
        }
        let n = first.rows();
        let mut lambdas = Vec::with_capacity(generators.len());
        for (index, g) in generators.iter().enumerate() {
            if g.rows() != n || g.cols() != n {
                return Err(Error::SizeMismatch {
                    index,
                    expected: n,
                    found: if g.rows() != n { g.rows() } else { g.cols() },
                });
            }
            let lambda = graph::matrix_max_cycle_mean(g)?
                .value()
                .ok_or(Error::AcyclicGenerator { index })?;
            lambdas.push(lambda);
        }
        let normalized: Vec<MaxPlusMatrix> = generators
            .iter()
            .zip(&lambdas)
            .map(|(g, &l)| g.scale(MaxPlus::finite(-l)))
            .collect();

        let sup0 = entrywise(&normalized, MaxPlusMatrix::oplus)?;
        let lambda_sup0 = graph::matrix_max_cycle_mean(&sup0)?.to_f64();
        let visualisation = if lambda_sup0 > LAMBDA_TOLERANCE {
            // no subeigenvector exists; D1 will report the failure
            vec![0.0; n]
        } else {
            let crit0 = graph::critical_structure(&sup0)?;
            if is_visualised(&normalized, &crit0.critical_edges) {
                vec![0.0; n]
            } else {
                subeigenvector(&sup0, &crit0.critical_nodes)
            }
        };
        let visualised: Vec<MaxPlusMatrix> = normalized
            .iter()
            .map(|m| m.diagonal_similarity(&visualisation))
            .collect::<Result<_>>()?;

        let a_sup = entrywise(&visualised, MaxPlusMatrix::oplus)?;
        let a_inf = entrywise(&visualised, MaxPlusMatrix::entrywise_min)?;
        let critical = graph::critical_structure(&a_sup)?;
        let mut b_sup = a_sup.clone();
        for &c in &critical.critical_nodes {
            for k in 0..n {
                b_sup.set(c, k, MaxPlus::EPSILON);
                b_sup.set(k, c, MaxPlus::EPSILON);
            }
        }
        let lambda_star = graph::matrix_max_cycle_mean(&b_sup)?;

        let mut ensemble = Ensemble {
            generators,
            lambdas,
            normalized,
            visualisation,
            visualised,
            a_sup,
            a_inf,
            b_sup,
            lambda_star,
            critical,
            report: AssumptionReport {
                irreducible: false,
                strongly_equivalent: false,
                inf_equivalent: false,
                sup_normalized: false,
                visualised: false,
                profile: Profile::Unclassified,
                critical_components: 0,
                critical_cyclicity: 0,
                ambient_cyclicity: 0,
                diagnostics: Vec::new(),
            },
        };
        ensemble.report = ensemble.check_assumptions()?;
        Ok(ensemble)
    }

    pub fn n(&self) -> usize {
        self.a_sup.rows()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Runs checks A, B, C, D1, D2 and classifies the profile.
    pub fn check_assumptions(&self) -> Result<AssumptionReport> {
        let mut diagnostics = Vec::new();

        let mut irreducible = true;
        for (k, g) in self.generators.iter().enumerate() {
            if !graph::is_irreducible(&WeightedDigraph::from_matrix(g)?) {
                irreducible = false;
                diagnostics.push(format!("generator {} is reducible", k + 1));
            }
        }

        let mut strongly_equivalent = true;
        for (k, g) in self.visualised.iter().enumerate() {
            if !g.same_support(&self.a_sup) {
                strongly_equivalent = false;
                diagnostics.push(format!("generator {} has a different digraph from A^sup", k + 1));
                continue;
            }
            let cs = graph::critical_structure(g)?;
            if !same_critical_digraph(&cs, &self.critical) {
                strongly_equivalent = false;
                diagnostics.push(format!(
                    "generator {} has a different critical digraph from A^sup",
                    k + 1
                ));
            }
        }

        let inf_equivalent = self.a_inf.same_support(&self.a_sup);
        if !inf_equivalent {
            diagnostics.push("A^inf has a different digraph from the generators".into());
        }

        let sup_normalized = self.critical.lambda.abs() <= LAMBDA_TOLERANCE;
        if !sup_normalized {
            diagnostics.push(format!(
                "lambda(A^sup) = {}, no common visualisation applied",
                self.critical.lambda
            ));
        }

        let mut all = self.visualised.clone();
        all.push(self.a_sup.clone());
        let visualised = is_visualised(&all, &self.critical.critical_edges);
        if !visualised {
            diagnostics.push("generators are not visualised on the common critical digraph".into());
        }

        let m = self.critical.components.len();
        let gamma = self.critical.global_cyclicity;
        let r = self.critical.ambient_cyclicity;
        let profile = if m > 1 {
            Profile::P3
        } else if gamma == r {
            Profile::P0
        } else if r == 1 {
            Profile::P1
        } else if gamma > r {
            Profile::P2
        } else {
            Profile::Unclassified
        };

        Ok(AssumptionReport {
            irreducible,
            strongly_equivalent,
            inf_equivalent,
            sup_normalized,
            visualised,
            profile,
            critical_components: m,
            critical_cyclicity: gamma,
            ambient_cyclicity: r,
            diagnostics,
        })
    }

    pub fn path_weights(&self) -> Result<PathWeights> {
        let crit = &self.critical.critical_nodes;
        let n = self.n();
        let star_sup = self.a_sup.kleene_star()?;
        let star_inf = self.a_inf.kleene_star()?;
        let to_crit = |s: &MaxPlusMatrix, i: usize| {
            crit.iter().map(|&c| s.get(i, c)).fold(MaxPlus::EPSILON, MaxPlus::oplus)
        };
        let from_crit = |s: &MaxPlusMatrix, j: usize| {
            crit.iter().map(|&c| s.get(c, j)).fold(MaxPlus::EPSILON, MaxPlus::oplus)
        };
        Ok(PathWeights {
            alpha: (0..n).map(|i| to_crit(&star_sup, i)).collect(),
            beta: (0..n).map(|j| from_crit(&star_sup, j)).collect(),
            gamma_avoid: self.b_sup.metric_matrix()?,
            w_inf: (0..n).map(|i| to_crit(&star_inf, i)).collect(),
            v_inf: (0..n).map(|j| from_crit(&star_inf, j)).collect(),
        })
    }

    /// `(A^inf)^k`.
    pub fn u_k(&self, k: usize) -> Result<MaxPlusMatrix> {
        if k == 0 {
            return Err(Error::Precondition("u_k needs k >= 1".into()));
        }
        self.a_inf.power(k)
    }
}

pub fn build_ensemble(generators: Vec<MaxPlusMatrix>) -> Result<Ensemble> {
    Ensemble::build(generators)
}

pub fn check_assumptions(e: &Ensemble) -> Result<AssumptionReport> {
    e.check_assumptions()
}

pub fn path_weights(e: &Ensemble) -> Result<PathWeights> {
    e.path_weights()
}

pub fn u_k(e: &Ensemble, k: usize) -> Result<MaxPlusMatrix> {
    e.u_k(k)
}
