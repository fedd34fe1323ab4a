//! Non-transversal rays of a quintic `G` and their classification.
//!
//! Candidates come from a [`CandidateSource`]; every reported ray is checked
//! exactly (`∂G = 0` in `Q(ζ_k)`). Completeness is certified separately from
//! the leading-term ideal of the Jacobian ideal `J = (∂_0 G, …, ∂_4 G)`:
//!
//! * Krull dimension 0 means `∂G` vanishes only at the origin, i.e. `G` is
//!   transversal.
//! * Krull dimension 1 means finitely many singular rays; the Hilbert
//!   polynomial of `S/J` is the constant `Σ_P τ_P` (Tjurina numbers). A node
//!   has `τ = 1`, so finding exactly that many nodes proves the list is
//!   complete.
//! * Higher dimension means a positive-dimensional singular locus, which is
//!   rejected.

use std::collections::BTreeSet;
use std::fmt;

use num::complex::Complex64;
use num::{BigInt, BigRational, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{Cyclo, CyclotomicField};
use crate::groebner::{self, GroebnerError, HilbertData};
use crate::linalg;
use crate::model::N_S;
use crate::parse::{parse_constant, ParseError};
use crate::polynomial::Polynomial;

/// Degree of `G`.
pub const QUINTIC_DEGREE: u32 = 5;
/// Default cap on S-pairs for the Jacobian certificate.
pub const DEFAULT_GROEBNER_BUDGET: usize = 200_000;
/// Refuse ansatz enumerations larger than this.
pub const MAX_ANSATZ_CANDIDATES: u64 = 20_000_000;
/// Random starts per affine chart for the numeric search.
pub const DEFAULT_HOMOTOPY_STARTS: usize = 200;
/// Residual below which a numeric root is accepted.
pub const HOMOTOPY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SingularError {
    #[error("G must be a nonzero homogeneous quintic in s0..s4")]
    NotQuintic,
    #[error("singular locus is not isolated (Jacobian ideal has projective dimension {projective_dimension})")]
    NonIsolated { projective_dimension: usize },
    #[error("the origin is not a ray")]
    OriginRay,
    #[error("candidate has {got} coordinates, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("candidate lives in Q(zeta_{got}) but G is over Q(zeta_{expected})")]
    FieldMismatch { expected: u32, got: u32 },
    #[error("ansatz would need {0} candidates")]
    TooManyCandidates(u64),
    #[error("bad candidate coordinate: {0}")]
    Parse(#[from] ParseError),
}

/// Where candidate rays come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CandidateSource {
    /// Every point with coordinates in `{0, ζ^0, …, ζ^{k-1}}`.
    AnsatzRoots,
    /// Explicit candidate points (any scaling).
    UserList(Vec<Vec<Cyclo>>),
    /// Newton iteration from seeded random starts in every affine chart;
    /// roots that cannot be snapped to an exact point stay unverified.
    FloatHomotopy { starts_per_chart: usize, seed: u64 },
}

impl CandidateSource {
    pub fn name(&self) -> &'static str {
        match self {
            CandidateSource::AnsatzRoots => "ansatz",
            CandidateSource::UserList(_) => "list",
            CandidateSource::FloatHomotopy { .. } => "homotopy",
        }
    }

    /// Numeric search with the default number of starts.
    pub fn homotopy(seed: u64) -> Self {
        CandidateSource::FloatHomotopy {
            starts_per_chart: DEFAULT_HOMOTOPY_STARTS,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingularityClass {
    /// Ordinary double point: affine Hessian of full rank 4.
    Node,
    NonNode { corank: usize },
    Unclassified,
}

impl SingularityClass {
    pub fn label(&self) -> &'static str {
        match self {
            SingularityClass::Node => "Node",
            SingularityClass::NonNode { .. } => "NonNode",
            SingularityClass::Unclassified => "Unclassified",
        }
    }

    pub fn corank(&self) -> Option<usize> {
        match self {
            SingularityClass::Node => Some(0),
            SingularityClass::NonNode { corank } => Some(*corank),
            SingularityClass::Unclassified => None,
        }
    }
}

/// A non-transversal ray, normalized so its first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularRay {
    representative: Vec<Cyclo>,
    class: SingularityClass,
}

impl SingularRay {
    pub fn representative(&self) -> &[Cyclo] {
        &self.representative
    }

    pub fn class(&self) -> SingularityClass {
        self.class
    }

    /// Index of the coordinate fixed to 1.
    pub fn chart(&self) -> usize {
        self.representative
            .iter()
            .position(|c| !c.is_zero())
            .expect("normalized ray is nonzero")
    }
}

impl fmt::Display for SingularRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.representative.iter().map(ToString::to_string).collect();
        write!(f, "({}) {}", coords.join(", "), self.class.label())
    }
}

/// Numeric root of `∂G` that could not be certified exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximateRay {
    pub coords: Vec<Complex64>,
    pub residual: f64,
}

/// Invariants of the Jacobian ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianCertificate {
    /// Krull dimension of `S/J`; one more than the projective dimension of
    /// the singular locus.
    pub krull_dimension: usize,
    /// Multiplicity of `S/J`: for isolated singularities, `Σ τ_P`.
    pub length: BigInt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransversalityReport {
    pub transversal: bool,
    pub rays: Vec<SingularRay>,
    pub unverified: Vec<ApproximateRay>,
    pub isolated: bool,
    /// Whether `rays` is certified to be the full singular locus.
    pub complete: bool,
    pub source: String,
    pub zeta_order: u32,
    pub certificate: Option<JacobianCertificate>,
}

impl TransversalityReport {
    pub fn node_count(&self) -> usize {
        self.rays.iter().filter(|r| r.class == SingularityClass::Node).count()
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        if self.transversal {
            if self.complete {
                "transversal".to_string()
            } else {
                "no singular rays found (search incomplete; transversality not certified)".to_string()
            }
        } else {
            let nodes = self.node_count();
            let others = self.rays.len() - nodes;
            let mut s = format!("{nodes} node{}", if nodes == 1 { "" } else { "s" });
            if others > 0 {
                s.push_str(&format!(", {others} non-nodal singular rays"));
            }
            if !self.unverified.is_empty() {
                s.push_str(&format!(", {} unverified numeric rays", self.unverified.len()));
            }
            if !self.complete {
                s.push_str(" (search incomplete)");
            }
            s
        }
    }

    pub fn to_json(&self) -> ReportJson {
        let mut rays: Vec<RayJson> = self
            .rays
            .iter()
            .map(|r| RayJson {
                coords: r.representative.iter().map(ToString::to_string).collect(),
                class: r.class.label().to_string(),
                corank: r.class.corank(),
            })
            .collect();
        rays.extend(self.unverified.iter().map(|r| RayJson {
            coords: r.coords.iter().map(format_complex).collect(),
            class: SingularityClass::Unclassified.label().to_string(),
            corank: None,
        }));
        ReportJson {
            transversal: self.transversal,
            rays,
            source: self.source.clone(),
            complete: self.complete,
            isolated: self.isolated,
            zeta_order: self.zeta_order,
            jacobian: self.certificate.as_ref().map(|c| JacobianJson {
                krull_dimension: c.krull_dimension,
                length: c.length.to_string(),
            }),
        }
    }

    /// Rebuilds a report from its JSON form. Unclassified rays keep their
    /// approximate coordinates.
    pub fn from_json(json: &ReportJson) -> Result<Self, SingularError> {
        let field = CyclotomicField::new(json.zeta_order).map_err(|_| SingularError::FieldMismatch {
            expected: 5,
            got: json.zeta_order,
        })?;
        let mut rays = Vec::new();
        let mut unverified = Vec::new();
        for r in &json.rays {
            let class = match (r.class.as_str(), r.corank) {
                ("Node", _) => SingularityClass::Node,
                ("NonNode", Some(c)) => SingularityClass::NonNode { corank: c },
                _ => SingularityClass::Unclassified,
            };
            if class == SingularityClass::Unclassified {
                unverified.push(ApproximateRay {
                    coords: r.coords.iter().map(|c| parse_complex(c).unwrap_or_default()).collect(),
                    residual: f64::NAN,
                });
            } else {
                let representative = r
                    .coords
                    .iter()
                    .map(|c| parse_constant(c, &field))
                    .collect::<Result<Vec<_>, _>>()?;
                rays.push(SingularRay {
                    representative,
                    class,
                });
            }
        }
        Ok(Self {
            transversal: json.transversal,
            rays,
            unverified,
            isolated: json.isolated,
            complete: json.complete,
            source: json.source.clone(),
            zeta_order: json.zeta_order,
            certificate: json.jacobian.as_ref().and_then(|j| {
                Some(JacobianCertificate {
                    krull_dimension: j.krull_dimension,
                    length: j.length.parse().ok()?,
                })
            }),
        })
    }
}

/// Fixed precision, with negligible parts (and `-0`) printed as `0`.
pub fn format_complex(z: &Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    format!("{:.12}{:+.12}i", clean(z.re), clean(z.im))
}

fn parse_complex(s: &str) -> Option<Complex64> {
    let body = s.strip_suffix('i')?;
    let split = body[1..].rfind(['+', '-'])? + 1;
    Some(Complex64::new(body[..split].parse().ok()?, body[split..].parse().ok()?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayJson {
    pub coords: Vec<String>,
    pub class: String,
    pub corank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianJson {
    pub krull_dimension: usize,
    pub length: String,
}

/// Wire form of [`TransversalityReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub transversal: bool,
    pub rays: Vec<RayJson>,
    pub source: String,
    pub complete: bool,
    pub isolated: bool,
    pub zeta_order: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobian: Option<JacobianJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Worker threads for candidate checking; 1 runs inline.
    pub jobs: usize,
    pub groebner_budget: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            jobs: 1,
            groebner_budget: DEFAULT_GROEBNER_BUDGET,
        }
    }
}

fn check_quintic(g: &Polynomial) -> Result<(), SingularError> {
    let extra_vars_unused = (N_S..g.n_vars()).all(|i| !g.uses_variable(i));
    if g.n_vars() < N_S || !extra_vars_unused || !g.is_homogeneous(QUINTIC_DEGREE).unwrap_or(false) {
        return Err(SingularError::NotQuintic);
    }
    Ok(())
}

/// `g` restricted to the variables `s0..s4`.
fn s_part(g: &Polynomial) -> Polynomial {
    if g.n_vars() == N_S {
        return g.clone();
    }
    Polynomial::from_terms(
        crate::polynomial::Variables::s(N_S),
        g.field().clone(),
        g.terms()
            .map(|(m, c)| (crate::polynomial::Monomial::from_exponents(&m.exponents()[..N_S]), c.clone()))
            .collect::<Vec<_>>(),
    )
}

/// Scales `point` so its first nonzero coordinate is 1; `None` at the
/// origin.
pub fn normalize_ray(point: &[Cyclo]) -> Option<Vec<Cyclo>> {
    let lead = point.iter().find(|c| !c.is_zero())?;
    let inv = lead.inv().expect("nonzero");
    Some(point.iter().map(|c| c * &inv).collect())
}

fn gradient_vanishes(grad: &[Polynomial], point: &[Cyclo]) -> bool {
    grad.iter()
        .all(|d| d.evaluate(point).map(|v| v.is_zero()).unwrap_or(false))
}

/// Normalized ansatz points: a leading 1 preceded by zeros, followed by
/// entries in `{0, ζ^0, …, ζ^{k-1}}`.
pub fn ansatz_candidates(field: &CyclotomicField) -> Result<Vec<Vec<Cyclo>>, SingularError> {
    let k = field.order() as u64;
    let total: u64 = (0..N_S as u32).map(|i| (k + 1).pow(N_S as u32 - 1 - i)).sum();
    if total > MAX_ANSATZ_CANDIDATES {
        return Err(SingularError::TooManyCandidates(total));
    }
    let mut values = vec![field.zero()];
    values.extend(field.roots_of_unity());
    let mut out = Vec::with_capacity(total as usize);
    for lead in 0..N_S {
        let tail = N_S - 1 - lead;
        let count = (k + 1).pow(tail as u32);
        for mut code in 0..count {
            let mut p = vec![field.zero(); N_S];
            p[lead] = field.one();
            for slot in (lead + 1..N_S).rev() {
                p[slot] = values[(code % (k + 1)) as usize].clone();
                code /= k + 1;
            }
            out.push(p);
        }
    }
    Ok(out)
}

struct Search {
    exact: Vec<Vec<Cyclo>>,
    unverified: Vec<ApproximateRay>,
}

fn search(g: &Polynomial, source: &CandidateSource, jobs: usize) -> Result<Search, SingularError> {
    let grad = g.gradient();
    let field = g.field();
    let candidates = match source {
        CandidateSource::AnsatzRoots => ansatz_candidates(field)?,
        CandidateSource::UserList(list) => {
            for p in list {
                if p.len() != N_S {
                    return Err(SingularError::Arity {
                        expected: N_S,
                        got: p.len(),
                    });
                }
                if let Some(c) = p.iter().find(|c| c.order() != field.order()) {
                    return Err(SingularError::FieldMismatch {
                        expected: field.order(),
                        got: c.order(),
                    });
                }
            }
            list.iter().filter_map(|p| normalize_ray(p)).collect()
        }
        CandidateSource::FloatHomotopy {
            starts_per_chart,
            seed,
        } => {
            let (snapped, unverified) = homotopy(g, *starts_per_chart, *seed);
            let exact: BTreeSet<Vec<Cyclo>> = snapped
                .into_iter()
                .filter(|p| gradient_vanishes(&grad, p))
                .collect();
            return Ok(Search {
                exact: exact.into_iter().collect(),
                unverified,
            });
        }
    };
    let check = |p: &Vec<Cyclo>| gradient_vanishes(&grad, p).then(|| p.clone());
    let hits: Vec<Vec<Cyclo>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| candidates.par_iter().filter_map(check).collect())
    } else {
        candidates.iter().filter_map(check).collect()
    };
    let exact: BTreeSet<Vec<Cyclo>> = hits.into_iter().collect();
    Ok(Search {
        exact: exact.into_iter().collect(),
        unverified: Vec::new(),
    })
}

/// All certified singular rays found from `source`, sorted by normalized
/// representative.
pub fn find_singular_rays(
    g: &Polynomial,
    source: &CandidateSource,
) -> Result<Vec<SingularRay>, SingularError> {
    find_singular_rays_with(g, source, AnalysisOptions::default())
}

pub fn find_singular_rays_with(
    g: &Polynomial,
    source: &CandidateSource,
    opts: AnalysisOptions,
) -> Result<Vec<SingularRay>, SingularError> {
    check_quintic(g)?;
    let g = s_part(g);
    let found = search(&g, source, opts.jobs)?;
    classify_all(&g, found.exact)
}

fn classify_all(g: &Polynomial, points: Vec<Vec<Cyclo>>) -> Result<Vec<SingularRay>, SingularError> {
    let hessian = g.hessian();
    points
        .into_iter()
        .map(|p| {
            let class = classify_with_hessian(&hessian, &p)?;
            Ok(SingularRay {
                representative: p,
                class,
            })
        })
        .collect()
}

/// Node iff the Hessian of `G` dehomogenized at the ray's unit coordinate
/// has rank 4 there.
pub fn classify_singularity(g: &Polynomial, ray: &[Cyclo]) -> Result<SingularityClass, SingularError> {
    if ray.len() != g.n_vars().min(N_S) {
        return Err(SingularError::Arity {
            expected: N_S,
            got: ray.len(),
        });
    }
    let g = s_part(g);
    classify_with_hessian(&g.hessian(), ray)
}

fn classify_with_hessian(hessian: &[Vec<Polynomial>], ray: &[Cyclo]) -> Result<SingularityClass, SingularError> {
    let point = normalize_ray(ray).ok_or(SingularError::OriginRay)?;
    let chart = point.iter().position(|c| !c.is_zero()).expect("nonzero");
    let idx: Vec<usize> = (0..N_S).filter(|&i| i != chart).collect();
    let m: Vec<Vec<Cyclo>> = idx
        .iter()
        .map(|&i| {
            idx.iter()
                .map(|&j| hessian[i][j].evaluate(&point).expect("arity checked"))
                .collect()
        })
        .collect();
    let rank = linalg::rank(&m);
    Ok(if rank == N_S - 1 {
        SingularityClass::Node
    } else {
        SingularityClass::NonNode {
            corank: N_S - 1 - rank,
        }
    })
}

/// Hilbert data of the Jacobian ideal, or `None` when the Groebner budget
/// runs out.
pub fn jacobian_certificate(g: &Polynomial, budget: usize) -> Result<Option<JacobianCertificate>, SingularError> {
    check_quintic(g)?;
    let g = s_part(g);
    // rational input: run the basis over Q regardless of the session field
    let g = g
        .with_field(&CyclotomicField::rationals())
        .unwrap_or(g);
    match groebner::leading_monomials(&g.gradient(), budget) {
        Ok(lms) => {
            let HilbertData {
                krull_dimension,
                degree,
            } = groebner::hilbert_data(&lms, N_S);
            Ok(Some(JacobianCertificate {
                krull_dimension,
                length: degree,
            }))
        }
        Err(GroebnerError::BudgetExceeded(_)) => Ok(None),
    }
}

/// Full transversality analysis.
pub fn verify_transversal(
    g: &Polynomial,
    source: &CandidateSource,
    opts: AnalysisOptions,
) -> Result<TransversalityReport, SingularError> {
    check_quintic(g)?;
    let gs = s_part(g);
    let certificate = jacobian_certificate(&gs, opts.groebner_budget)?;
    if let Some(c) = &certificate {
        if c.krull_dimension >= 2 {
            return Err(SingularError::NonIsolated {
                projective_dimension: c.krull_dimension - 1,
            });
        }
    }
    let found = search(&gs, source, opts.jobs)?;
    let rays = classify_all(&gs, found.exact)?;
    let all_nodes = rays.iter().all(|r| r.class == SingularityClass::Node);
    let (isolated, complete) = match &certificate {
        Some(c) if c.krull_dimension == 0 => {
            debug_assert!(rays.is_empty(), "rays found for a transversal G");
            (true, true)
        }
        Some(c) => {
            let n = BigInt::from(rays.len());
            (true, found.unverified.is_empty() && all_nodes && n == c.length)
        }
        // fall back to the Hessian test alone: nodes are isolated
        None => (all_nodes, false),
    };
    Ok(TransversalityReport {
        transversal: rays.is_empty() && found.unverified.is_empty(),
        rays,
        unverified: found.unverified,
        isolated,
        complete,
        source: source.name().to_string(),
        zeta_order: g.field().order(),
        certificate,
    })
}

// ---------------------------------------------------------------------------
// numeric fallback

fn solve_complex(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let t = a[col][k];
                a[row][k] -= f * t;
            }
            let t = b[col];
            b[row] -= f * t;
        }
    }
    let mut x = vec![Complex64::zero(); n];
    for i in (0..n).rev() {
        let s: Complex64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

fn homotopy(g: &Polynomial, starts: usize, seed: u64) -> (Vec<Vec<Cyclo>>, Vec<ApproximateRay>) {
    let grad = g.gradient();
    let hess = g.hessian();
    let field = g.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut snapped: Vec<Vec<Cyclo>> = Vec::new();
    let mut approx: Vec<ApproximateRay> = Vec::new();
    for chart in 0..N_S {
        let free: Vec<usize> = (0..N_S).filter(|&i| i != chart).collect();
        for _ in 0..starts {
            let mut x: Vec<Complex64> = (0..N_S)
                .map(|_| Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)))
                .collect();
            x[chart] = Complex64::new(1.0, 0.0);
            let mut converged = false;
            for _ in 0..100 {
                // affine partials plus g itself: overdetermined, so Gauss-Newton
                let mut f: Vec<Complex64> = free
                    .iter()
                    .map(|&i| grad[i].evaluate_complex(&x).expect("arity"))
                    .collect();
                f.push(g.evaluate_complex(&x).expect("arity"));
                let norm: f64 = f.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                if !norm.is_finite() {
                    break;
                }
                if norm < HOMOTOPY_TOLERANCE {
                    converged = true;
                    break;
                }
                let mut jac: Vec<Vec<Complex64>> = free
                    .iter()
                    .map(|&i| {
                        free.iter()
                            .map(|&j| hess[i][j].evaluate_complex(&x).expect("arity"))
                            .collect()
                    })
                    .collect();
                jac.push(
                    free.iter()
                        .map(|&j| grad[j].evaluate_complex(&x).expect("arity"))
                        .collect(),
                );
                let n = free.len();
                let normal: Vec<Vec<Complex64>> = (0..n)
                    .map(|a| {
                        (0..n)
                            .map(|b| jac.iter().map(|row| row[a].conj() * row[b]).sum())
                            .collect()
                    })
                    .collect();
                let rhs: Vec<Complex64> = (0..n)
                    .map(|a| jac.iter().zip(&f).map(|(row, v)| row[a].conj() * v).sum())
                    .collect();
                let Some(dx) = solve_complex(normal, rhs) else { break };
                for (k, &i) in free.iter().enumerate() {
                    x[i] -= dx[k];
                }
            }
            if !converged {
                continue;
            }
            // full gradient, including the chart direction
            let residual: f64 = grad
                .iter()
                .map(|d| d.evaluate_complex(&x).expect("arity").norm_sqr())
                .sum::<f64>()
                .sqrt();
            if residual > 1e-8 {
                continue;
            }
            let lead = x.iter().copied().find(|c| c.norm() > 1e-8).expect("chart coordinate is 1");
            let x: Vec<Complex64> = x.iter().map(|c| c / lead).collect();
            match snap_point(&x, field) {
                Some(p) if gradient_vanishes(&grad, &p) => {
                    if !snapped.contains(&p) {
                        snapped.push(p);
                    }
                }
                _ => {
                    let dup = approx.iter().any(|a| {
                        a.coords.iter().zip(&x).all(|(u, v)| (u - v).norm() < 1e-6)
                    });
                    if !dup {
                        approx.push(ApproximateRay { coords: x, residual });
                    }
                }
            }
        }
    }
    (snapped, approx)
}

/// Rounds each coordinate to `q·ζ^a` with `q` a small-denominator rational.
fn snap_point(x: &[Complex64], field: &CyclotomicField) -> Option<Vec<Cyclo>> {
    x.iter().map(|c| snap_value(*c, field)).collect()
}

fn snap_value(z: Complex64, field: &CyclotomicField) -> Option<Cyclo> {
    const EPS: f64 = 1e-7;
    if z.norm() < EPS {
        return Some(field.zero());
    }
    let k = field.order() as f64;
    let step = std::f64::consts::TAU / k;
    let a = (z.arg() / step).round();
    let rotated = z * Complex64::from_polar(1.0, -a * step);
    // a real multiple of a root of unity, possibly negative
    if rotated.im.abs() > EPS {
        return None;
    }
    let q = rational_approx(rotated.re, 64)?;
    if (q.to_f64()? - rotated.re).abs() > EPS {
        return None;
    }
    Some(field.zeta_pow(a as i64).scale(&q))
}

fn rational_approx(x: f64, max_den: i64) -> Option<BigRational> {
    (1..=max_den).find_map(|d| {
        let n = (x * d as f64).round();
        ((n / d as f64 - x).abs() < 1e-9).then(|| BigRational::new(BigInt::from(n as i64), BigInt::from(d)))
    })
}
