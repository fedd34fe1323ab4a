//! Mayer–Vietoris bookkeeping for `V̄ = M# ∪ (∪_j Ā_j)`.
//!
//! Everything is a dimension count over a characteristic-0 field. The
//! pieces meet in the `n` nodes; the antenna spheres are identified in
//! homology class by class (`J_k`), which is what the refined mode encodes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg;

/// Real dimension of the threefolds involved.
pub const TOP_DEGREE: usize = 6;
/// Complex dimension, the range of Hodge indices.
pub const COMPLEX_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("malformed incidence: {0}")]
    MalformedIncidence(String),
    #[error("Hodge numbers in degree {degree} sum to {sum}, expected {expected}")]
    HodgeMismatch { degree: usize, sum: usize, expected: usize },
    #[error("Hodge index ({0},{1}) out of range")]
    HodgeIndex(usize, usize),
    #[error("intersection must be a finite set of points (nonzero H^{0})")]
    NotPointLike(usize),
    #[error("exactness violated: {0}")]
    Exactness(String),
}

/// Betti numbers in degrees `0..=6`, with optional Hodge numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSpace {
    pub dims: [usize; TOP_DEGREE + 1],
    /// Serialized as `[p, q, h^{p,q}]` triples.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "hodge_triples")]
    pub hodge: Option<BTreeMap<(usize, usize), usize>>,
}

mod hodge_triples {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    type Map = BTreeMap<(usize, usize), usize>;

    pub fn serialize<S: Serializer>(h: &Option<Map>, s: S) -> Result<S::Ok, S::Error> {
        h.as_ref()
            .map(|m| m.iter().map(|(&(p, q), &v)| (p, q, v)).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Map>, D::Error> {
        let v: Option<Vec<(usize, usize, usize)>> = Option::deserialize(d)?;
        Ok(v.map(|v| v.into_iter().map(|(p, q, h)| ((p, q), h)).collect()))
    }
}

impl GradedSpace {
    pub fn new(dims: [usize; TOP_DEGREE + 1]) -> Self {
        Self { dims, hodge: None }
    }

    pub fn zero() -> Self {
        Self::new([0; TOP_DEGREE + 1])
    }

    /// `n` points.
    pub fn points(n: usize) -> Self {
        let mut h = Self::new([n, 0, 0, 0, 0, 0, 0]);
        h.hodge = Some(BTreeMap::from([((0, 0), n)]));
        h
    }

    /// `n` disjoint 2-spheres.
    pub fn spheres(n: usize) -> Self {
        let mut h = Self::new([n, 0, n, 0, 0, 0, 0]);
        h.hodge = Some(BTreeMap::from([((0, 0), n), ((1, 1), n)]));
        h
    }

    pub fn with_hodge(mut self, hodge: BTreeMap<(usize, usize), usize>) -> Result<Self, CohomologyError> {
        for &(p, q) in hodge.keys() {
            if p > COMPLEX_DIM || q > COMPLEX_DIM {
                return Err(CohomologyError::HodgeIndex(p, q));
            }
        }
        for degree in 0..=TOP_DEGREE {
            let sum: usize = hodge
                .iter()
                .filter(|((p, q), _)| p + q == degree)
                .map(|(_, h)| h)
                .sum();
            if sum != self.dims[degree] {
                return Err(CohomologyError::HodgeMismatch {
                    degree,
                    sum,
                    expected: self.dims[degree],
                });
            }
        }
        self.hodge = Some(hodge);
        Ok(self)
    }

    pub fn dim(&self, q: usize) -> usize {
        self.dims.get(q).copied().unwrap_or(0)
    }

    pub fn hodge_number(&self, p: usize, q: usize) -> Option<usize> {
        self.hodge.as_ref().map(|h| h.get(&(p, q)).copied().unwrap_or(0))
    }

    fn hodge_or_default(&self) -> Option<BTreeMap<(usize, usize), usize>> {
        self.hodge.clone()
    }
}

impl fmt::Display for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.dims.iter().map(ToString::to_string).collect();
        write!(f, "({})", d.join(","))
    }
}

/// `Σ (-1)^q dim H^q`.
pub fn euler_characteristic(h: &GradedSpace) -> i64 {
    h.dims
        .iter()
        .enumerate()
        .map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// Cohomology of `M#` plus the node partition `J_1, …, J_N`.
///
/// This is also the on-disk JSON form; node indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConifoldData {
    pub base_dims: [usize; TOP_DEGREE + 1],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_hodge: Option<Vec<(usize, usize, usize)>>,
    pub n: usize,
    pub classes: Vec<Vec<usize>>,
    /// Betti numbers of the smoothing, if known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smooth_dims: Option<[usize; TOP_DEGREE + 1]>,
}

impl ConifoldData {
    pub fn new(base_dims: [usize; TOP_DEGREE + 1], n: usize, classes: Vec<Vec<usize>>) -> Self {
        Self {
            base_dims,
            base_hodge: None,
            n,
            classes,
            smooth_dims: None,
        }
    }

    /// Builds the classes from an `n × N` 0/1 matrix.
    pub fn from_incidence(base_dims: [usize; TOP_DEGREE + 1], rows: &[Vec<u8>]) -> Result<Self, CohomologyError> {
        let n_classes = rows.first().map_or(0, Vec::len);
        let mut classes = vec![Vec::new(); n_classes];
        for (j, row) in rows.iter().enumerate() {
            if row.len() != n_classes {
                return Err(CohomologyError::MalformedIncidence(format!(
                    "row {} has {} entries, expected {n_classes}",
                    j + 1,
                    row.len()
                )));
            }
            for (k, &x) in row.iter().enumerate() {
                match x {
                    0 => {}
                    1 => classes[k].push(j + 1),
                    _ => {
                        return Err(CohomologyError::MalformedIncidence(format!(
                            "entry ({}, {}) is {x}",
                            j + 1,
                            k + 1
                        )))
                    }
                }
            }
        }
        let data = Self::new(base_dims, rows.len(), classes);
        data.validate()?;
        Ok(data)
    }

    /// Number of 4-cycle classes.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn base(&self) -> Result<GradedSpace, CohomologyError> {
        let g = GradedSpace::new(self.base_dims);
        match &self.base_hodge {
            Some(list) => g.with_hodge(list.iter().map(|&(p, q, h)| ((p, q), h)).collect()),
            None => Ok(g),
        }
    }

    pub fn validate(&self) -> Result<(), CohomologyError> {
        let mut seen = vec![0usize; self.n];
        for (k, class) in self.classes.iter().enumerate() {
            if class.is_empty() {
                return Err(CohomologyError::MalformedIncidence(format!("class {} is empty", k + 1)));
            }
            for &j in class {
                if j == 0 || j > self.n {
                    return Err(CohomologyError::MalformedIncidence(format!(
                        "node index {j} outside 1..={}",
                        self.n
                    )));
                }
                seen[j - 1] += 1;
            }
        }
        if let Some(j) = seen.iter().position(|&c| c != 1) {
            return Err(CohomologyError::MalformedIncidence(format!(
                "node {} lies in {} classes",
                j + 1,
                seen[j]
            )));
        }
        self.base()?;
        Ok(())
    }

    /// `n × N` matrix with `(j, k) = 1` iff `j ∈ J_k`.
    pub fn incidence(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.classes.len()]; self.n];
        for (k, class) in self.classes.iter().enumerate() {
            for &j in class {
                m[j - 1][k] = 1;
            }
        }
        m
    }
}

/// The classes `J_k`, each sorted, in the order given.
pub fn antenna_classes(data: &ConifoldData) -> Result<Vec<Vec<usize>>, CohomologyError> {
    data.validate()?;
    Ok(data
        .classes
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvMode<'a> {
    /// Each antenna sphere contributes its own degree-2 class.
    Raw,
    /// Spheres in the same `J_k` are identified.
    Refined(&'a ConifoldData),
}

/// `H*(A ∪ B)` from `H*(A)`, `H*(B)` and `H*(A ∩ B)` (a finite set of
/// points); the restriction to `H^0(A ∩ B)` is taken to be onto.
pub fn mayer_vietoris(
    ha: &GradedSpace,
    hb: &GradedSpace,
    hab: &GradedSpace,
    mode: MvMode<'_>,
) -> Result<GradedSpace, CohomologyError> {
    if let Some(q) = (1..=TOP_DEGREE).find(|&q| hab.dims[q] != 0) {
        return Err(CohomologyError::NotPointLike(q));
    }
    let n = hab.dims[0];
    if ha.dims[0] + hb.dims[0] < n {
        return Err(CohomologyError::Exactness(format!(
            "H^0(A)+H^0(B) has dimension {} < {n} = dim H^0(A∩B)",
            ha.dims[0] + hb.dims[0]
        )));
    }
    let mut dims = [0usize; TOP_DEGREE + 1];
    for q in 0..=TOP_DEGREE {
        dims[q] = ha.dims[q] + hb.dims[q];
    }
    dims[0] -= n;
    let mut hodge = match (ha.hodge_or_default(), hb.hodge_or_default()) {
        (Some(a), Some(b)) => {
            let mut h = a;
            for (k, v) in b {
                *h.entry(k).or_insert(0) += v;
            }
            *h.entry((0, 0)).or_insert(0) -= n;
            Some(h)
        }
        _ => None,
    };
    if let MvMode::Refined(data) = mode {
        data.validate()?;
        if data.n != n {
            return Err(CohomologyError::Exactness(format!(
                "intersection has {n} points but the data has {} nodes",
                data.n
            )));
        }
        if hb.dims[2] < n {
            return Err(CohomologyError::Exactness(format!(
                "antenna piece has H^2 of dimension {} < {n}",
                hb.dims[2]
            )));
        }
        let collapse = n - data.class_count();
        dims[2] -= collapse;
        if let Some(h) = hodge.as_mut() {
            let e = h.entry((1, 1)).or_insert(0);
            *e = e.checked_sub(collapse).ok_or_else(|| {
                CohomologyError::Exactness("antenna classes are not of type (1,1)".to_string())
            })?;
        }
    }
    if let Some(h) = hodge.as_mut() {
        h.retain(|_, v| *v != 0);
    }
    Ok(GradedSpace { dims, hodge })
}

/// Raw and refined counts side by side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MvReport {
    pub base: GradedSpace,
    pub raw: GradedSpace,
    pub refined: GradedSpace,
    pub n: usize,
    pub classes: usize,
    /// `n - N`: degree-2 classes the raw count keeps and the refined one
    /// identifies.
    pub discrepancy: usize,
}

pub fn mayer_vietoris_report(data: &ConifoldData) -> Result<MvReport, CohomologyError> {
    data.validate()?;
    let base = data.base()?;
    let spheres = GradedSpace::spheres(data.n);
    let points = GradedSpace::points(data.n);
    let raw = mayer_vietoris(&base, &spheres, &points, MvMode::Raw)?;
    let refined = mayer_vietoris(&base, &spheres, &points, MvMode::Refined(data))?;
    Ok(MvReport {
        base,
        raw,
        refined,
        n: data.n,
        classes: data.class_count(),
        discrepancy: data.n - data.class_count(),
    })
}

/// `H*(V̄)`: the refined Mayer–Vietoris count.
pub fn cohomology_of_closure(data: &ConifoldData) -> Result<GradedSpace, CohomologyError> {
    Ok(mayer_vietoris_report(data)?.refined)
}

/// Rows are antenna classes `[Ā_j]`, columns 4-cycle classes; the same
/// matrix records cup products evaluated at the common node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingMatrix {
    pub entries: Vec<Vec<u8>>,
}

impl PairingMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn rank(&self) -> usize {
        let m: Vec<Vec<i64>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| i64::from(x)).collect())
            .collect();
        linalg::rank_int(&m)
    }

    /// One row per class, in class order.
    pub fn quotient(&self, classes: &[Vec<usize>]) -> PairingMatrix {
        PairingMatrix {
            entries: classes.iter().map(|c| self.entries[c[0] - 1].clone()).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, r)| r.len() == self.entries.len() && r.iter().enumerate().all(|(j, &x)| x == u8::from(i == j)))
    }
}

pub fn pairing_matrix(data: &ConifoldData) -> Result<PairingMatrix, CohomologyError> {
    data.validate()?;
    Ok(PairingMatrix {
        entries: data.incidence(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KahlerItem {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Poincaré duality and Hodge checks on even-degree cohomology. `H^3` is
/// deliberately left out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KahlerReport {
    pub items: Vec<KahlerItem>,
    pub warnings: Vec<String>,
}

impl KahlerReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn item(&self, name: &str) -> Option<&KahlerItem> {
        self.items.iter().find(|i| i.name == name)
    }
}

pub fn check_kahler_package(h: &GradedSpace, data: &ConifoldData) -> Result<KahlerReport, CohomologyError> {
    let classes = antenna_classes(data)?;
    let big_n = classes.len();
    let mut items = Vec::new();
    let mut item = |name: &str, pass: bool, detail: String| {
        items.push(KahlerItem {
            name: name.to_string(),
            pass,
            detail,
        })
    };
    item(
        "i",
        h.dim(0) == h.dim(6),
        format!("dim H^0 = {}, dim H^6 = {}", h.dim(0), h.dim(6)),
    );
    item(
        "ii",
        h.dim(2) == h.dim(4),
        format!("dim H^2 = {}, dim H^4 = {}", h.dim(2), h.dim(4)),
    );
    let quotient = pairing_matrix(data)?.quotient(&classes);
    let block = quotient.rank() == big_n && quotient.is_identity();
    let complement = h.dim(2) >= big_n && h.dim(4) >= big_n && h.dim(2) - big_n == h.dim(4) - big_n;
    item(
        "iii",
        block && complement,
        format!(
            "antenna block {big_n}x{big_n} {}, complement {} vs {}",
            if block { "identity" } else { "degenerate" },
            h.dim(2).saturating_sub(big_n),
            h.dim(4).saturating_sub(big_n)
        ),
    );
    if let Some(hodge) = &h.hodge {
        let get = |p: usize, q: usize| hodge.get(&(p, q)).copied().unwrap_or(0);
        let symmetric = (0..=COMPLEX_DIM).all(|p| {
            (0..=COMPLEX_DIM)
                .filter(|q| (p + q) % 2 == 0)
                .all(|q| get(p, q) == get(q, p) && get(p, q) == get(COMPLEX_DIM - p, COMPLEX_DIM - q))
        });
        item("hodge", symmetric, "h^{p,q} = h^{q,p} = h^{3-p,3-q} on even degrees".to_string());
    }
    let mut warnings = Vec::new();
    if data.base_dims[4] != data.base_dims[2] + big_n {
        warnings.push(format!(
            "base data has dim H^4 = {} but dim H^2 + N = {}",
            data.base_dims[4],
            data.base_dims[2] + big_n
        ));
    }
    Ok(KahlerReport { items, warnings })
}

/// Text table of an [`MvReport`].
pub fn format_table(report: &MvReport) -> String {
    let mut out = String::from("q         0    1    2    3    4    5    6    chi\n");
    for (name, h) in [("M#", &report.base), ("raw", &report.raw), ("refined", &report.refined)] {
        out.push_str(&format!("{name:<8}"));
        for d in h.dims {
            out.push_str(&format!("{d:>5}"));
        }
        out.push_str(&format!("{:>7}\n", euler_characteristic(h)));
    }
    if report.discrepancy > 0 {
        out.push_str(&format!(
            "raw and refined differ in degree 2 by n - N = {} - {} = {}\n",
            report.n, report.classes, report.discrepancy
        ));
    }
    out
}
