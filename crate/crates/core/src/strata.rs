//! Ground-state varieties on each sheet of the moment-map level.

use std::fmt;

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::model::{QuantumRegion, Sheet};
use crate::singular::TransversalityReport;

/// Order of the stabilizer on the fuzzy point and on the `r<0` exocurves.
pub const LG_ORBIFOLD_ORDER: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrataError {
    #[error(transparent)]
    QuantumRegion(#[from] QuantumRegion),
    #[error("singular-locus report is incomplete; refusing to stratify")]
    IncompleteReport,
    #[error("report contains a singular ray that is not a node")]
    NonNodal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StratumKind {
    MainConifold,
    SmoothCY,
    /// 1-based node index.
    Exocurve(usize),
    /// 1-based node index.
    NodePoint(usize),
    FuzzyPoint,
}

impl StratumKind {
    pub fn complex_dimension(self) -> usize {
        match self {
            StratumKind::MainConifold | StratumKind::SmoothCY => 3,
            StratumKind::Exocurve(_) => 1,
            StratumKind::NodePoint(_) | StratumKind::FuzzyPoint => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StratumKind::MainConifold => "MainConifold",
            StratumKind::SmoothCY => "SmoothCY",
            StratumKind::Exocurve(_) => "Exocurve",
            StratumKind::NodePoint(_) => "NodePoint",
            StratumKind::FuzzyPoint => "FuzzyPoint",
        }
    }

    pub fn index(self) -> Option<usize> {
        match self {
            StratumKind::Exocurve(j) | StratumKind::NodePoint(j) => Some(j),
            _ => None,
        }
    }
}

impl fmt::Display for StratumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index() {
            Some(j) => write!(f, "{}({j})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub kind: StratumKind,
    pub compact: bool,
    /// Order of the orbifold group, if nontrivial.
    pub orbifold_group: Option<u32>,
    /// Symbolic size constraint on the stratum.
    pub radius: Option<&'static str>,
}

impl Stratum {
    fn new(kind: StratumKind, compact: bool) -> Self {
        Self {
            kind,
            compact,
            orbifold_group: None,
            radius: None,
        }
    }

    pub fn complex_dimension(&self) -> usize {
        self.kind.complex_dimension()
    }
}

/// Unordered pair of stratum indices `a < b` with a label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    pub a: usize,
    pub b: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedVariety {
    pub sheet: Sheet,
    pub strata: Vec<Stratum>,
    pub attachments: Vec<Attachment>,
    pub connected_components: usize,
}

const RADIUS_MAIN: &str = "|s|^2 = r";
const RADIUS_EXO_POS: &str = "|s|^2 = 5|p|^2 + |r|";
const RADIUS_EXO_NEG: &str = "5|p|^2 = |s#|^2 + |r|";
const RADIUS_FUZZY: &str = "5|p|^2 = |r|";

/// Stratification for a transversality report on the given sheet.
pub fn build_ground_state_variety(
    report: &TransversalityReport,
    sheet: Sheet,
) -> Result<StratifiedVariety, StrataError> {
    if !report.complete || !report.unverified.is_empty() {
        return Err(StrataError::IncompleteReport);
    }
    if report.node_count() != report.rays.len() {
        return Err(StrataError::NonNodal);
    }
    Ok(from_node_count(report.rays.len(), sheet))
}

/// As [`build_ground_state_variety`], taking the level `r` itself.
pub fn build_at_level(
    report: &TransversalityReport,
    level: &BigRational,
) -> Result<StratifiedVariety, StrataError> {
    build_ground_state_variety(report, Sheet::from_level(level)?)
}

/// Stratification for `n` nodes (`n = 0`: transversal).
pub fn from_node_count(n: usize, sheet: Sheet) -> StratifiedVariety {
    let mut strata = Vec::new();
    let mut edges = Vec::new();
    match (sheet, n) {
        (Sheet::Positive, 0) => {
            let mut s = Stratum::new(StratumKind::SmoothCY, true);
            s.radius = Some(RADIUS_MAIN);
            strata.push(s);
        }
        (Sheet::Negative, 0) => strata.push(fuzzy_point()),
        (Sheet::Positive, _) => {
            let mut main = Stratum::new(StratumKind::MainConifold, true);
            main.radius = Some(RADIUS_MAIN);
            strata.push(main);
            for j in 1..=n {
                let mut exo = Stratum::new(StratumKind::Exocurve(j), false);
                exo.radius = Some(RADIUS_EXO_POS);
                strata.push(exo);
            }
            for j in 1..=n {
                strata.push(Stratum::new(StratumKind::NodePoint(j), true));
            }
            for j in 1..=n {
                let node = n + j;
                edges.push((0, node, format!("x#_{j}")));
                edges.push((j, node, format!("x#_{j}")));
            }
        }
        (Sheet::Negative, _) => {
            for j in 1..=n {
                let mut exo = Stratum::new(StratumKind::Exocurve(j), false);
                exo.orbifold_group = Some(LG_ORBIFOLD_ORDER);
                exo.radius = Some(RADIUS_EXO_NEG);
                strata.push(exo);
            }
            strata.push(fuzzy_point());
            for j in 0..n {
                edges.push((j, n, "fuzzy point".to_string()));
            }
        }
    }
    let attachments: Vec<Attachment> = edges
        .into_iter()
        .map(|(a, b, label)| Attachment {
            a: a.min(b),
            b: a.max(b),
            label,
        })
        .collect();
    let connected_components = count_components(strata.len(), &attachments);
    StratifiedVariety {
        sheet,
        strata,
        attachments,
        connected_components,
    }
}

fn fuzzy_point() -> Stratum {
    let mut s = Stratum::new(StratumKind::FuzzyPoint, true);
    s.orbifold_group = Some(LG_ORBIFOLD_ORDER);
    s.radius = Some(RADIUS_FUZZY);
    s
}

fn count_components(n: usize, attachments: &[Attachment]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for e in attachments {
        let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components
}

impl StratifiedVariety {
    /// Whether strata `i` and `j` are attached (symmetric).
    pub fn attached(&self, i: usize, j: usize) -> bool {
        let (a, b) = (i.min(j), i.max(j));
        self.attachments.iter().any(|e| e.a == a && e.b == b)
    }

    pub fn index_of(&self, kind: StratumKind) -> Option<usize> {
        self.strata.iter().position(|s| s.kind == kind)
    }

    pub fn exocurve_count(&self) -> usize {
        self.strata
            .iter()
            .filter(|s| matches!(s.kind, StratumKind::Exocurve(_)))
            .count()
    }

    pub fn dimension_sequence(&self) -> Vec<usize> {
        self.strata.iter().map(Stratum::complex_dimension).collect()
    }

    /// Marks every exocurve compact (adding its point at infinity).
    pub fn compactify(&self) -> Self {
        let mut v = self.clone();
        for s in &mut v.strata {
            if matches!(s.kind, StratumKind::Exocurve(_)) {
                s.compact = true;
            }
        }
        v
    }

    fn headline(&self) -> String {
        let n = self.exocurve_count();
        match (self.sheet, n) {
            (Sheet::Positive, 0) => "1 stratum, dim 3, smooth".to_string(),
            (Sheet::Negative, 0) => format!("1 stratum, dim 0, fuzzy point (Z{LG_ORBIFOLD_ORDER})"),
            (Sheet::Positive, _) => {
                let dims: Vec<String> = if n <= 5 {
                    self.dimension_sequence().iter().map(ToString::to_string).collect()
                } else {
                    vec!["3".to_string(), format!("1 x{n}"), format!("0 x{n}")]
                };
                format!(
                    "{} strata, dim sequence {{{}}}, {n} exocurves attached at the nodes",
                    self.strata.len(),
                    dims.join(",")
                )
            }
            (Sheet::Negative, 1) => "1 exocurve meeting at fuzzy point".to_string(),
            (Sheet::Negative, _) => format!("{n} exocurves meeting at fuzzy point"),
        }
    }

    /// Plain-text summary.
    pub fn report(&self) -> String {
        let mut out = format!("sheet: {}\n{}\n", self.sheet, self.headline());
        out.push_str(&format!("connected components: {}\n", self.connected_components));
        out.push_str("strata:\n");
        for (i, s) in self.strata.iter().enumerate() {
            out.push_str(&format!("  [{i}] {} dim {}", s.kind, s.complex_dimension()));
            if !s.compact {
                out.push_str(" non-compact");
            }
            if let Some(m) = s.orbifold_group {
                out.push_str(&format!(" orbifold Z{m}"));
            }
            if let Some(r) = s.radius {
                out.push_str(&format!(" ({r})"));
            }
            out.push('\n');
        }
        if !self.attachments.is_empty() {
            out.push_str("attachments:\n");
            for e in &self.attachments {
                out.push_str(&format!(
                    "  {} -- {} at {}\n",
                    self.strata[e.a].kind, self.strata[e.b].kind, e.label
                ));
            }
        }
        out
    }

    pub fn to_json(&self) -> StrataJson {
        StrataJson {
            sheet: self.sheet,
            strata: self
                .strata
                .iter()
                .map(|s| StratumJson {
                    kind: s.kind.name().to_string(),
                    index: s.kind.index(),
                    dim: s.complex_dimension(),
                    compact: s.compact,
                    orbifold_group: s.orbifold_group.map(|m| format!("Z{m}")),
                    radius: s.radius.map(str::to_string),
                })
                .collect(),
            attachments: self
                .attachments
                .iter()
                .map(|e| (e.a, e.b, e.label.clone()))
                .collect(),
            connected_components: self.connected_components,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub dim: usize,
    pub compact: bool,
    pub orbifold_group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataJson {
    pub sheet: Sheet,
    pub strata: Vec<StratumJson>,
    pub attachments: Vec<(usize, usize, String)>,
    pub connected_components: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singular::{verify_transversal, AnalysisOptions, CandidateSource};
    use crate::{parse_polynomial, ParseContext};
    use num::Zero;
    use proptest::prelude::*;

    fn report(text: &str) -> TransversalityReport {
        let g = parse_polynomial(text, &ParseContext::quintic(5).unwrap()).unwrap();
        verify_transversal(&g, &CandidateSource::AnsatzRoots, AnalysisOptions::default()).unwrap()
    }

    #[test]
    fn fermat_sheets() {
        let r = report("s0^5+s1^5+s2^5+s3^5+s4^5");
        let pos = build_ground_state_variety(&r, Sheet::Positive).unwrap();
        assert_eq!(pos.strata.len(), 1);
        assert_eq!(pos.strata[0].kind, StratumKind::SmoothCY);
        assert_eq!(pos.connected_components, 1);
        assert!(pos.report().contains("1 stratum, dim 3, smooth"));
        let neg = build_ground_state_variety(&r, Sheet::Negative).unwrap();
        assert_eq!(neg.strata.len(), 1);
        assert_eq!(neg.strata[0].kind, StratumKind::FuzzyPoint);
        assert_eq!(neg.strata[0].orbifold_group, Some(5));
    }

    #[test]
    fn zero_level_and_incomplete_reports_are_rejected() {
        let r = report("s0^5+s1^5+s2^5+s3^5+s4^5");
        assert_eq!(
            build_at_level(&r, &BigRational::zero()),
            Err(StrataError::QuantumRegion(QuantumRegion))
        );
        let incomplete = report("s0^5+s1^5+s2^5+s3^5");
        assert_eq!(
            build_ground_state_variety(&incomplete, Sheet::Positive),
            Err(StrataError::IncompleteReport)
        );
    }

    #[test]
    fn two_nodes_text() {
        let pos = from_node_count(2, Sheet::Positive);
        assert_eq!(pos.dimension_sequence(), vec![3, 1, 1, 0, 0]);
        assert!(pos.report().contains("dim sequence {3,1,1,0,0}"));
        let neg = from_node_count(2, Sheet::Negative);
        assert!(neg.report().contains("2 exocurves meeting at fuzzy point"));
    }

    #[test]
    fn compactify_closes_exocurves() {
        let v = from_node_count(3, Sheet::Positive);
        assert!(v.strata.iter().any(|s| !s.compact));
        assert!(v.compactify().strata.iter().all(|s| s.compact));
    }

    proptest! {
        #[test]
        fn positive_sheet_structure(n in 1usize..40) {
            let v = from_node_count(n, Sheet::Positive);
            prop_assert_eq!(v.strata.len(), 1 + 2 * n);
            prop_assert_eq!(v.connected_components, 1);
            prop_assert_eq!(v.attachments.len(), 2 * n);
            let main = v.index_of(StratumKind::MainConifold).unwrap();
            for j in 1..=n {
                let exo = v.index_of(StratumKind::Exocurve(j)).unwrap();
                let node = v.index_of(StratumKind::NodePoint(j)).unwrap();
                prop_assert!(v.attached(main, node) && v.attached(node, main));
                prop_assert!(v.attached(exo, node) && v.attached(node, exo));
                prop_assert!(!v.attached(exo, main));
                prop_assert!(!v.strata[exo].compact);
            }
        }

        #[test]
        fn negative_sheet_is_a_star(n in 1usize..40) {
            let v = from_node_count(n, Sheet::Negative);
            let fuzzy = v.index_of(StratumKind::FuzzyPoint).unwrap();
            prop_assert_eq!(v.strata.len(), n + 1);
            prop_assert_eq!(v.connected_components, 1);
            prop_assert!(v.attachments.iter().all(|e| e.a == fuzzy || e.b == fuzzy));
            prop_assert_eq!(v.attachments.len(), n);
            prop_assert!(v.strata.iter().all(|s| s.orbifold_group == Some(5)));
        }
    }
}
