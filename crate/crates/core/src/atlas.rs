//! Charts and monomial gluings for the exocurves and their compactification.
//!
//! Coordinates are formal: `u_p` stands for `s#·p^{1/5}` but only `u_p^5`
//! ever enters a computation, so no branch of the fifth root is chosen.

use std::fmt;

use num::rational::Ratio;
use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclo;
use crate::model::{QuantumRegion, Sheet};

/// Exponent of the gluing `u_s = u_p^5`.
pub const GLUE_EXPONENT: i64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtlasError {
    #[error(transparent)]
    QuantumRegion(#[from] QuantumRegion),
    #[error("{0} is not defined at 0 (branch point)")]
    BranchPoint(ChartName),
    #[error("map out of {0} is multi-valued (needs a fifth root)")]
    MultiValued(ChartName),
    #[error("no chart {0} in this atlas")]
    NoSuchChart(ChartName),
    #[error("compactify needs the A+ exocurve, got {0}")]
    WrongModel(Model),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChartName {
    #[serde(rename = "U_p")]
    Up,
    #[serde(rename = "U_s")]
    Us,
    #[serde(rename = "U_q")]
    Uq,
    #[serde(rename = "~U_p")]
    UpTilde,
}

impl ChartName {
    pub fn coordinate(self) -> &'static str {
        match self {
            ChartName::Up => "u_p",
            ChartName::Us => "u_s",
            ChartName::Uq => "u_q",
            ChartName::UpTilde => "w_p",
        }
    }
}

impl fmt::Display for ChartName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChartName::Up => "U_p",
            ChartName::Us => "U_s",
            ChartName::Uq => "U_q",
            ChartName::UpTilde => "~U_p",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    #[serde(rename = "A_plus")]
    APlus,
    #[serde(rename = "A_minus")]
    AMinus,
    #[serde(rename = "P151")]
    P151,
    #[serde(rename = "CompactifiedA_plus")]
    CompactifiedAPlus,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::APlus => "A_plus",
            Model::AMinus => "A_minus",
            Model::P151 => "P151",
            Model::CompactifiedAPlus => "CompactifiedA_plus",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GlobalType {
    #[serde(rename = "C^1")]
    C1,
    #[serde(rename = "C^1/Z5")]
    C1ModZ5,
    /// `P^1_[5,1]`, isomorphic to `P^1`.
    #[serde(rename = "P^1")]
    P1,
}

impl fmt::Display for GlobalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GlobalType::C1 => "C^1",
            GlobalType::C1ModZ5 => "C^1/Z5",
            GlobalType::P1 => "P^1 = S^2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chart {
    pub name: ChartName,
    /// Contains its limit point `0`.
    pub proper: bool,
    pub punctured: bool,
    pub orbifold_group_order: u32,
}

impl Chart {
    fn proper(name: ChartName, order: u32) -> Self {
        Self {
            name,
            proper: true,
            punctured: false,
            orbifold_group_order: order,
        }
    }

    fn punctured(name: ChartName) -> Self {
        Self {
            name,
            proper: false,
            punctured: true,
            orbifold_group_order: 1,
        }
    }

    pub fn coordinate(&self) -> &'static str {
        self.name.coordinate()
    }
}

/// `to-coordinate = from-coordinate ^ exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub from: ChartName,
    pub to: ChartName,
    pub exponent: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atlas {
    pub charts: Vec<Chart>,
    pub transitions: Vec<Transition>,
    pub model: Model,
    pub global_type: GlobalType,
}

/// The exocurve on the given sheet.
pub fn build_exocurve(sheet: Sheet) -> Atlas {
    match sheet {
        Sheet::Positive => Atlas {
            charts: vec![Chart::proper(ChartName::Us, 1), Chart::punctured(ChartName::Up)],
            transitions: vec![Transition {
                from: ChartName::Up,
                to: ChartName::Us,
                exponent: GLUE_EXPONENT,
            }],
            model: Model::APlus,
            global_type: GlobalType::C1,
        },
        Sheet::Negative => Atlas {
            charts: vec![Chart::proper(ChartName::Up, 5), Chart::punctured(ChartName::Us)],
            transitions: vec![Transition {
                from: ChartName::Up,
                to: ChartName::Us,
                exponent: GLUE_EXPONENT,
            }],
            model: Model::AMinus,
            global_type: GlobalType::C1ModZ5,
        },
    }
}

pub fn build_exocurve_at_level(level: &BigRational) -> Result<Atlas, AtlasError> {
    Ok(build_exocurve(Sheet::from_level(level)?))
}

/// The comparison space `P^1_[5,1]` with `u_s = u_q^{-5}`.
pub fn comparison_space() -> Atlas {
    Atlas {
        charts: vec![Chart::proper(ChartName::Uq, 5), Chart::proper(ChartName::Us, 1)],
        transitions: vec![Transition {
            from: ChartName::Uq,
            to: ChartName::Us,
            exponent: -GLUE_EXPONENT,
        }],
        model: Model::P151,
        global_type: GlobalType::P1,
    }
}

/// `U_s ∪ (~U_p / Z5)` with `u_s = w_p^{-5}`.
pub fn compactify(a: &Atlas) -> Result<Atlas, AtlasError> {
    if a.model != Model::APlus {
        return Err(AtlasError::WrongModel(a.model));
    }
    Ok(Atlas {
        charts: vec![Chart::proper(ChartName::Us, 1), Chart::proper(ChartName::UpTilde, 5)],
        transitions: vec![Transition {
            from: ChartName::UpTilde,
            to: ChartName::Us,
            exponent: -GLUE_EXPONENT,
        }],
        model: Model::CompactifiedAPlus,
        global_type: GlobalType::P1,
    })
}

/// `(1 - 1/m)·2`, the deficit angle in units of `π`.
pub fn deficit_angle(chart: &Chart) -> Ratio<i64> {
    let m = i64::from(chart.orbifold_group_order.max(1));
    Ratio::new(2 * (m - 1), m)
}

/// Renders a multiple of `π`, e.g. `8π/5`.
pub fn format_pi_multiple(q: Ratio<i64>) -> String {
    match (*q.numer(), *q.denom()) {
        (0, _) => "0".to_string(),
        (1, 1) => "π".to_string(),
        (n, 1) => format!("{n}π"),
        (1, d) => format!("π/{d}"),
        (n, d) => format!("{n}π/{d}"),
    }
}

impl Atlas {
    pub fn chart(&self, name: ChartName) -> Option<&Chart> {
        self.charts.iter().find(|c| c.name == name)
    }

    pub fn proper_charts(&self) -> usize {
        self.charts.iter().filter(|c| c.proper).count()
    }

    pub fn is_compact(&self) -> bool {
        self.global_type == GlobalType::P1
    }

    /// Each proper chart contributes one cell-like point; equals `χ` for
    /// all four models.
    pub fn euler_characteristic(&self) -> i64 {
        self.proper_charts() as i64
    }

    /// Charts with a nontrivial orbifold group.
    pub fn orbifold_points(&self) -> Vec<&Chart> {
        self.charts.iter().filter(|c| c.orbifold_group_order > 1).collect()
    }

    /// Image of `value` in the chart glued to `from`.
    pub fn transition(&self, from: ChartName, value: &Cyclo) -> Result<Cyclo, AtlasError> {
        if self.chart(from).is_none() {
            return Err(AtlasError::NoSuchChart(from));
        }
        let Some(t) = self.transitions.iter().find(|t| t.from == from) else {
            return Err(AtlasError::MultiValued(from));
        };
        if value.is_zero() {
            return Err(AtlasError::BranchPoint(from));
        }
        Ok(value.pow(t.exponent))
    }

    pub fn to_json(&self) -> AtlasJson {
        AtlasJson {
            model: self.model,
            charts: self
                .charts
                .iter()
                .map(|c| ChartJson {
                    name: c.name,
                    coordinate: c.coordinate().to_string(),
                    proper: c.proper,
                    orbifold_order: c.orbifold_group_order,
                })
                .collect(),
            transitions: self.transitions.clone(),
            global_type: self.global_type,
        }
    }

    pub fn report(&self) -> String {
        let mut out = format!("model {} = {}\n", self.model, self.global_type);
        for c in &self.charts {
            out.push_str(&format!(
                "  chart {} ({}) {}",
                c.name,
                c.coordinate(),
                if c.proper { "proper" } else { "punctured" }
            ));
            if c.orbifold_group_order > 1 {
                out.push_str(&format!(
                    ", Z{} orbifold point, deficit angle {}",
                    c.orbifold_group_order,
                    format_pi_multiple(deficit_angle(c))
                ));
            }
            out.push('\n');
        }
        for t in &self.transitions {
            out.push_str(&format!(
                "  {} = {}^{}\n",
                t.to.coordinate(),
                t.from.coordinate(),
                t.exponent
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartJson {
    pub name: ChartName,
    pub coordinate: String,
    pub proper: bool,
    pub orbifold_order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasJson {
    pub model: Model,
    pub charts: Vec<ChartJson>,
    pub transitions: Vec<Transition>,
    pub global_type: GlobalType,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CyclotomicField;
    use num::Zero;
    use proptest::prelude::*;

    fn q5() -> CyclotomicField {
        CyclotomicField::new(5).unwrap()
    }

    #[test]
    fn sheets() {
        let plus = build_exocurve(Sheet::Positive);
        assert_eq!(plus.proper_charts(), 1);
        assert!(plus.chart(ChartName::Us).unwrap().proper);
        assert!(plus.chart(ChartName::Up).unwrap().punctured);
        assert_eq!(plus.global_type, GlobalType::C1);
        let minus = build_exocurve(Sheet::Negative);
        assert_eq!(minus.proper_charts(), 1);
        assert!(minus.chart(ChartName::Up).unwrap().proper);
        assert_eq!(minus.chart(ChartName::Up).unwrap().orbifold_group_order, 5);
        assert_eq!(minus.global_type, GlobalType::C1ModZ5);
        assert_eq!(
            build_exocurve_at_level(&BigRational::zero()),
            Err(AtlasError::QuantumRegion(QuantumRegion))
        );
        for a in [plus, minus, comparison_space(), compactify(&build_exocurve(Sheet::Positive)).unwrap()] {
            assert!(a.charts.iter().all(|c| c.proper != c.punctured));
            assert!(a.transitions.iter().all(|t| t.exponent.abs() == 5));
        }
    }

    #[test]
    fn transitions() {
        let f = q5();
        let plus = build_exocurve(Sheet::Positive);
        assert_eq!(plus.transition(ChartName::Up, &f.from_int(2)).unwrap(), f.from_int(32));
        let two_zeta = &f.from_int(2) * &f.zeta();
        assert_eq!(plus.transition(ChartName::Up, &two_zeta).unwrap(), f.from_int(32));
        assert_eq!(
            comparison_space().transition(ChartName::Uq, &f.one()).unwrap(),
            f.one()
        );
        assert_eq!(
            plus.transition(ChartName::Up, &f.zero()),
            Err(AtlasError::BranchPoint(ChartName::Up))
        );
        assert_eq!(
            plus.transition(ChartName::Us, &f.one()),
            Err(AtlasError::MultiValued(ChartName::Us))
        );
        assert_eq!(
            plus.transition(ChartName::Uq, &f.one()),
            Err(AtlasError::NoSuchChart(ChartName::Uq))
        );
        let half = f.from_rational(BigRational::new(1.into(), 2.into()));
        assert_eq!(comparison_space().transition(ChartName::Uq, &half).unwrap(), f.from_int(32));
    }

    #[test]
    fn compactification() {
        let c = compactify(&build_exocurve(Sheet::Positive)).unwrap();
        assert_eq!(c.model, Model::CompactifiedAPlus);
        assert_eq!(c.charts.len(), 2);
        assert_eq!(c.proper_charts(), 2);
        assert!(c.is_compact());
        assert_eq!(c.euler_characteristic(), 2);
        let orb = c.orbifold_points();
        assert_eq!(orb.len(), 1);
        assert_eq!(deficit_angle(orb[0]), Ratio::new(8, 5));
        assert_eq!(format_pi_multiple(deficit_angle(orb[0])), "8π/5");
        assert_eq!(compactify(&c), Err(AtlasError::WrongModel(Model::CompactifiedAPlus)));
        assert_eq!(
            compactify(&build_exocurve(Sheet::Negative)),
            Err(AtlasError::WrongModel(Model::AMinus))
        );
    }

    #[test]
    fn deficit_angles() {
        let chart = |m| Chart::proper(ChartName::Uq, m);
        assert_eq!(deficit_angle(&chart(1)), Ratio::new(0, 1));
        assert_eq!(deficit_angle(&chart(2)), Ratio::new(1, 1));
        assert_eq!(format_pi_multiple(deficit_angle(&chart(2))), "π");
        assert_eq!(format_pi_multiple(deficit_angle(&chart(1))), "0");
    }

    proptest! {
        #[test]
        fn orbit_collapses(coeffs in proptest::collection::vec(-9i64..=9, 4)) {
            let f = q5();
            let u = f.reduce(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect());
            prop_assume!(!u.is_zero());
            let a = build_exocurve(Sheet::Positive);
            let base = a.transition(ChartName::Up, &u).unwrap();
            for k in 1..5 {
                prop_assert_eq!(a.transition(ChartName::Up, &(&u * &f.zeta_pow(k))).unwrap(), base.clone());
            }
        }
    }
}
