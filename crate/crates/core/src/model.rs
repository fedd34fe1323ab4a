//! The field space `(s0..s4, p)`, its `C*` action and the moment map.

use std::fmt;

use num::complex::Complex64;
use num::{BigRational, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclo;
use crate::polynomial::{Monomial, Polynomial, Variables};

/// `λ`-charge of each `s_i`.
pub const S_WEIGHT: i64 = 1;
/// `λ`-charge of `p`.
pub const P_WEIGHT: i64 = -5;
/// Number of `s` variables.
pub const N_S: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("r = 0 lies in the quantum-corrected region; pick r > 0 or r < 0")]
pub struct QuantumRegion;

/// Sign of the moment-map level `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sheet {
    Positive,
    Negative,
}

impl Sheet {
    pub fn from_level(r: &BigRational) -> Result<Self, QuantumRegion> {
        if r.is_zero() {
            Err(QuantumRegion)
        } else if r.is_positive() {
            Ok(Sheet::Positive)
        } else {
            Ok(Sheet::Negative)
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Sheet::Positive => 1,
            Sheet::Negative => -1,
        }
    }
}

impl fmt::Display for Sheet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sheet::Positive => "r>0",
            Sheet::Negative => "r<0",
        })
    }
}

impl std::str::FromStr for Sheet {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pos" | "positive" | "+" => Ok(Sheet::Positive),
            "neg" | "negative" | "-" => Ok(Sheet::Negative),
            "0" | "zero" => Err(QuantumRegion.to_string()),
            other => Err(format!("unknown sheet {other:?} (expected pos or neg)")),
        }
    }
}

/// `D_r = ‖s‖² − 5|p|² − r` for the charges `(1,1,1,1,1; −5)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentMap {
    level: BigRational,
}

impl MomentMap {
    pub fn new(level: BigRational) -> Result<Self, QuantumRegion> {
        Sheet::from_level(&level)?;
        Ok(Self { level })
    }

    pub fn level(&self) -> &BigRational {
        &self.level
    }

    pub fn sheet(&self) -> Sheet {
        Sheet::from_level(&self.level).expect("validated at construction")
    }

    pub fn value(&self, s: &[Complex64], p: Complex64) -> f64 {
        let s2: f64 = s.iter().map(Complex64::norm_sqr).sum();
        s2 * S_WEIGHT as f64 + P_WEIGHT as f64 * p.norm_sqr() - self.level.to_f64().unwrap_or(f64::NAN)
    }
}

/// Applies `λ: (s, p) ↦ (λ s, λ^{-5} p)`.
pub fn act(lambda: &Cyclo, s: &[Cyclo], p: &Cyclo) -> (Vec<Cyclo>, Cyclo) {
    let s2 = s.iter().map(|x| x * &lambda.pow(S_WEIGHT)).collect();
    (s2, p * &lambda.pow(P_WEIGHT))
}

/// `W = p·G(s)` over the variables `s0..s4, p`.
pub fn superpotential(g: &Polynomial) -> Polynomial {
    let vars = Variables::s_and_p(g.n_vars());
    let terms = g.terms().map(|(m, c)| {
        let mut e: Vec<u16> = m.exponents()[..g.n_vars()].to_vec();
        e.push(1);
        (Monomial::from_exponents(&e), c.clone())
    });
    Polynomial::from_terms(vars, g.field().clone(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_polynomial, ParseContext};

    #[test]
    fn sheets() {
        assert_eq!(Sheet::from_level(&BigRational::from_integer(3.into())), Ok(Sheet::Positive));
        assert_eq!(Sheet::from_level(&BigRational::from_integer((-1).into())), Ok(Sheet::Negative));
        assert_eq!(Sheet::from_level(&BigRational::zero()), Err(QuantumRegion));
        assert!(MomentMap::new(BigRational::zero()).is_err());
        assert_eq!("neg".parse::<Sheet>().unwrap(), Sheet::Negative);
    }

    #[test]
    fn moment_map_value() {
        let d = MomentMap::new(BigRational::from_integer(2.into())).unwrap();
        let s = [Complex64::new(1.0, 1.0), Complex64::new(0.0, 0.0)];
        assert!((d.value(&s, Complex64::new(0.0, 1.0)) - (2.0 - 5.0 - 2.0)).abs() < 1e-12);
        assert_eq!(d.sheet(), Sheet::Positive);
    }

    #[test]
    fn superpotential_is_invariant() {
        let ctx = ParseContext::quintic(5).unwrap();
        let g = parse_polynomial("s0^5+s1^5+s2^5+s3^5+s4^5-5*s0*s1*s2*s3*s4", &ctx).unwrap();
        let w = superpotential(&g);
        assert_eq!(w.n_vars(), 6);
        assert!(w.is_homogeneous(6).unwrap());
        let f = ctx.field;
        let lambda = f.reduce(vec![BigRational::new(2.into(), 3.into()), BigRational::from_integer(1.into())]);
        let s: Vec<Cyclo> = (1..=5).map(|i| f.from_int(i)).collect();
        let p = f.zeta_pow(2);
        let (s2, p2) = act(&lambda, &s, &p);
        let eval = |s: &[Cyclo], p: &Cyclo| {
            let mut pt = s.to_vec();
            pt.push(p.clone());
            w.evaluate(&pt).unwrap()
        };
        assert_eq!(eval(&s, &p), eval(&s2, &p2));
        // G itself has charge 5
        assert_eq!(g.evaluate(&s2).unwrap(), &g.evaluate(&s).unwrap() * &lambda.pow(5));
    }
}
