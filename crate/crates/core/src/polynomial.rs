//! Sparse multivariate polynomials over `Q(ζ_k)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::complex::Complex64;
use num::{BigInt, BigRational, Signed};

use crate::cyclotomic::{Cyclo, CyclotomicField};

/// Hard cap on the number of variables a polynomial may carry.
pub const MAX_VARS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolynomialError {
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    Arity { expected: usize, got: usize },
}

/// Exponent vector. Unused trailing slots are zero, so comparisons between
/// monomials of the same ring never look at them.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u16; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = [0u16; MAX_VARS];
        m[..exps.len()].copy_from_slice(exps);
        Self(m)
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.0[i] = 1;
        m
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn exponents(&self) -> &[u16; MAX_VARS] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0) {
            *a = a.checked_add(b).expect("exponent overflow");
        }
        Self(m)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        self.divides(other).then(|| {
            let mut m = other.0;
            for (a, b) in m.iter_mut().zip(self.0) {
                *a -= b;
            }
            Self(m)
        })
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0) {
            *a = (*a).max(b);
        }
        Self(m)
    }

    pub fn coprime(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    /// Graded reverse lexicographic comparison.
    pub fn cmp_grevlex(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..MAX_VARS).rev() {
                match self.0[i].cmp(&other.0[i]) {
                    Ordering::Equal => continue,
                    ord => return ord.reverse(),
                }
            }
            Ordering::Equal
        })
    }
}

/// Graded lexicographic order: total degree first, then the first variable
/// wins.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Ordered variable names shared by all polynomials of one ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Variables(Arc<[String]>);

impl Variables {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        assert!(names.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        Self(names.into())
    }

    /// `s0, …, s{n-1}`.
    pub fn s(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("s{i}")))
    }

    /// `s0, …, s{n-1}, p`.
    pub fn s_and_p(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("s{i}")).chain(["p".to_string()]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

/// Polynomial with coefficients in one cyclotomic field. Terms with zero
/// coefficient are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Variables,
    field: CyclotomicField,
    terms: BTreeMap<Monomial, Cyclo>,
}

impl Polynomial {
    pub fn zero(vars: Variables, field: CyclotomicField) -> Self {
        Self {
            vars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Variables, c: Cyclo) -> Self {
        let field = c.field();
        Self::from_terms(vars, field, [(Monomial::one(), c)])
    }

    pub fn variable(vars: Variables, field: CyclotomicField, i: usize) -> Self {
        assert!(i < vars.len());
        let one = field.one();
        Self::from_terms(vars, field, [(Monomial::var(i), one)])
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms(
        vars: Variables,
        field: CyclotomicField,
        terms: impl IntoIterator<Item = (Monomial, Cyclo)>,
    ) -> Self {
        let mut map: BTreeMap<Monomial, Cyclo> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert!(m.0[vars.len()..].iter().all(|&e| e == 0));
            match map.get_mut(&m) {
                Some(acc) => *acc += &c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Self {
            vars,
            field,
            terms: map,
        }
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Cyclo)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Cyclo> {
        self.terms.get(m)
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn has_rational_coefficients(&self) -> bool {
        self.terms.values().all(Cyclo::is_rational)
    }

    /// Whether variable `i` occurs in some term.
    pub fn uses_variable(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    /// True iff every term has total degree `d`.
    pub fn is_homogeneous(&self, d: u32) -> Result<bool, PolynomialError> {
        if self.is_zero() {
            return Err(PolynomialError::ZeroPolynomial);
        }
        Ok(self.terms.keys().all(|m| m.degree() == d))
    }

    /// Same polynomial viewed over another coefficient field. Only valid
    /// when every coefficient is rational.
    pub fn with_field(&self, field: &CyclotomicField) -> Option<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Some((*m, field.from_rational(c.to_rational()?))))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::from_terms(self.vars.clone(), field.clone(), terms))
    }

    fn check_ring(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        Self::from_terms(
            self.vars.clone(),
            self.field.clone(),
            self.terms.iter().map(|(m, a)| (*m, a * c)),
        )
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let e = m.0[i];
            let mut dm = *m;
            dm.0[i] -= 1;
            (dm, c.scale(&BigRational::from_integer(BigInt::from(e))))
        });
        Self::from_terms(self.vars.clone(), self.field.clone(), terms)
    }

    /// `∂g/∂x_i` for every variable, in variable order.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.n_vars()).map(|i| self.derivative(i)).collect()
    }

    /// Symmetric matrix of second partials.
    pub fn hessian(&self) -> Vec<Vec<Self>> {
        let grad = self.gradient();
        let n = self.n_vars();
        let mut h: Vec<Vec<Self>> = vec![Vec::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                let entry = if j < i {
                    h[j][i].clone()
                } else {
                    grad[i].derivative(j)
                };
                h[i].push(entry);
            }
        }
        h
    }

    /// Exact value at `point`.
    pub fn evaluate(&self, point: &[Cyclo]) -> Result<Cyclo, PolynomialError> {
        if point.len() != self.n_vars() {
            return Err(PolynomialError::Arity {
                expected: self.n_vars(),
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<Cyclo>> = point.iter().map(|x| vec![self.field.one(), x.clone()]).collect();
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0[..self.n_vars()].iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &pw[1];
                    pw.push(next);
                }
                t = &t * &pw[e as usize];
                if t.is_zero() {
                    break;
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Floating-point shadow of [`evaluate`](Self::evaluate) under the
    /// embedding `ζ ↦ exp(2πi/k)`.
    pub fn evaluate_complex(&self, point: &[Complex64]) -> Result<Complex64, PolynomialError> {
        if point.len() != self.n_vars() {
            return Err(PolynomialError::Arity {
                expected: self.n_vars(),
                got: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.0[..self.n_vars()]
                    .iter()
                    .zip(point)
                    .fold(c.to_complex(), |acc, (&e, x)| acc * x.powu(e as u32))
            })
            .sum())
    }

    /// Substitutes `x_i = value`, keeping the variable list.
    pub fn substitute(&self, i: usize, value: &Cyclo) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = *m;
            let e = m2.0[i];
            m2.0[i] = 0;
            (m2, c * &value.pow(e as i64))
        });
        Self::from_terms(self.vars.clone(), self.field.clone(), terms)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical printing: terms in descending graded-lex order; a coefficient
/// outside `Q` is expanded into one term per power of `zeta`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms() {
            let mono = format_monomial(m, &self.vars);
            for (i, q) in c.coefficients().iter().enumerate().rev() {
                if num::Zero::is_zero(q) {
                    continue;
                }
                let neg = q.is_negative();
                if first {
                    if neg {
                        f.write_str("-")?;
                    }
                } else {
                    f.write_str(if neg { " - " } else { " + " })?;
                }
                first = false;
                let abs = q.abs();
                let mut factors: Vec<String> = Vec::new();
                if !num::One::is_one(&abs) {
                    factors.push(abs.to_string());
                }
                match i {
                    0 => {}
                    1 => factors.push("zeta".into()),
                    _ => factors.push(format!("zeta^{i}")),
                }
                if let Some(mono) = &mono {
                    factors.push(mono.clone());
                }
                if factors.is_empty() {
                    factors.push("1".into());
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn format_monomial(m: &Monomial, vars: &Variables) -> Option<String> {
    let parts: Vec<String> = vars
        .names()
        .iter()
        .enumerate()
        .filter(|(i, _)| m.0[*i] > 0)
        .map(|(i, name)| match m.0[i] {
            1 => name.clone(),
            e => format!("{name}^{e}"),
        })
        .collect();
    (!parts.is_empty()).then(|| parts.join("*"))
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.check_ring(rhs);
        Polynomial::from_terms(
            self.vars.clone(),
            self.field.clone(),
            self.terms
                .iter()
                .chain(&rhs.terms)
                .map(|(m, c)| (*m, c.clone())),
        )
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.check_ring(rhs);
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        Polynomial::from_terms(self.vars.clone(), self.field.clone(), terms)
    }
}
