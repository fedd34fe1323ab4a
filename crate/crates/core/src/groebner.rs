//! Buchberger's algorithm (grevlex, Gebauer–Möller pair pruning) and Hilbert
//! series of monomial ideals.
//!
//! Only what the singular-locus certificate needs: the leading-term ideal of
//! a homogeneous ideal, from which Krull dimension and degree are read off.

use std::cmp::Ordering;

use num::{BigInt, One, Signed, Zero};

use crate::cyclotomic::Cyclo;
use crate::polynomial::{Monomial, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("Groebner basis computation exceeded its budget of {0} S-pair reductions")]
    BudgetExceeded(usize),
}

/// Polynomial as a list of terms sorted by descending grevlex order.
#[derive(Debug, Clone)]
struct Sparse {
    terms: Vec<(Monomial, Cyclo)>,
}

impl Sparse {
    fn from_poly(p: &Polynomial) -> Self {
        let mut terms: Vec<(Monomial, Cyclo)> = p.terms().map(|(m, c)| (*m, c.clone())).collect();
        terms.sort_by(|a, b| b.0.cmp_grevlex(&a.0));
        Self { terms }
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(&mut self) {
        let inv = self.terms[0].1.inv().expect("leading coefficient is nonzero");
        if inv.is_one() {
            return;
        }
        for t in &mut self.terms {
            t.1 = &t.1 * &inv;
        }
    }

    /// `self - c·m·g`, where the leading terms are known to cancel.
    fn sub_mul(&self, c: &Cyclo, m: &Monomial, g: &Sparse, skip_lead: bool) -> Sparse {
        let a = if skip_lead { &self.terms[1..] } else { &self.terms[..] };
        let b = if skip_lead { &g.terms[1..] } else { &g.terms[..] };
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp_grevlex(&m.mul(&y.0)),
                (Some(_), None) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((m.mul(&b[j].0), -(c * &b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &a[i].1 - &(c * &b[j].1);
                    if !v.is_zero() {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Sparse { terms: out }
    }
}

fn s_polynomial(f: &Sparse, g: &Sparse) -> Sparse {
    let l = f.lm().lcm(g.lm());
    let mf = f.lm().quotient_of(&l).expect("lm divides lcm");
    let mg = g.lm().quotient_of(&l).expect("lm divides lcm");
    // both monic: S = mf·f − mg·g
    let one = f.terms[0].1.field().one();
    let scaled_f = Sparse {
        terms: f.terms[1..].iter().map(|(m, c)| (mf.mul(m), c.clone())).collect(),
    };
    let tail_g = Sparse {
        terms: g.terms[1..].to_vec(),
    };
    scaled_f.sub_mul(&one, &mg, &tail_g, false)
}

/// Full reduction of `f` modulo the polynomials `basis[i]` with `active[i]`.
fn reduce(mut f: Sparse, basis: &[Sparse], active: &[bool]) -> Sparse {
    let mut done: Vec<(Monomial, Cyclo)> = Vec::new();
    while !f.is_zero() {
        let lm = *f.lm();
        let divisor = basis
            .iter()
            .zip(active)
            .filter(|(_, &a)| a)
            .find_map(|(g, _)| g.lm().quotient_of(&lm).map(|q| (g, q)));
        match divisor {
            Some((g, q)) => {
                let c = f.terms[0].1.clone();
                f = f.sub_mul(&c, &q, g, true);
            }
            None => {
                done.push(f.terms.remove(0));
            }
        }
    }
    Sparse { terms: done }
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Leading monomials of a minimal Groebner basis (grevlex) of the ideal
/// generated by `gens`.
///
/// `budget` bounds the number of S-pairs processed.
pub fn leading_monomials(gens: &[Polynomial], budget: usize) -> Result<Vec<Monomial>, GroebnerError> {
    Ok(groebner_basis(gens, budget)?
        .into_iter()
        .map(|g| *g.lm())
        .collect())
}

fn groebner_basis(gens: &[Polynomial], budget: usize) -> Result<Vec<Sparse>, GroebnerError> {
    let mut basis: Vec<Sparse> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut inputs: Vec<Sparse> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(Sparse::from_poly)
        .collect();
    inputs.sort_by(|a, b| a.lm().cmp_grevlex(b.lm()));
    for f in inputs {
        let mut h = reduce(f, &basis, &active);
        if !h.is_zero() {
            h.make_monic();
            update(&mut basis, &mut active, &mut pairs, h);
        }
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        processed += 1;
        if processed > budget {
            return Err(GroebnerError::BudgetExceeded(budget));
        }
        let k = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                pa.lcm
                    .cmp_grevlex(&pb.lcm)
                    .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
            })
            .expect("nonempty");
        let pair = pairs.swap_remove(k);
        let s = s_polynomial(&basis[pair.i], &basis[pair.j]);
        let mut h = reduce(s, &basis, &active);
        if !h.is_zero() {
            h.make_monic();
            update(&mut basis, &mut active, &mut pairs, h);
        }
    }
    Ok(basis
        .into_iter()
        .zip(active)
        .filter_map(|(g, a)| a.then_some(g))
        .collect())
}

fn update(basis: &mut Vec<Sparse>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>, h: Sparse) {
    let hi = basis.len();
    let lh = *h.lm();
    let mut candidates: Vec<Pair> = (0..hi)
        .filter(|&g| active[g])
        .map(|g| Pair {
            i: g,
            j: hi,
            lcm: basis[g].lm().lcm(&lh),
        })
        .collect();
    let mut kept: Vec<Pair> = Vec::new();
    while let Some(p) = candidates.pop() {
        let coprime = basis[p.i].lm().coprime(&lh);
        if coprime || !candidates.iter().chain(&kept).any(|q| q.lcm.divides(&p.lcm)) {
            kept.push(p);
        }
    }
    kept.retain(|p| !basis[p.i].lm().coprime(&lh));
    pairs.retain(|p| {
        !(lh.divides(&p.lcm)
            && basis[p.i].lm().lcm(&lh) != p.lcm
            && basis[p.j].lm().lcm(&lh) != p.lcm)
    });
    pairs.extend(kept);
    for g in 0..hi {
        if active[g] && lh.divides(basis[g].lm()) {
            active[g] = false;
        }
    }
    basis.push(h);
    active.push(true);
}

/// Polynomial in `t` with integer coefficients, lowest degree first.
pub type TPoly = Vec<BigInt>;

fn tpoly_add(a: &TPoly, b: &TPoly) -> TPoly {
    let n = a.len().max(b.len());
    let mut out: TPoly = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default()
        })
        .collect();
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

fn tpoly_shift(a: &TPoly, k: usize) -> TPoly {
    let mut out = vec![BigInt::zero(); k];
    out.extend(a.iter().cloned());
    out
}

fn tpoly_mul(a: &TPoly, b: &TPoly) -> TPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(Monomial::degree);
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Numerator `N(t)` of the Hilbert series `N(t)/(1-t)^n` of `S/I` for a
/// monomial ideal `I`.
pub fn hilbert_numerator(gens: &[Monomial]) -> TPoly {
    numerator(minimalize(gens.to_vec()))
}

fn numerator(gens: Vec<Monomial>) -> TPoly {
    if gens.is_empty() {
        return vec![BigInt::one()];
    }
    let pairwise_coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.coprime(b)));
    if pairwise_coprime {
        return gens.iter().fold(vec![BigInt::one()], |acc, g| {
            let mut f = vec![BigInt::zero(); g.degree() as usize + 1];
            f[0] = BigInt::one();
            f[g.degree() as usize] -= BigInt::one();
            tpoly_mul(&acc, &f)
        });
    }
    // Pivot x^e with x shared by the most mixed generators and e a median
    // exponent among them. Any pure power x^a in a minimal ideal has a > e,
    // so x^e is not in I and I : x^e is strictly larger than I.
    let mixed: Vec<&Monomial> = gens.iter().filter(|g| g.support().count() > 1).collect();
    let mut counts = [0usize; crate::polynomial::MAX_VARS];
    for g in &mixed {
        for v in g.support() {
            counts[v] += 1;
        }
    }
    let var = (0..counts.len()).max_by_key(|&v| counts[v]).expect("some variable");
    let mut exps: Vec<u16> = mixed.iter().map(|g| g.exponent(var)).filter(|&e| e > 0).collect();
    exps.sort_unstable();
    let e = exps[exps.len() / 2];
    let mut pe = [0u16; crate::polynomial::MAX_VARS];
    pe[var] = e;
    let pivot = Monomial::from_exponents(&pe);

    // N(I) = N(I + (p)) + t^deg(p) · N(I : p)
    let mut plus = gens.clone();
    plus.push(pivot);
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut ex = *g.exponents();
            ex[var] = ex[var].saturating_sub(e);
            Monomial::from_exponents(&ex)
        })
        .collect();
    let a = numerator(minimalize(plus));
    let b = numerator(minimalize(colon));
    let shifted = tpoly_shift(&b, e as usize);
    tpoly_add(&a, &shifted)
}

/// Krull dimension and degree of `S/I` read from the Hilbert series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertData {
    pub krull_dimension: usize,
    /// Leading coefficient of the Hilbert polynomial times `(dim-1)!`, i.e.
    /// the multiplicity. For a zero-dimensional projective scheme this is
    /// its length.
    pub degree: BigInt,
}

/// Hilbert data of `S/I` for monomial `I` in `n_vars` variables.
pub fn hilbert_data(gens: &[Monomial], n_vars: usize) -> HilbertData {
    let mut num = hilbert_numerator(gens);
    let mut factors = 0usize;
    // divide by (1 - t) while N(1) = 0
    loop {
        let at_one: BigInt = num.iter().sum();
        if !at_one.is_zero() || num.is_empty() {
            break;
        }
        // N = (1 - t)·Q  ⟹  Q is the prefix sum of N
        let mut acc = BigInt::zero();
        num = num[..num.len() - 1]
            .iter()
            .map(|c| {
                acc += c;
                acc.clone()
            })
            .collect();
        factors += 1;
    }
    let degree: BigInt = num.iter().sum();
    debug_assert!(degree.is_positive() || num.is_empty());
    HilbertData {
        krull_dimension: n_vars - factors,
        degree,
    }
}
