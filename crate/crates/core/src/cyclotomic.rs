//! Exact arithmetic in `Q(ζ_k)`.
//!
//! Elements are stored densely in the power basis `1, ζ, …, ζ^{φ(k)-1}` and
//! are always reduced modulo the `k`-th cyclotomic polynomial `Φ_k`. Order
//! `k = 1` gives plain rationals (`Φ_1 = x - 1`, so the basis is `{1}`).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Largest root-of-unity order accepted for a session.
pub const MAX_ZETA_ORDER: u32 = 360;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("root-of-unity order must be in 1..={MAX_ZETA_ORDER}, got {0}")]
    BadOrder(u32),
}

#[derive(Debug)]
struct FieldData {
    order: u32,
    /// Coefficients of `Φ_k`, lowest degree first; monic.
    modulus: Vec<i64>,
}

impl FieldData {
    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// Handle on `Q(ζ_k)`. Cheap to clone; instances for the same order share
/// their tables.
#[derive(Clone)]
pub struct CyclotomicField {
    data: Arc<FieldData>,
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.data.order)
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.data.order == other.data.order
    }
}

impl Eq for CyclotomicField {}

fn field_cache() -> &'static Mutex<BTreeMap<u32, Arc<FieldData>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, Arc<FieldData>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Integer coefficients of `Φ_k`, lowest degree first.
pub fn cyclotomic_polynomial(k: u32) -> Vec<i64> {
    // x^k - 1 = prod_{d | k} Φ_d(x)
    let mut num = vec![0i64; k as usize + 1];
    num[0] = -1;
    num[k as usize] = 1;
    for d in 1..k {
        if k.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

impl CyclotomicField {
    pub fn new(order: u32) -> Result<Self, FieldError> {
        if order == 0 || order > MAX_ZETA_ORDER {
            return Err(FieldError::BadOrder(order));
        }
        let mut cache = field_cache().lock().expect("field cache poisoned");
        let data = cache
            .entry(order)
            .or_insert_with(|| {
                Arc::new(FieldData {
                    order,
                    modulus: cyclotomic_polynomial(order),
                })
            })
            .clone();
        Ok(Self { data })
    }

    /// The rational numbers, `Q(ζ_1)`.
    pub fn rationals() -> Self {
        Self::new(1).expect("order 1 is always valid")
    }

    pub fn order(&self) -> u32 {
        self.data.order
    }

    /// `φ(k)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.data.degree()
    }

    pub fn modulus(&self) -> &[i64] {
        &self.data.modulus
    }

    pub fn zero(&self) -> Cyclo {
        Cyclo {
            data: self.data.clone(),
            c: vec![BigRational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> Cyclo {
        self.from_rational(BigRational::one())
    }

    pub fn from_int(&self, n: i64) -> Cyclo {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(&self, q: BigRational) -> Cyclo {
        let mut z = self.zero();
        z.c[0] = q;
        z
    }

    /// `ζ^e` for any integer exponent.
    pub fn zeta_pow(&self, e: i64) -> Cyclo {
        let k = self.order() as i64;
        let e = e.rem_euclid(k) as usize;
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = BigRational::one();
        self.reduce(coeffs)
    }

    pub fn zeta(&self) -> Cyclo {
        self.zeta_pow(1)
    }

    /// The `k` powers `ζ^0, …, ζ^{k-1}`.
    pub fn roots_of_unity(&self) -> Vec<Cyclo> {
        (0..self.order() as i64).map(|e| self.zeta_pow(e)).collect()
    }

    /// Builds an element from arbitrary-length power-basis coefficients,
    /// reducing modulo `Φ_k`.
    pub fn reduce(&self, mut coeffs: Vec<BigRational>) -> Cyclo {
        let d = self.degree();
        let m = &self.data.modulus;
        if coeffs.len() > d {
            for i in (d..coeffs.len()).rev() {
                let c = std::mem::take(&mut coeffs[i]);
                if c.is_zero() {
                    continue;
                }
                for (j, &mj) in m.iter().enumerate().take(d) {
                    if mj != 0 {
                        coeffs[i - d + j] -= &c * BigInt::from(mj);
                    }
                }
            }
            coeffs.truncate(d);
        }
        coeffs.resize(d, BigRational::zero());
        Cyclo {
            data: self.data.clone(),
            c: coeffs,
        }
    }
}

/// An element of `Q(ζ_k)`.
#[derive(Clone)]
pub struct Cyclo {
    data: Arc<FieldData>,
    c: Vec<BigRational>,
}

impl Cyclo {
    pub fn field(&self) -> CyclotomicField {
        CyclotomicField {
            data: self.data.clone(),
        }
    }

    pub fn order(&self) -> u32 {
        self.data.order
    }

    /// Power-basis coefficients, length `φ(k)`.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.c[0].clone())
    }

    fn check_same(&self, other: &Cyclo) {
        assert_eq!(
            self.data.order, other.data.order,
            "mixed cyclotomic fields in one expression"
        );
    }

    pub fn scale(&self, q: &BigRational) -> Cyclo {
        Cyclo {
            data: self.data.clone(),
            c: self.c.iter().map(|x| x * q).collect(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Cyclo> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(self.field().from_rational(self.c[0].recip()));
        }
        let a = trim(self.c.clone());
        let m = trim(
            self.data
                .modulus
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        );
        // extended Euclid: track s with s*a ≡ r (mod m)
        let (mut r0, mut r1) = (m, a);
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since Φ_k is irreducible
        debug_assert_eq!(r0.len(), 1);
        let lc = r0[0].recip();
        let s: Vec<BigRational> = s0.into_iter().map(|x| x * &lc).collect();
        Some(self.field().reduce(s))
    }

    /// Integer power; negative exponents invert (panics on `0^{-e}`).
    pub fn pow(&self, e: i64) -> Cyclo {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = self.field().one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// Image under the embedding `ζ ↦ exp(2πi/k)`.
    pub fn to_complex(&self) -> Complex64 {
        let k = self.data.order as f64;
        self.c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let angle = 2.0 * std::f64::consts::PI * i as f64 / k;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(out)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (Vec::new(), trim(rem));
    }
    let db = b.len() - 1;
    let lc_inv = b[db].recip();
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] * &lc_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.data.order == other.data.order && self.c == other.c
    }
}

impl Eq for Cyclo {}

impl Hash for Cyclo {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.data.order.hash(state);
        self.c.hash(state);
    }
}

impl PartialOrd for Cyclo {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but deterministic total order (not compatible with any field
/// ordering); used for canonical sorting of points.
impl Ord for Cyclo {
    fn cmp(&self, other: &Self) -> Ordering {
        self.data
            .order
            .cmp(&other.data.order)
            .then_with(|| self.c.cmp(&other.c))
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints in the polynomial grammar, highest power of `zeta` first.
impl Cyclo {
    /// `(q, a)` with `self = q·ζ^a` for a power `a` outside the power basis.
    fn as_high_power(&self) -> Option<(BigRational, usize)> {
        let k = self.order() as usize;
        let deg = self.c.len();
        if self.is_zero() || self.c.iter().filter(|c| !c.is_zero()).count() == 1 {
            return None;
        }
        (deg..k).find_map(|a| {
            let z = self.field().zeta_pow(a as i64);
            let i = z.c.iter().position(|c| !c.is_zero())?;
            let q = &self.c[i] / &z.c[i];
            (z.scale(&q) == *self).then_some((q, a))
        })
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, c: &BigRational, power: usize, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if neg { " - " } else { " + " })?;
    }
    match power {
        0 => write!(f, "{abs}"),
        1 if abs.is_one() => f.write_str("zeta"),
        1 => write!(f, "{abs}*zeta"),
        _ if abs.is_one() => write!(f, "zeta^{power}"),
        _ => write!(f, "{abs}*zeta^{power}"),
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((q, a)) = self.as_high_power() {
            return write_term(f, &q, a, true);
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write_term(f, c, i, first)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &'a Cyclo) -> Cyclo {
        self.check_same(rhs);
        Cyclo {
            data: self.data.clone(),
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &'a Cyclo) -> Cyclo {
        self.check_same(rhs);
        Cyclo {
            data: self.data.clone(),
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &'a Cyclo) -> Cyclo {
        self.check_same(rhs);
        let d = self.c.len();
        if d == 1 {
            return Cyclo {
                data: self.data.clone(),
                c: vec![&self.c[0] * &rhs.c[0]],
            };
        }
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        self.field().reduce(prod)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            data: self.data.clone(),
            c: self.c.iter().map(|a| -a).collect(),
        }
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: Cyclo) -> Cyclo {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: &'a Cyclo) -> Cyclo {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        self.check_same(rhs);
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a += b;
        }
    }
}

impl SubAssign<&Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: &Cyclo) {
        self.check_same(rhs);
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a -= b;
        }
    }
}

impl MulAssign<&Cyclo> for Cyclo {
    fn mul_assign(&mut self, rhs: &Cyclo) {
        *self = &*self * rhs;
    }
}
