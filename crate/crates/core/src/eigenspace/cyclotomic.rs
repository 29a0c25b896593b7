use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free::{format_rational, parse_rational};

/// Dense polynomial over Q, lowest degree first, no trailing zeros.
type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut out: Poly = (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `d` nonzero.
fn poly_divrem(a: &[BigRational], d: &[BigRational]) -> (Poly, Poly) {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let dl = d.len();
    let lead = d[dl - 1].clone();
    if r.len() < dl {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - dl + 1];
    while r.len() >= dl {
        let shift = r.len() - dl;
        let c = &r[r.len() - 1] / &lead;
        for (i, di) in d.iter().enumerate() {
            r[shift + i] -= &c * di;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// `Phi_n` with integer coefficients, lowest degree first.
///
/// Computed as `t^n - 1` divided by `Phi_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u64) -> Result<Vec<BigInt>> {
    if n == 0 {
        return Err(Error::InvalidModulus(0));
    }
    let mut num: Poly = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let phi_d: Poly = cyclotomic_polynomial(d)?
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let (q, r) = poly_divrem(&num, &phi_d);
        debug_assert!(r.is_empty());
        num = q;
    }
    Ok(num.into_iter().map(|c| c.to_integer()).collect())
}

/// `Q(w)` with `w` a primitive `n`-th root of unity, realized as `Q[t] / Phi_n`.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    order: u64,
    modulus: Poly,
}

impl CyclotomicField {
    pub fn new(order: u64) -> Result<Arc<Self>> {
        let modulus = cyclotomic_polynomial(order)?
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        Ok(Arc::new(CyclotomicField { order, modulus }))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `deg Phi_n`, the dimension of the field over Q.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, p: Poly) -> Poly {
        if p.len() <= self.degree() {
            let mut p = p;
            trim(&mut p);
            return p;
        }
        poly_divrem(&p, &self.modulus).1
    }

    pub fn zero(self: &Arc<Self>) -> CyclotomicNumber {
        CyclotomicNumber {
            field: self.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(self: &Arc<Self>) -> CyclotomicNumber {
        self.rational(BigRational::one())
    }

    pub fn rational(self: &Arc<Self>, c: BigRational) -> CyclotomicNumber {
        self.from_coefficients(vec![c])
    }

    pub fn integer(self: &Arc<Self>, c: i64) -> CyclotomicNumber {
        self.rational(BigRational::from_integer(c.into()))
    }

    /// `w^k`, for any integer `k`.
    pub fn omega_power(self: &Arc<Self>, k: i64) -> CyclotomicNumber {
        let e = k.rem_euclid(self.order as i64) as usize;
        let mut p = vec![BigRational::zero(); e + 1];
        p[e] = BigRational::one();
        self.from_coefficients(p)
    }

    /// Reduces an arbitrary polynomial in `w`.
    pub fn from_coefficients(self: &Arc<Self>, coeffs: Vec<BigRational>) -> CyclotomicNumber {
        CyclotomicNumber {
            field: self.clone(),
            coeffs: self.reduce(coeffs),
        }
    }

    pub fn from_json(self: &Arc<Self>, coeffs: &[RationalJson]) -> Result<CyclotomicNumber> {
        Ok(self.from_coefficients(
            coeffs
                .iter()
                .map(RationalJson::to_rational)
                .collect::<Result<_>>()?,
        ))
    }
}

/// Rational for JSON: a number when it is an integer fitting in i64, else `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalJson {
    Int(i64),
    Text(String),
}

impl RationalJson {
    pub fn from_rational(c: &BigRational) -> Self {
        match (c.is_integer(), c.numer().to_i64()) {
            (true, Some(v)) => RationalJson::Int(v),
            _ => RationalJson::Text(format_rational(c)),
        }
    }

    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            RationalJson::Int(v) => Ok(BigRational::from_integer((*v).into())),
            RationalJson::Text(s) => parse_rational(s),
        }
    }
}

/// Element of a cyclotomic field in canonical reduced form: a polynomial in `w`
/// of degree below `deg Phi_n`.
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    coeffs: Poly,
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl CyclotomicNumber {
    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(
            self.field.order, other.field.order,
            "cyclotomic numbers from different fields"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let mut out: Poly = (0..self.coeffs.len().max(other.coeffs.len()))
            .map(|i| {
                let x = self
                    .coeffs
                    .get(i)
                    .cloned()
                    .unwrap_or_else(BigRational::zero);
                match other.coeffs.get(i) {
                    Some(y) => x + y,
                    None => x,
                }
            })
            .collect();
        trim(&mut out);
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs: poly_sub(&self.coeffs, &other.coeffs),
        }
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs: self.field.reduce(poly_mul(&self.coeffs, &other.coeffs)),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut coeffs: Poly = self.coeffs.iter().map(|x| x * c).collect();
        trim(&mut coeffs);
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against
    /// `Phi_n`; `None` only for zero, since `Phi_n` is irreducible.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (mut r0, mut r1) = (self.field.modulus.clone(), self.coeffs.clone());
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant gcd.
        if r0.len() != 1 {
            return None;
        }
        let c = r0[0].recip();
        Some(CyclotomicNumber {
            field: self.field.clone(),
            coeffs: self.field.reduce(s0.into_iter().map(|x| x * &c).collect()),
        })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inverse().map(|inv| self.mul(&inv))
    }

    pub fn to_json(&self) -> Vec<RationalJson> {
        self.coeffs
            .iter()
            .map(RationalJson::from_rational)
            .collect()
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            let power = match k {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{k}"),
            };
            if k == 0 {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&power)?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), power)?;
            }
        }
        Ok(())
    }
}
