//! Exact scalars: arbitrary-precision rationals and residues modulo an odd prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("operands live in different fields ({0} and {1})")]
    MixedContexts(FieldCtx, FieldCtx),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not an odd prime")]
    InvalidModulus(u64),
    #[error("operation not supported over {0}")]
    UnsupportedContext(FieldCtx),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// An odd prime modulus. Characteristic 2 is rejected at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddPrime(u64);

impl OddPrime {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 3 && is_prime(p) {
            Ok(OddPrime(p))
        } else {
            Err(FieldError::InvalidModulus(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// The field a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldCtx {
    Rationals,
    Prime(OddPrime),
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldCtx::Rationals => write!(f, "Q"),
            FieldCtx::Prime(p) => write!(f, "F_{}", p.0),
        }
    }
}

impl FieldCtx {
    /// `F_p` for an odd prime `p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        OddPrime::new(p).map(FieldCtx::Prime)
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            FieldCtx::Rationals => None,
            FieldCtx::Prime(p) => Some(p.0),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, FieldCtx::Prime(_))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            FieldCtx::Rationals => Scalar(Repr::Q(BigRational::from_integer(BigInt::from(v)))),
            FieldCtx::Prime(p) => Scalar(Repr::Fp {
                value: (v as i128).rem_euclid(p.0 as i128) as u64,
                p,
            }),
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self {
            FieldCtx::Rationals => Scalar(Repr::Q(BigRational::from_integer(v.clone()))),
            FieldCtx::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p.0));
                Scalar(Repr::Fp {
                    value: r.to_u64().expect("residue fits in u64"),
                    p,
                })
            }
        }
    }

    /// `num / den` in this field.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar, FieldError> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        self.from_bigint(num).checked_div(&d)
    }

    /// All elements of a prime field in increasing residue order.
    pub fn elements(self) -> Result<impl Iterator<Item = Scalar>, FieldError> {
        match self {
            FieldCtx::Rationals => Err(FieldError::UnsupportedContext(self)),
            FieldCtx::Prime(p) => Ok((0..p.0).map(move |value| Scalar(Repr::Fp { value, p }))),
        }
    }

    /// Parses `"7"`, `"-3"` or `"a/b"`.
    pub fn parse(self, s: &str) -> Result<Scalar, FieldError> {
        let bad = || FieldError::Parse(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        self.from_ratio(&num, &den)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    // BigRational keeps lowest terms with positive denominator.
    Q(BigRational),
    Fp { value: u64, p: OddPrime },
}

/// An exact field element in canonical form.
///
/// The arithmetic operators panic when the operands come from different
/// fields; use the `checked_*` methods when the contexts are not known to agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(Repr);

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Q(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Q(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Fp { value, .. } => write!(f, "{}", value),
        }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Tonelli-Shanks. `a` must be a nonzero quadratic residue mod the odd prime `p`.
fn tonelli_shanks(a: u64, p: u64) -> u64 {
    if p % 4 == 3 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Scalar {
    pub fn ctx(&self) -> FieldCtx {
        match &self.0 {
            Repr::Q(_) => FieldCtx::Rationals,
            Repr::Fp { p, .. } => FieldCtx::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(r) => r.is_zero(),
            Repr::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Q(r) => r.is_one(),
            Repr::Fp { value, .. } => *value == 1,
        }
    }

    /// The rational value, when in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Q(r) => Some(r),
            Repr::Fp { .. } => None,
        }
    }

    /// The canonical residue in `[0, p)`, when in `F_p`.
    pub fn as_residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Q(_) => None,
            Repr::Fp { value, .. } => Some(*value),
        }
    }

    fn same_ctx(&self, other: &Scalar) -> Result<(), FieldError> {
        if self.ctx() == other.ctx() {
            Ok(())
        } else {
            Err(FieldError::MixedContexts(self.ctx(), other.ctx()))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_ctx(other)?;
        Ok(Scalar(match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => Repr::Q(a + b),
            (Repr::Fp { value: a, p }, Repr::Fp { value: b, .. }) => {
                let m = p.0;
                let s = (*a as u128 + *b as u128) % m as u128;
                Repr::Fp {
                    value: s as u64,
                    p: *p,
                }
            }
            _ => unreachable!(),
        }))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_ctx(other)?;
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_ctx(other)?;
        Ok(Scalar(match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => Repr::Q(a * b),
            (Repr::Fp { value: a, p }, Repr::Fp { value: b, .. }) => Repr::Fp {
                value: mul_mod(*a, *b, p.0),
                p: *p,
            },
            _ => unreachable!(),
        }))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_ctx(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Scalar(match &self.0 {
            Repr::Q(a) => Repr::Q(a.recip()),
            Repr::Fp { value, p } => Repr::Fp {
                value: pow_mod(*value, p.0 - 2, p.0),
                p: *p,
            },
        }))
    }

    fn neg_ref(&self) -> Scalar {
        Scalar(match &self.0 {
            Repr::Q(a) => Repr::Q(-a),
            Repr::Fp { value, p } => Repr::Fp {
                value: if *value == 0 { 0 } else { p.0 - value },
                p: *p,
            },
        })
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Quadratic-residue test over `F_p`, returning the least-residue square root
    /// as witness. Not available over `Q`.
    pub fn is_square(&self) -> Result<Option<Scalar>, FieldError> {
        match &self.0 {
            Repr::Q(_) => Err(FieldError::UnsupportedContext(self.ctx())),
            Repr::Fp { .. } => Ok(self.sqrt()),
        }
    }

    /// An exact square root if one exists in the field: the nonnegative root
    /// over `Q`, the smaller of the two residues over `F_p`.
    pub fn sqrt(&self) -> Option<Scalar> {
        match &self.0 {
            Repr::Q(a) => {
                let n = bigint_sqrt_exact(a.numer())?;
                let d = bigint_sqrt_exact(a.denom())?;
                Some(Scalar(Repr::Q(BigRational::new(n, d))))
            }
            Repr::Fp { value, p } => {
                let m = p.0;
                if *value == 0 {
                    return Some(self.clone());
                }
                if pow_mod(*value, (m - 1) / 2, m) != 1 {
                    return None;
                }
                let r = tonelli_shanks(*value, m);
                Some(Scalar(Repr::Fp {
                    value: r.min(m - r),
                    p: *p,
                }))
            }
        }
    }

    /// Sign over `Q` (-1, 0, 1); `None` over `F_p`.
    pub fn signum(&self) -> Option<i32> {
        match &self.0 {
            Repr::Q(a) if a.is_zero() => Some(0),
            Repr::Q(a) if a.is_positive() => Some(1),
            Repr::Q(_) => Some(-1),
            Repr::Fp { .. } => None,
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs)
            .expect("scalar addition across fields")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs)
            .expect("scalar subtraction across fields")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs)
            .expect("scalar multiplication across fields")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}
