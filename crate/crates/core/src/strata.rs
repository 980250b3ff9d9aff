//! Closed-form invariants of the stratification of `MO_X(2n+1)` by the
//! Segre invariant `t(V)`: dimensions, bounds, the general values of `t`
//! per component, and the exceptional cases of the rank-`n` subbundle bound.
//!
//! Throughout `N = (n+1)(g−1)`.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("invalid curve parameters: need g >= 2 and n >= 1 (got g={g}, n={n})")]
    InvalidParams { g: u64, n: u64 },
    #[error("t={t} is out of range: need an even t with 0 < t <= {max}")]
    OutOfRange { t: u64, max: u64 },
    #[error("the bound is undefined for n = 1")]
    Undefined,
    #[error("e must be positive")]
    ZeroDegree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CurveParams {
    pub g: u64,
    pub n: u64,
}

impl CurveParams {
    pub fn new(g: u64, n: u64) -> Result<Self, StrataError> {
        if g < 2 || n < 1 {
            return Err(StrataError::InvalidParams { g, n });
        }
        Ok(CurveParams { g, n })
    }

    /// `N = (n+1)(g−1)`.
    pub fn threshold(&self) -> u64 {
        (self.n + 1) * (self.g - 1)
    }
}

/// Component `MO_X(2n+1)^±`; `+` contains the trivial bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Lagrangian subbundles of degree `−t/2`: even degree lands in `+`.
    pub fn of_t(t: u64) -> Sign {
        if t.is_multiple_of(4) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

impl std::str::FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(format!("expected + or -, got {other:?}")),
        }
    }
}

/// How a stratum dimension was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumFlag {
    /// `t ≤ N`: the parameter-space formula applies.
    Lower,
    /// `N ≤ t ≤ N+3`: the stratum is dense in a component.
    Dense,
    /// `t < N`: a general member has a unique maximal Lagrangian subbundle.
    Unique,
    /// `t = N`: finitely many maximal Lagrangian subbundles.
    Finite,
    /// `t > N`: infinitely many.
    Infinite,
}

impl fmt::Display for StratumFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StratumFlag::Lower => "lower",
            StratumFlag::Dense => "dense",
            StratumFlag::Unique => "unique",
            StratumFlag::Finite => "finite",
            StratumFlag::Infinite => "infinite",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumDim {
    pub dim: u64,
    /// `Lower`, `Dense`, or both at `t = N`.
    pub flags: Vec<StratumFlag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxLagrangianDim {
    pub dim: u64,
    /// `Unique`, `Finite` or `Infinite`.
    pub count: StratumFlag,
}

/// One row of the stratification for given `(g, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumRow {
    pub g: u64,
    pub n: u64,
    pub t: u64,
    pub e: u64,
    pub component: Sign,
    pub stratum_dim: u64,
    #[serde(rename = "dim_M")]
    pub dim_max_lagrangians: u64,
    pub flags: Vec<StratumFlag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParamSpaceDims {
    /// `dim 𝔸_e`
    pub dim: u64,
    /// `h¹(E)`
    pub h1_e: u64,
    /// `h¹(∧²E)`
    pub h1_wedge2_e: u64,
}

/// `dim MO_X(2n+1)^± = n(2n+1)(g−1)`.
pub fn moduli_dim(p: CurveParams) -> u64 {
    p.n * (2 * p.n + 1) * (p.g - 1)
}

/// `(n+1)(g−1) + 3`, the sharp upper bound on `t(V)`.
pub fn sharp_bound(p: CurveParams) -> u64 {
    p.threshold() + 3
}

/// The Holla–Narasimhan bound `n(n+1)g/(n−1)`.
pub fn hn_bound(p: CurveParams) -> Result<Ratio<u64>, StrataError> {
    if p.n == 1 {
        return Err(StrataError::Undefined);
    }
    Ok(Ratio::new(p.n * (p.n + 1) * p.g, p.n - 1))
}

/// The two values of `t(V)` for general `V` in the two components.
pub fn general_t_values(p: CurveParams) -> [(u64, Sign); 2] {
    let big_n = p.threshold();
    let lo = if big_n.is_multiple_of(2) {
        big_n
    } else {
        big_n + 1
    };
    [(lo, Sign::of_t(lo)), (lo + 2, Sign::of_t(lo + 2))]
}

fn check_t(p: CurveParams, t: u64) -> Result<(), StrataError> {
    let max = sharp_bound(p);
    if t == 0 || t % 2 == 1 || t > max {
        return Err(StrataError::OutOfRange { t, max });
    }
    Ok(())
}

/// `½n(3n+1)(g−1) + ½nt` below the threshold, the full moduli dimension on
/// the dense range.
pub fn stratum_dim(p: CurveParams, t: u64) -> Result<StratumDim, StrataError> {
    check_t(p, t)?;
    let big_n = p.threshold();
    let mut flags = Vec::new();
    let dim = if t <= big_n {
        flags.push(StratumFlag::Lower);
        p.n * (3 * p.n + 1) * (p.g - 1) / 2 + p.n * t / 2
    } else {
        moduli_dim(p)
    };
    if t >= big_n {
        flags.push(StratumFlag::Dense);
    }
    Ok(StratumDim { dim, flags })
}

/// `dim M(V)` for general `V` with `t(V) = t`: `0` up to `N`, `n(t−N)/2` above.
pub fn dim_max_lagrangians(p: CurveParams, t: u64) -> Result<MaxLagrangianDim, StrataError> {
    check_t(p, t)?;
    let big_n = p.threshold();
    Ok(match t.cmp(&big_n) {
        std::cmp::Ordering::Less => MaxLagrangianDim {
            dim: 0,
            count: StratumFlag::Unique,
        },
        std::cmp::Ordering::Equal => MaxLagrangianDim {
            dim: 0,
            count: StratumFlag::Finite,
        },
        std::cmp::Ordering::Greater => MaxLagrangianDim {
            dim: p.n * (t - big_n) / 2,
            count: StratumFlag::Infinite,
        },
    })
}

pub fn stratum_row(p: CurveParams, t: u64) -> Result<StratumRow, StrataError> {
    let sd = stratum_dim(p, t)?;
    let ml = dim_max_lagrangians(p, t)?;
    let mut flags = sd.flags;
    flags.push(ml.count);
    Ok(StratumRow {
        g: p.g,
        n: p.n,
        t,
        e: t / 2,
        component: Sign::of_t(t),
        stratum_dim: sd.dim,
        dim_max_lagrangians: ml.dim,
        flags,
    })
}

/// The two general-value rows, as selected by `N mod 4`.
pub fn mod4_table(p: CurveParams) -> Vec<StratumRow> {
    general_t_values(p)
        .iter()
        .map(|&(t, _)| stratum_row(p, t).expect("general values lie in range"))
        .collect()
}

/// `⌈n(n+1)(g−1)/(2n+1)⌉`.
pub fn hirschowitz_bound(p: CurveParams) -> u64 {
    (p.n * (p.n + 1) * (p.g - 1)).div_ceil(2 * p.n + 1)
}

/// All `(g, n, t)` in range, `t` a general value, where the rank-`n`
/// subbundle bound is not strictly below `t/2`. Computed by direct comparison.
pub fn hirschowitz_exceptions(g_max: u64, n_max: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for g in 2..=g_max {
        for n in 1..=n_max {
            let p = CurveParams { g, n };
            let f = hirschowitz_bound(p);
            for (t, _) in general_t_values(p) {
                // f < t/2  ⟺  2f < t
                if 2 * f >= t {
                    out.push((g, n, t));
                }
            }
        }
    }
    out
}

/// The closed list of exceptional cases as stated for the rank-`n` bound:
/// `g=2, n odd, t=n+1`; `g=2, n even, t=n+2`; `g=3, t=2(n+1)`;
/// `g=4, n odd, t=3(n+1)`. Enumerated literally within range.
pub fn stated_hirschowitz_cases(g_max: u64, n_max: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for g in 2..=g_max {
        for n in 1..=n_max {
            let t = match (g, n % 2) {
                (2, 1) => Some(n + 1),
                (2, 0) => Some(n + 2),
                (3, _) => Some(2 * (n + 1)),
                (4, 1) => Some(3 * (n + 1)),
                _ => None,
            };
            out.extend(t.map(|t| (g, n, t)));
        }
    }
    out
}

/// `dim 𝔸_e`, `h¹(E)` and `h¹(∧²E)` for `E` of rank `n`, degree `−e`.
pub fn param_space_dim(p: CurveParams, e: u64) -> Result<ParamSpaceDims, StrataError> {
    if e == 0 {
        return Err(StrataError::ZeroDegree);
    }
    let (g, n) = (p.g, p.n);
    Ok(ParamSpaceDims {
        dim: n * (3 * n + 1) * (g - 1) / 2 + n * e,
        h1_e: e + n * (g - 1),
        h1_wedge2_e: (n - 1) * e + n * (n - 1) * (g - 1) / 2,
    })
}

/// `h⁰(∧²F*)` for general `F` of rank `n+1`, degree `−e` in the relevant locus.
pub fn h0_wedge2(p: CurveParams, e: u64) -> Result<u64, StrataError> {
    if e == 0 {
        return Err(StrataError::ZeroDegree);
    }
    // e ≤ ½(n+1)(g−1)  ⟺  2e ≤ N
    if 2 * e <= p.threshold() {
        Ok(0)
    } else {
        Ok(p.n * e - p.n * (p.n + 1) * (p.g - 1) / 2)
    }
}

/// Even `t` in `(0, sharp_bound]` of the given component, ascending; each
/// stratum lies in the closure of the next.
pub fn closure_chain(p: CurveParams, component: Sign) -> Vec<u64> {
    (1..=sharp_bound(p) / 2)
        .map(|e| 2 * e)
        .filter(|&t| Sign::of_t(t) == component)
        .collect()
}
