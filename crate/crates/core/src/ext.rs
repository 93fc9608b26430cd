//! Extended real numbers `[-∞, +∞]` with the arithmetic of the two enriching
//! bases used throughout the crate.
//!
//! Infinities are explicit variants, not IEEE values, because the rules
//! differ from IEEE in exactly the places that matter here:
//!
//! | expression        | result |
//! |-------------------|--------|
//! | `(+∞) + (−∞)`     | `+∞`   |
//! | `(+∞) − (+∞)`     | `−∞`   |
//! | `(−∞) − (−∞)`     | `−∞`   |
//! | `∞ ∸ ∞` (truncated) | `0`  |
//!
//! [`ExtReal`] is the bare value and every operation on it is total. The
//! flavor (non-negative `[0, ∞]` or signed `[−∞, ∞]`) is carried by the
//! containers, and by [`Scalar`] for callers that want the checked form.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Default absolute tolerance for comparing finite values.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `[0, +∞]` with truncated difference as internal hom.
    NonNeg,
    /// `[−∞, +∞]` with extended subtraction as internal hom.
    Signed,
}

/// An extended real number. `Finite` never holds NaN or an IEEE infinity when
/// built through [`ExtReal::new`] or the arithmetic below.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

pub use ExtReal::{NegInf, PosInf};

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Converts an `f64`, mapping IEEE infinities to the infinite variants.
    pub fn new(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(Error::NotANumber)
        } else {
            Ok(Self::from_f64_unchecked(x))
        }
    }

    /// As [`ExtReal::new`] for values already known not to be NaN.
    #[inline]
    pub(crate) fn from_f64_unchecked(x: f64) -> Self {
        if x == f64::INFINITY {
            PosInf
        } else if x == f64::NEG_INFINITY {
            NegInf
        } else {
            ExtReal::Finite(x)
        }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        match self {
            NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(x) => x,
            PosInf => f64::INFINITY,
        }
    }

    #[inline]
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn in_flavor(self, flavor: Flavor) -> bool {
        match (flavor, self) {
            (Flavor::Signed, _) => true,
            (Flavor::NonNeg, NegInf) => false,
            (Flavor::NonNeg, ExtReal::Finite(x)) => x >= 0.0,
            (Flavor::NonNeg, PosInf) => true,
        }
    }

    /// Extended addition: `+∞` absorbs everything, including `−∞`.
    #[inline]
    pub fn plus(self, other: ExtReal) -> ExtReal {
        match (self, other) {
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => Self::from_f64_unchecked(a + b),
        }
    }

    /// Truncated difference `b ∸ a = max(b − a, 0)` with `∞ ∸ ∞ = 0`, the
    /// internal hom `[a, b]` of the non-negative base. Written with the
    /// source first so that it reads like a distance from `a` to `b`.
    #[inline]
    pub fn hom_plus(a: ExtReal, b: ExtReal) -> ExtReal {
        match (a, b) {
            (PosInf, _) => ExtReal::ZERO,
            (_, PosInf) => PosInf,
            (NegInf, _) => PosInf,
            (_, NegInf) => ExtReal::ZERO,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => {
                let d = b - a;
                if d > 0.0 {
                    Self::from_f64_unchecked(d)
                } else {
                    ExtReal::ZERO
                }
            }
        }
    }

    /// Extended subtraction `b − a`, the internal hom of the signed base, with
    /// `(+∞) − (+∞) = (−∞) − (−∞) = −∞`.
    #[inline]
    pub fn hom_signed(a: ExtReal, b: ExtReal) -> ExtReal {
        match (a, b) {
            (PosInf, _) => NegInf,
            (_, NegInf) => NegInf,
            (NegInf, _) => PosInf,
            (_, PosInf) => PosInf,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => Self::from_f64_unchecked(b - a),
        }
    }

    /// Multiplication by a non-negative real with `0 · (±∞) = 0`.
    #[inline]
    pub fn scale(self, t: f64) -> ExtReal {
        debug_assert!(t >= 0.0);
        match self {
            ExtReal::Finite(x) => Self::from_f64_unchecked(t * x),
            _ if t == 0.0 => ExtReal::ZERO,
            inf => inf,
        }
    }

    #[inline]
    pub fn max(self, other: ExtReal) -> ExtReal {
        if other > self {
            other
        } else {
            self
        }
    }

    #[inline]
    pub fn min(self, other: ExtReal) -> ExtReal {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Equality with absolute tolerance on finite values; infinities must
    /// match exactly.
    pub fn approx_eq(self, other: ExtReal, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => (a - b).abs() <= tol,
            (a, b) => a == b,
        }
    }

    /// `self ≥ other − tol`, exact on infinities.
    pub fn approx_ge(self, other: ExtReal, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a >= b - tol,
            (a, b) => a >= b,
        }
    }

    /// Absolute gap between two values, or `None` when an infinity is
    /// involved and the two values differ.
    pub fn gap(self, other: ExtReal) -> Option<f64> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => Some((a - b).abs()),
            (a, b) if a == b => Some(0.0),
            _ => None,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            (a, b) => Some(rank(a).cmp(&rank(b))),
        }
    }
}

fn rank(x: &ExtReal) -> u8 {
    match x {
        NegInf => 0,
        ExtReal::Finite(_) => 1,
        PosInf => 2,
    }
}

impl From<f64> for ExtReal {
    /// Panics on NaN; use [`ExtReal::new`] for untrusted input.
    fn from(x: f64) -> Self {
        ExtReal::new(x).expect("NaN passed to ExtReal::from")
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => f.write_str("-inf"),
            PosInf => f.write_str("inf"),
            ExtReal::Finite(x) => write!(f, "{x}"),
        }
    }
}

/// An extended real tagged with its flavor. The checked operations reject
/// mixed flavors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scalar {
    value: ExtReal,
    flavor: Flavor,
}

impl Scalar {
    pub fn new(value: ExtReal, flavor: Flavor) -> Result<Self> {
        if let ExtReal::Finite(x) = value {
            if x.is_nan() || x.is_infinite() {
                return Err(Error::NotANumber);
            }
        }
        if !value.in_flavor(flavor) {
            return Err(Error::OutOfFlavor { value: value.to_string(), flavor });
        }
        Ok(Scalar { value, flavor })
    }

    pub fn nonneg(x: f64) -> Result<Self> {
        Self::new(ExtReal::new(x)?, Flavor::NonNeg)
    }

    pub fn signed(x: f64) -> Result<Self> {
        Self::new(ExtReal::new(x)?, Flavor::Signed)
    }

    pub fn value(self) -> ExtReal {
        self.value
    }

    pub fn flavor(self) -> Flavor {
        self.flavor
    }

    fn same_flavor(self, other: Scalar) -> Result<Flavor> {
        if self.flavor == other.flavor {
            Ok(self.flavor)
        } else {
            Err(Error::FlavorMismatch { left: self.flavor, right: other.flavor })
        }
    }
}

/// `a + b` in the flavor shared by both arguments.
pub fn ext_add(a: Scalar, b: Scalar) -> Result<Scalar> {
    let flavor = a.same_flavor(b)?;
    Ok(Scalar { value: a.value.plus(b.value), flavor })
}

/// Truncated difference `b ∸ a`; both arguments must be non-negative.
pub fn hom_plus(a: Scalar, b: Scalar) -> Result<Scalar> {
    match a.same_flavor(b)? {
        Flavor::NonNeg => Ok(Scalar { value: ExtReal::hom_plus(a.value, b.value), flavor: Flavor::NonNeg }),
        Flavor::Signed => Err(Error::FlavorMismatch { left: Flavor::Signed, right: Flavor::NonNeg }),
    }
}

/// Signed internal hom `b − a`; both arguments must be signed.
pub fn hom_signed(a: Scalar, b: Scalar) -> Result<Scalar> {
    match a.same_flavor(b)? {
        Flavor::Signed => Ok(Scalar { value: ExtReal::hom_signed(a.value, b.value), flavor: Flavor::Signed }),
        Flavor::NonNeg => Err(Error::FlavorMismatch { left: Flavor::NonNeg, right: Flavor::Signed }),
    }
}
