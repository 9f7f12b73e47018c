//! Parameter tuples and the characteristic quasi-polynomial
//!
//! ```text
//! F(λ) = λ^α + c·λ^{2α} − a − b·e^{−λτ}
//! ```
//!
//! All fractional powers use the principal branch, `arg ∈ (−π, π]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

/// Parameters `(α, a, b, c)` of `D^α x + c·D^{2α} x = a·x + b·x(t − τ)`.
///
/// `a1 = a + b` is never stored; it is recomputed on every call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SystemParams {
    alpha: f64,
    a: f64,
    b: f64,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    a: f64,
    b: f64,
    c: f64,
    #[serde(default, skip_deserializing)]
    a1: f64,
}

impl TryFrom<RawParams> for SystemParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        SystemParams::new(r.alpha, r.a, r.b, r.c)
    }
}

impl From<SystemParams> for RawParams {
    fn from(p: SystemParams) -> Self {
        RawParams { alpha: p.alpha, a: p.a, b: p.b, c: p.c, a1: p.a1() }
    }
}

impl SystemParams {
    /// Validates and builds a parameter tuple.
    ///
    /// ```
    /// use fdde::SystemParams;
    /// let p = SystemParams::new(0.3, 1.7, 1.0, -0.4).unwrap();
    /// assert!((p.a1() - 2.7).abs() < 1e-15);
    /// assert!(SystemParams::new(1.0, 1.0, 1.0, 1.0).is_err());
    /// assert!(SystemParams::new(0.5, 1.0, 1.0, 0.0).is_err());
    /// ```
    pub fn new(alpha: f64, a: f64, b: f64, c: f64) -> Result<Self> {
        let bad = |field, reason: &str| Err(Error::InvalidParams { field, reason: reason.into() });
        if !(alpha.is_finite() && alpha > 0.0 && alpha < 1.0) {
            return bad("alpha", "must lie in the open interval (0, 1)");
        }
        if !a.is_finite() {
            return bad("a", "must be finite");
        }
        if !b.is_finite() {
            return bad("b", "must be finite");
        }
        if !c.is_finite() {
            return bad("c", "must be finite");
        }
        if c == 0.0 {
            return bad("c", "must be nonzero");
        }
        Ok(SystemParams { alpha, a, b, c })
    }

    /// Builds the tuple from `a1 = a + b` instead of `a`.
    pub fn from_a1(alpha: f64, a1: f64, b: f64, c: f64) -> Result<Self> {
        SystemParams::new(alpha, a1 - b, b, c)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    /// `a + b`, the coefficient of the undelayed system.
    pub fn a1(&self) -> f64 {
        self.a + self.b
    }

    /// Same `(α, b, c)` with a different `a1`.
    pub fn with_a1(&self, a1: f64) -> Result<Self> {
        SystemParams::from_a1(self.alpha, a1, self.b, self.c)
    }

    /// Same `(α, a1, b)` with a different `c`.
    pub fn with_c(&self, c: f64) -> Result<Self> {
        SystemParams::from_a1(self.alpha, self.a1(), self.b, c)
    }
}

/// Principal power `z^p = exp(p·Log z)`.
///
/// `0^p` is `0` for `p > 0` and a domain error otherwise.
///
/// ```
/// use fdde::{principal_power, Complex};
/// let r = principal_power(Complex::new(-1.0, 0.0), 0.5).unwrap();
/// assert!((r - Complex::new(0.0, 1.0)).norm() < 1e-15);
/// ```
pub fn principal_power(z: Complex, p: f64) -> Result<Complex> {
    if z == Complex::new(0.0, 0.0) {
        if p > 0.0 {
            return Ok(Complex::new(0.0, 0.0));
        }
        return Err(Error::Domain(format!("0^{p} is undefined")));
    }
    Ok(ppow(z, p))
}

/// Unchecked principal power; `z` must be nonzero.
#[inline]
pub(crate) fn ppow(z: Complex, p: f64) -> Complex {
    let mut arg = z.im.atan2(z.re);
    if arg == -std::f64::consts::PI {
        arg = std::f64::consts::PI;
    }
    Complex::from_polar(z.norm().powf(p), p * arg)
}

/// `F(λ, τ)`. At `λ = 0` this is `−a − b`.
///
/// ```
/// use fdde::{char_fn, Complex, SystemParams};
/// let p = SystemParams::new(0.5, 1.0, 1.0, 1.0).unwrap();
/// let f = char_fn(Complex::new(0.0, 0.0), &p, 0.0);
/// assert_eq!(f, Complex::new(-2.0, 0.0));
/// ```
pub fn char_fn(lambda: Complex, params: &SystemParams, tau: f64) -> Complex {
    let delayed = params.b * (-lambda * tau).exp();
    if lambda == Complex::new(0.0, 0.0) {
        return Complex::new(-params.a, 0.0) - delayed;
    }
    let la = ppow(lambda, params.alpha);
    la + params.c * la * la - params.a - delayed
}

/// `∂F/∂λ = α·λ^{α−1} + 2αc·λ^{2α−1} + bτ·e^{−λτ}`, for `λ ≠ 0`.
pub fn char_fn_derivative(lambda: Complex, params: &SystemParams, tau: f64) -> Complex {
    let al = params.alpha;
    let la = ppow(lambda, al);
    (al * la + 2.0 * al * params.c * la * la) / lambda + params.b * tau * (-lambda * tau).exp()
}

/// `∂F/∂τ = bλ·e^{−λτ}`.
pub fn char_fn_tau_derivative(lambda: Complex, params: &SystemParams, tau: f64) -> Complex {
    params.b * lambda * (-lambda * tau).exp()
}

/// `P(λ) = (λ^α + c·λ^{2α} − a) / b`, so that `F = b·(P − e^{−λτ})`.
pub fn p_of_lambda(lambda: Complex, params: &SystemParams) -> Result<Complex> {
    if params.b == 0.0 {
        return Err(Error::DegenerateSystem);
    }
    let la = principal_power(lambda, params.alpha)?;
    Ok((la + params.c * la * la - params.a) / params.b)
}
