//! Production functions `Y = f(L, K)` and their closed-form evaluation.
//!
//! Every variant is evaluated in log space so that large exponents (the
//! generalized CES family routinely raises indices to powers like `1/b2 ≈ 15`)
//! do not overflow before the outer power brings the value back down.

use crate::error::MathError;
use crate::scalar::{log_add_exp, Scalar};

/// The single factor a power-law invariant depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Input {
    Labor,
    Capital,
}

/// `Y = coeff · X^exponent` for one factor `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw<T> {
    coeff: T,
    exponent: T,
    input: Input,
}

/// `Y = A · L^alpha · K^beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CobbDouglas<T> {
    a: T,
    alpha: T,
    beta: T,
}

/// `Y = (cK · K^eK + cL · L^eL)^outer`.
///
/// The coefficients are kept as logs: for realistic growth rates `cK` and
/// `cL` are ratios of numbers like `Y0^(1/b3)` that leave the `f64` range
/// long before the function value does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedCes<T> {
    ln_ck: T,
    ln_cl: T,
    alpha: T,
    e_k: T,
    e_l: T,
    outer: T,
}

/// `Y = A · [alpha · K^p + (1 - alpha) · L^p]^(v/p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ces<T> {
    a: T,
    alpha: T,
    p: T,
    v: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProductionFunction<T> {
    PowerLaw(PowerLaw<T>),
    CobbDouglas(CobbDouglas<T>),
    GeneralizedCes(GeneralizedCes<T>),
    Ces(Ces<T>),
}

fn f64_of<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn finite<T: Scalar>(name: &'static str, x: T) -> Result<T, MathError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(MathError::NonFinite { name })
    }
}

fn positive<T: Scalar>(name: &'static str, x: T) -> Result<T, MathError> {
    finite(name, x)?;
    if x > T::zero() {
        Ok(x)
    } else {
        Err(MathError::NonPositive { name, value: f64_of(x) })
    }
}

pub(crate) fn share<T: Scalar>(alpha: T) -> Result<T, MathError> {
    if alpha.is_finite() && alpha > T::zero() && alpha < T::one() {
        Ok(alpha)
    } else {
        Err(MathError::AlphaOutOfRange(f64_of(alpha)))
    }
}

impl<T: Scalar> PowerLaw<T> {
    pub fn new(coeff: T, exponent: T, input: Input) -> Result<Self, MathError> {
        Ok(Self {
            coeff: positive("coeff", coeff)?,
            exponent: finite("exponent", exponent)?,
            input,
        })
    }

    pub fn coeff(&self) -> T {
        self.coeff
    }

    pub fn exponent(&self) -> T {
        self.exponent
    }

    pub fn input(&self) -> Input {
        self.input
    }

    fn ln_eval(&self, ln_l: T, ln_k: T) -> T {
        let ln_x = match self.input {
            Input::Labor => ln_l,
            Input::Capital => ln_k,
        };
        self.coeff.ln() + self.exponent * ln_x
    }
}

impl<T: Scalar> CobbDouglas<T> {
    pub fn new(a: T, alpha: T, beta: T) -> Result<Self, MathError> {
        Ok(Self {
            a: positive("A", a)?,
            alpha: share(alpha)?,
            beta: finite("beta", beta)?,
        })
    }

    /// Total factor productivity `A`.
    pub fn a(&self) -> T {
        self.a
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// Degree of homogeneity, `alpha + beta`.
    pub fn returns_to_scale(&self) -> T {
        self.alpha + self.beta
    }

    fn ln_eval(&self, ln_l: T, ln_k: T) -> T {
        self.a.ln() + self.alpha * ln_l + self.beta * ln_k
    }
}

impl<T: Scalar> GeneralizedCes<T> {
    /// Builds the function from log coefficients.
    pub fn from_log_coefficients(
        ln_ck: T,
        ln_cl: T,
        alpha: T,
        e_k: T,
        e_l: T,
        outer: T,
    ) -> Result<Self, MathError> {
        Ok(Self {
            ln_ck: finite("ln_cK", ln_ck)?,
            ln_cl: finite("ln_cL", ln_cl)?,
            alpha: share(alpha)?,
            e_k: finite("eK", e_k)?,
            e_l: finite("eL", e_l)?,
            outer: finite("outer", outer)?,
        })
    }

    pub fn new(ck: T, cl: T, alpha: T, e_k: T, e_l: T, outer: T) -> Result<Self, MathError> {
        let ck = positive("cK", ck)?;
        let cl = positive("cL", cl)?;
        Self::from_log_coefficients(ck.ln(), cl.ln(), alpha, e_k, e_l, outer)
    }

    /// `cK`; may be `+inf` when the coefficient exceeds the scalar range.
    pub fn ck(&self) -> T {
        self.ln_ck.exp()
    }

    pub fn cl(&self) -> T {
        self.ln_cl.exp()
    }

    pub fn ln_ck(&self) -> T {
        self.ln_ck
    }

    pub fn ln_cl(&self) -> T {
        self.ln_cl
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn e_k(&self) -> T {
        self.e_k
    }

    pub fn e_l(&self) -> T {
        self.e_l
    }

    pub fn outer(&self) -> T {
        self.outer
    }

    fn ln_eval(&self, ln_l: T, ln_k: T) -> T {
        self.outer * log_add_exp(self.ln_ck + self.e_k * ln_k, self.ln_cl + self.e_l * ln_l)
    }
}

impl<T: Scalar> Ces<T> {
    pub fn new(a: T, alpha: T, p: T, v: T) -> Result<Self, MathError> {
        let p = finite("p", p)?;
        if p == T::zero() {
            return Err(MathError::ZeroSubstitution);
        }
        Ok(Self {
            a: positive("A", a)?,
            alpha: share(alpha)?,
            p,
            v: finite("v", v)?,
        })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Substitution parameter `p`.
    pub fn p(&self) -> T {
        self.p
    }

    /// Degree of homogeneity `v`.
    pub fn v(&self) -> T {
        self.v
    }

    /// Elasticity of substitution `1 / (1 - p)`; `None` at `p = 1`.
    pub fn sigma(&self) -> Option<T> {
        if self.p == T::one() {
            None
        } else {
            Some((T::one() - self.p).recip())
        }
    }

    fn ln_eval(&self, ln_l: T, ln_k: T) -> T {
        let inner = log_add_exp(
            self.alpha.ln() + self.p * ln_k,
            (T::one() - self.alpha).ln() + self.p * ln_l,
        );
        self.a.ln() + self.v / self.p * inner
    }
}

impl<T: Scalar> ProductionFunction<T> {
    /// `ln f(L, K)` given `ln L` and `ln K`.
    pub fn ln_evaluate(&self, ln_l: T, ln_k: T) -> T {
        match self {
            ProductionFunction::PowerLaw(f) => f.ln_eval(ln_l, ln_k),
            ProductionFunction::CobbDouglas(f) => f.ln_eval(ln_l, ln_k),
            ProductionFunction::GeneralizedCes(f) => f.ln_eval(ln_l, ln_k),
            ProductionFunction::Ces(f) => f.ln_eval(ln_l, ln_k),
        }
    }

    /// `Y = f(L, K)`. A power law only reads its designated input.
    pub fn evaluate(&self, labor: T, capital: T) -> Result<T, MathError> {
        let labor = positive("L", labor)?;
        let capital = positive("K", capital)?;
        let y = self.ln_evaluate(labor.ln(), capital.ln()).exp();
        if y.is_finite() {
            Ok(y)
        } else {
            Err(MathError::NonFinite { name: "Y" })
        }
    }

    /// Short lowercase name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            ProductionFunction::PowerLaw(_) => "power_law",
            ProductionFunction::CobbDouglas(_) => "cobb_douglas",
            ProductionFunction::GeneralizedCes(_) => "generalized_ces",
            ProductionFunction::Ces(_) => "ces",
        }
    }

    /// Share parameter, where the variant has one.
    pub fn alpha(&self) -> Option<T> {
        match self {
            ProductionFunction::PowerLaw(_) => None,
            ProductionFunction::CobbDouglas(f) => Some(f.alpha),
            ProductionFunction::GeneralizedCes(f) => Some(f.alpha),
            ProductionFunction::Ces(f) => Some(f.alpha),
        }
    }
}

impl<T> From<PowerLaw<T>> for ProductionFunction<T> {
    fn from(f: PowerLaw<T>) -> Self {
        ProductionFunction::PowerLaw(f)
    }
}

impl<T> From<CobbDouglas<T>> for ProductionFunction<T> {
    fn from(f: CobbDouglas<T>) -> Self {
        ProductionFunction::CobbDouglas(f)
    }
}

impl<T> From<GeneralizedCes<T>> for ProductionFunction<T> {
    fn from(f: GeneralizedCes<T>) -> Self {
        ProductionFunction::GeneralizedCes(f)
    }
}

impl<T> From<Ces<T>> for ProductionFunction<T> {
    fn from(f: Ces<T>) -> Self {
        ProductionFunction::Ces(f)
    }
}

/// Free-function form of [`ProductionFunction::evaluate`].
pub fn evaluate<T: Scalar>(f: &ProductionFunction<T>, labor: T, capital: T) -> Result<T, MathError> {
    f.evaluate(labor, capital)
}
