//! Production functions obtained by eliminating time from the trajectories
//! of an [`ExponentialModel`].
//!
//! Solving `L = L0 e^{b1 t}` for `t` and substituting into `Y = Y0 e^{b3 t}`
//! gives the first fundamental invariant `Y L^{-b3/b1}`; the same step with
//! capital gives `Y K^{-b3/b2}`. Every other invariant is a function of these
//! two. Multiplicative recombination yields the Cobb-Douglas family, additive
//! recombination of `Y^{1/b3}` yields the generalized CES family.

use std::fmt;

use crate::error::{Degeneracy, MathError, ReductionFailure};
use crate::function::{share, Ces, CobbDouglas, GeneralizedCes, Input, PowerLaw, ProductionFunction};
use crate::model::ExponentialModel;
use crate::scalar::{lit, rel_from_log_diff, Scalar};

/// Non-fatal findings attached to a derivation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning<T> {
    /// The CRS labor elasticity is outside `(0, 1)`: `b3` is not strictly
    /// between `b1` and `b2`.
    ElasticityOutOfRange { alpha: T },
    /// CES substitution parameter `p >= 1`, so `sigma = 1/(1-p)` is negative
    /// or undefined.
    NonStandardSubstitution { p: T },
    /// No admissible CRS share exists and a fallback share was used.
    FallbackShare { alpha: T },
}

impl<T: fmt::Display> fmt::Display for Warning<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ElasticityOutOfRange { alpha } => write!(
                f,
                "CRS labor elasticity {alpha} lies outside (0, 1); output growth is not between labor and capital growth"
            ),
            Warning::NonStandardSubstitution { p } => write!(
                f,
                "CES substitution parameter p = {p} >= 1; elasticity of substitution is negative or undefined"
            ),
            Warning::FallbackShare { alpha } => {
                write!(f, "no CRS share in (0, 1) for this model; using alpha = {alpha}")
            }
        }
    }
}

impl<T> Warning<T> {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Warning::ElasticityOutOfRange { .. } => "elasticity_out_of_range",
            Warning::NonStandardSubstitution { .. } => "non_standard_substitution",
            Warning::FallbackShare { .. } => "fallback_share",
        }
    }
}

/// Output elasticities of the constant-returns member of the Cobb-Douglas family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Elasticities<T> {
    pub alpha: T,
    pub beta: T,
    pub warning: Option<Warning<T>>,
}

/// CES function obtained from a model with equal factor growth, with any warnings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CesReduction<T> {
    pub function: Ces<T>,
    pub warning: Option<Warning<T>>,
}

fn nonzero<T: Scalar>(x: T, why: Degeneracy) -> Result<T, MathError> {
    if x == T::zero() {
        Err(MathError::Degenerate(why))
    } else {
        Ok(x)
    }
}

fn exp_finite<T: Scalar>(name: &'static str, ln: T) -> Result<T, MathError> {
    let v = ln.exp();
    if v.is_finite() && v > T::zero() {
        Ok(v)
    } else {
        Err(MathError::NonFinite { name })
    }
}

/// `Y = Y0 / L0^{b3/b1} · L^{b3/b1}`, i.e. `Y L^{-b3/b1}` is constant.
pub fn fundamental_invariant_labor<T: Scalar>(model: &ExponentialModel<T>) -> Result<PowerLaw<T>, MathError> {
    let b1 = nonzero(model.labor_rate(), Degeneracy::ZeroLaborRate)?;
    let exponent = model.output_rate() / b1;
    let coeff = exp_finite("coeff", model.ln_output0() - exponent * model.ln_labor0())?;
    PowerLaw::new(coeff, exponent, Input::Labor)
}

/// `Y = Y0 / K0^{b3/b2} · K^{b3/b2}`, i.e. `Y K^{-b3/b2}` is constant.
pub fn fundamental_invariant_capital<T: Scalar>(model: &ExponentialModel<T>) -> Result<PowerLaw<T>, MathError> {
    let b2 = nonzero(model.capital_rate(), Degeneracy::ZeroCapitalRate)?;
    let exponent = model.output_rate() / b2;
    let coeff = exp_finite("coeff", model.ln_output0() - exponent * model.ln_capital0())?;
    PowerLaw::new(coeff, exponent, Input::Capital)
}

/// Member `alpha` of the one-parameter family `Y = A L^alpha K^{b3/b2 - alpha b1/b2}`.
///
/// `A` is the unique constant that makes the function pass through the
/// model's state at `t = 0`.
pub fn cobb_douglas_member<T: Scalar>(model: &ExponentialModel<T>, alpha: T) -> Result<CobbDouglas<T>, MathError> {
    let b2 = nonzero(model.capital_rate(), Degeneracy::ZeroCapitalRate)?;
    let alpha = share(alpha)?;
    let beta = model.output_rate() / b2 - alpha * model.labor_rate() / b2;
    let a = exp_finite(
        "A",
        model.ln_output0() - alpha * model.ln_labor0() - beta * model.ln_capital0(),
    )?;
    CobbDouglas::new(a, alpha, beta)
}

/// `alpha = (b3 - b2)/(b1 - b2)`, `beta = (b3 - b1)/(b2 - b1)`.
pub fn crs_elasticities<T: Scalar>(model: &ExponentialModel<T>) -> Result<Elasticities<T>, MathError> {
    let [b1, b2, b3] = model.rates();
    if b1 == b2 {
        return Err(MathError::Degenerate(Degeneracy::EqualFactorRates));
    }
    let alpha = (b3 - b2) / (b1 - b2);
    // equals (b3 - b1)/(b2 - b1); the complement keeps alpha + beta = 1 to
    // rounding even when b1 and b2 nearly coincide
    let beta = T::one() - alpha;
    let between = (b1 < b3 && b3 < b2) || (b2 < b3 && b3 < b1);
    Ok(Elasticities {
        alpha,
        beta,
        warning: (!between).then_some(Warning::ElasticityOutOfRange { alpha }),
    })
}

/// The CRS share when it lies in `(0, 1)`, otherwise `0.5` with a warning.
pub fn default_share<T: Scalar>(model: &ExponentialModel<T>) -> (T, Option<Warning<T>>) {
    match crs_elasticities(model) {
        Ok(e) if e.warning.is_none() => (e.alpha, None),
        _ => {
            let alpha = lit(0.5);
            (alpha, Some(Warning::FallbackShare { alpha }))
        }
    }
}

/// Member `alpha` of `Y = [alpha cK K^{1/b2} + (1-alpha) cL L^{1/b1}]^{b3}`,
/// with `cK = Y0^{1/b3}/K0^{1/b2}` and `cL = Y0^{1/b3}/L0^{1/b1}`
/// (the share is folded into the stored coefficients).
pub fn ces_like_member<T: Scalar>(model: &ExponentialModel<T>, alpha: T) -> Result<GeneralizedCes<T>, MathError> {
    let b1 = nonzero(model.labor_rate(), Degeneracy::ZeroLaborRate)?;
    let b2 = nonzero(model.capital_rate(), Degeneracy::ZeroCapitalRate)?;
    let b3 = nonzero(model.output_rate(), Degeneracy::ZeroOutputRate)?;
    let alpha = share(alpha)?;
    let ln_y_scaled = model.ln_output0() / b3;
    let ln_ck = alpha.ln() + ln_y_scaled - model.ln_capital0() / b2;
    let ln_cl = (T::one() - alpha).ln() + ln_y_scaled - model.ln_labor0() / b1;
    GeneralizedCes::from_log_coefficients(ln_ck, ln_cl, alpha, b2.recip(), b1.recip(), b3)
}

/// Textbook CES form of the generalized family when labor and capital grow
/// at the same rate and all three initial levels coincide.
///
/// `tol` gates both conditions: `|b1 - b2| <= tol · max(|b1|, |b2|)` and
/// `|ln L0 - ln K0|, |ln L0 - ln Y0| <= tol`. Within the gate the common rate
/// `b` and level `c` are averages, and `p = 1/b`, `v = b3/b`,
/// `A = c^{1 - b3/b}`.
pub fn ces_reduction<T: Scalar>(model: &ExponentialModel<T>, alpha: T, tol: T) -> Result<CesReduction<T>, MathError> {
    let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
    let not_reducible = |r| Err(MathError::NotReducible(r));
    if !(tol.is_finite() && tol >= T::zero()) {
        return not_reducible(ReductionFailure::InvalidTolerance { tol: f(tol) });
    }
    let alpha = share(alpha)?;
    let [b1, b2, b3] = model.rates();
    if (b1 - b2).abs() > tol * b1.abs().max(b2.abs()) {
        return not_reducible(ReductionFailure::FactorRatesDiffer { b1: f(b1), b2: f(b2), tol: f(tol) });
    }
    if b1 == T::zero() || b2 == T::zero() {
        return not_reducible(ReductionFailure::ZeroFactorRate);
    }
    let [ln_l0, ln_k0, ln_y0] = model.ln_initial();
    let gap = (ln_l0 - ln_k0).abs();
    if gap > tol {
        return not_reducible(ReductionFailure::LaborCapitalLevelsDiffer { gap: f(gap), tol: f(tol) });
    }
    let gap = (ln_l0 - ln_y0).abs();
    if gap > tol {
        return not_reducible(ReductionFailure::LaborOutputLevelsDiffer { gap: f(gap), tol: f(tol) });
    }

    let two: T = lit(2.0);
    let three: T = lit(3.0);
    let b = (b1 + b2) / two;
    let ln_c = (ln_l0 + ln_k0 + ln_y0) / three;
    let p = b.recip();
    let v = b3 / b;
    let a = exp_finite("A", ln_c * (T::one() - v))?;
    let function = Ces::new(a, alpha, p, v)?;
    Ok(CesReduction {
        function,
        warning: (p >= T::one()).then_some(Warning::NonStandardSubstitution { p }),
    })
}

/// One row of a constancy profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstancyPoint<T> {
    pub t: T,
    /// `Y(t)` from the model trajectory.
    pub y_model: T,
    /// `f(L(t), K(t))`.
    pub y_function: T,
    pub rel_dev: T,
}

fn deviation_at<T: Scalar>(f: &ProductionFunction<T>, model: &ExponentialModel<T>, t: T) -> T {
    let s = model.ln_state(t);
    match f {
        ProductionFunction::PowerLaw(p) => {
            let ln_x = |st: &crate::model::State<T>| match p.input() {
                Input::Labor => st.labor,
                Input::Capital => st.capital,
            };
            let s0 = model.ln_state(T::zero());
            let now = s.output - p.exponent() * ln_x(&s);
            let start = s0.output - p.exponent() * ln_x(&s0);
            rel_from_log_diff(now - start)
        }
        _ => rel_from_log_diff(f.ln_evaluate(s.labor, s.capital) - s.output),
    }
}

/// Largest relative deviation of `f` from the model's output along the
/// trajectory at the given times.
///
/// Power laws are judged by their invariant combination `Y X^{-exponent}`
/// against its value at `t = 0`; other variants by `|f(L, K) - Y| / Y`.
/// An empty grid yields zero.
pub fn constancy_check<T: Scalar>(f: &ProductionFunction<T>, model: &ExponentialModel<T>, t_grid: &[T]) -> T {
    t_grid
        .iter()
        .map(|&t| deviation_at(f, model, t))
        .fold(T::zero(), |acc, d| if d.is_nan() || d > acc { d } else { acc })
}

/// Per-point version of [`constancy_check`].
pub fn constancy_profile<T: Scalar>(
    f: &ProductionFunction<T>,
    model: &ExponentialModel<T>,
    t_grid: &[T],
) -> Vec<ConstancyPoint<T>> {
    t_grid
        .iter()
        .map(|&t| {
            let s = model.ln_state(t);
            ConstancyPoint {
                t,
                y_model: s.output.exp(),
                y_function: f.ln_evaluate(s.labor, s.capital).exp(),
                rel_dev: deviation_at(f, model, t),
            }
        })
        .collect()
}

/// Relative gap between the two ends of the derivation of the Cobb-Douglas
/// member from the fundamental invariants, evaluated at `(labor, capital)`:
///
/// `C K^{b3/b2} (B^alpha L^{alpha b3/b1} / (C^alpha K^{alpha b3/b2}))^{b1/b3}`
/// versus `A L^alpha K^{b3/b2 - alpha b1/b2}`, where `B` and `C` are the
/// power-law coefficients of the labor and capital invariants.
pub fn identity_chain_check<T: Scalar>(
    model: &ExponentialModel<T>,
    alpha: T,
    labor: T,
    capital: T,
) -> Result<T, MathError> {
    let [b1, b2, b3] = model.rates();
    nonzero(b1, Degeneracy::ZeroLaborRate)?;
    nonzero(b2, Degeneracy::ZeroCapitalRate)?;
    nonzero(b3, Degeneracy::ZeroOutputRate)?;
    for (name, x) in [("L", labor), ("K", capital)] {
        if !(x > T::zero() && x.is_finite()) {
            return Err(MathError::NonPositive { name, value: x.to_f64().unwrap_or(f64::NAN) });
        }
    }
    let (ln_l, ln_k) = (labor.ln(), capital.ln());
    let by_labor = fundamental_invariant_labor(model)?;
    let by_capital = fundamental_invariant_capital(model)?;
    let ln_b = by_labor.coeff().ln();
    let ln_c = by_capital.coeff().ln();

    let ratio = alpha * ln_b + alpha * (b3 / b1) * ln_l - (alpha * ln_c + alpha * (b3 / b2) * ln_k);
    let chain = ln_c + (b3 / b2) * ln_k + (b1 / b3) * ratio;

    let member = cobb_douglas_member(model, alpha)?;
    let closed = member.a().ln() + member.alpha() * ln_l + member.beta() * ln_k;
    Ok(rel_from_log_diff(chain - closed))
}
