//! The diagonal exponential growth system `dL/dt = b1 L`, `dK/dt = b2 K`,
//! `dY/dt = b3 Y` and its closed-form trajectories.

use crate::error::{MathError, Variable};
use crate::scalar::Scalar;

/// Growth rates and log initial levels of labor, capital and output.
///
/// Time is measured in years since `base_year`. Initial levels are stored as
/// natural logs so that fitted intercepts survive without a round trip
/// through `exp`/`ln`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialModel<T> {
    labor_rate: T,
    capital_rate: T,
    output_rate: T,
    ln_labor0: T,
    ln_capital0: T,
    ln_output0: T,
    base_year: i32,
}

/// Labor, capital and output at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State<T> {
    pub labor: T,
    pub capital: T,
    pub output: T,
}

impl<T: Scalar> ExponentialModel<T> {
    /// Builds a model from rates `(b1, b2, b3)` and log initial levels.
    pub fn new(rates: [T; 3], ln_initial: [T; 3], base_year: i32) -> Result<Self, MathError> {
        const NAMES: [&str; 6] = ["b1", "b2", "b3", "ln_L0", "ln_K0", "ln_Y0"];
        for (name, v) in NAMES.iter().zip(rates.iter().chain(ln_initial.iter())) {
            if !v.is_finite() {
                return Err(MathError::NonFinite { name });
            }
        }
        Ok(Self {
            labor_rate: rates[0],
            capital_rate: rates[1],
            output_rate: rates[2],
            ln_labor0: ln_initial[0],
            ln_capital0: ln_initial[1],
            ln_output0: ln_initial[2],
            base_year,
        })
    }

    /// Builds a model from rates and raw (strictly positive) initial levels.
    pub fn from_levels(rates: [T; 3], initial: [T; 3], base_year: i32) -> Result<Self, MathError> {
        const NAMES: [&str; 3] = ["L0", "K0", "Y0"];
        let mut logs = [T::zero(); 3];
        for i in 0..3 {
            let v = initial[i];
            if !v.is_finite() {
                return Err(MathError::NonFinite { name: NAMES[i] });
            }
            if v <= T::zero() {
                return Err(MathError::NonPositive {
                    name: NAMES[i],
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
            logs[i] = v.ln();
        }
        Self::new(rates, logs, base_year)
    }

    /// `b1`, the labor growth rate per year.
    pub fn labor_rate(&self) -> T {
        self.labor_rate
    }

    /// `b2`, the capital growth rate per year.
    pub fn capital_rate(&self) -> T {
        self.capital_rate
    }

    /// `b3`, the output growth rate per year.
    pub fn output_rate(&self) -> T {
        self.output_rate
    }

    pub fn rates(&self) -> [T; 3] {
        [self.labor_rate, self.capital_rate, self.output_rate]
    }

    pub fn ln_labor0(&self) -> T {
        self.ln_labor0
    }

    pub fn ln_capital0(&self) -> T {
        self.ln_capital0
    }

    pub fn ln_output0(&self) -> T {
        self.ln_output0
    }

    pub fn ln_initial(&self) -> [T; 3] {
        [self.ln_labor0, self.ln_capital0, self.ln_output0]
    }

    pub fn base_year(&self) -> i32 {
        self.base_year
    }

    /// Same dynamics with the time origin moved to `base_year`.
    pub fn with_base_year(&self, base_year: i32) -> Result<Self, MathError> {
        let shift = T::from_i32(base_year - self.base_year).ok_or(MathError::NonFinite { name: "base_year" })?;
        Self::new(
            self.rates(),
            [
                self.ln_labor0 + self.labor_rate * shift,
                self.ln_capital0 + self.capital_rate * shift,
                self.ln_output0 + self.output_rate * shift,
            ],
            base_year,
        )
    }

    /// Natural logs of `(L, K, Y)` at `t` years after the base year.
    ///
    /// Never overflows for finite `t` within the scalar's range; use this
    /// when downstream work happens in log space anyway.
    pub fn ln_state(&self, t: T) -> State<T> {
        State {
            labor: self.ln_labor0 + self.labor_rate * t,
            capital: self.ln_capital0 + self.capital_rate * t,
            output: self.ln_output0 + self.output_rate * t,
        }
    }

    /// `L(t) = L0 e^{b1 t}`, `K(t) = K0 e^{b2 t}`, `Y(t) = Y0 e^{b3 t}`.
    pub fn trajectory(&self, t: T) -> Result<State<T>, MathError> {
        let tf = t.to_f64().unwrap_or(f64::NAN);
        if !t.is_finite() {
            return Err(MathError::NonFinite { name: "t" });
        }
        let ln = self.ln_state(t);
        let level = |x: T, variable| {
            let v = x.exp();
            if v.is_finite() {
                Ok(v)
            } else {
                Err(MathError::Overflow { variable, t: tf })
            }
        };
        Ok(State {
            labor: level(ln.labor, Variable::Labor)?,
            capital: level(ln.capital, Variable::Capital)?,
            output: level(ln.output, Variable::Output)?,
        })
    }
}

/// Free-function form of [`ExponentialModel::trajectory`].
pub fn trajectory<T: Scalar>(model: &ExponentialModel<T>, t: T) -> Result<State<T>, MathError> {
    model.trajectory(t)
}
