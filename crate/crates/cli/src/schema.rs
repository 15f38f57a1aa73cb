//! JSON shapes shared by the subcommands.
//!
//! ```text
//! model:      {"base_year", "b1", "b2", "b3", "ln_L0", "ln_K0", "ln_Y0"}
//! function:   {"kind": "power_law",       "input": "labor"|"capital", "coeff", "exponent"}
//!             {"kind": "cobb_douglas",    "A", "alpha", "beta"}
//!             {"kind": "generalized_ces", "alpha", "ln_cK", "ln_cL", "eK", "eL", "outer"}
//!             {"kind": "ces",             "A", "alpha", "p", "v", "sigma"}
//! diagnostics:{"slope", "intercept", "r_squared", "residual_max_abs", "n_points"}
//! warning:    {"code", "message"}
//! ```
//!
//! Readers ignore keys they do not use (`sigma` is derived, for instance).

use prodfn_core::function::{Ces, CobbDouglas, GeneralizedCes, PowerLaw};
use prodfn_core::{ExponentialModel, FitDiagnostics, Input, MathError, ProductionFunction, Warning};
use serde::Deserialize;

use crate::json::Json;

pub fn model_json(m: &ExponentialModel) -> Json {
    Json::obj()
        .with("base_year", m.base_year())
        .with("b1", m.labor_rate())
        .with("b2", m.capital_rate())
        .with("b3", m.output_rate())
        .with("ln_L0", m.ln_labor0())
        .with("ln_K0", m.ln_capital0())
        .with("ln_Y0", m.ln_output0())
}

pub fn diagnostics_json(d: &FitDiagnostics) -> Json {
    Json::obj()
        .with("slope", d.slope)
        .with("intercept", d.intercept)
        .with("r_squared", d.r_squared)
        .with("residual_max_abs", d.residual_max_abs)
        .with("n_points", d.n_points)
}

pub fn warning_json(w: &Warning) -> Json {
    Json::obj().with("code", w.code()).with("message", w.to_string())
}

pub fn function_json(f: &ProductionFunction) -> Json {
    let base = Json::obj().with("kind", f.kind());
    match f {
        ProductionFunction::PowerLaw(p) => base
            .with(
                "input",
                match p.input() {
                    Input::Labor => "labor",
                    Input::Capital => "capital",
                },
            )
            .with("coeff", p.coeff())
            .with("exponent", p.exponent()),
        ProductionFunction::CobbDouglas(c) => base.with("A", c.a()).with("alpha", c.alpha()).with("beta", c.beta()),
        ProductionFunction::GeneralizedCes(g) => base
            .with("alpha", g.alpha())
            .with("ln_cK", g.ln_ck())
            .with("ln_cL", g.ln_cl())
            .with("eK", g.e_k())
            .with("eL", g.e_l())
            .with("outer", g.outer()),
        ProductionFunction::Ces(c) => base
            .with("A", c.a())
            .with("alpha", c.alpha())
            .with("p", c.p())
            .with("v", c.v())
            .with("sigma", c.sigma()),
    }
}

#[derive(Debug, Deserialize)]
pub struct ModelDoc {
    pub base_year: i32,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    #[serde(rename = "ln_L0")]
    pub ln_l0: f64,
    #[serde(rename = "ln_K0")]
    pub ln_k0: f64,
    #[serde(rename = "ln_Y0")]
    pub ln_y0: f64,
}

impl ModelDoc {
    pub fn to_model(&self) -> Result<ExponentialModel, MathError> {
        ExponentialModel::new([self.b1, self.b2, self.b3], [self.ln_l0, self.ln_k0, self.ln_y0], self.base_year)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputDoc {
    Labor,
    Capital,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionDoc {
    PowerLaw {
        input: InputDoc,
        coeff: f64,
        exponent: f64,
    },
    CobbDouglas {
        #[serde(rename = "A")]
        a: f64,
        alpha: f64,
        beta: f64,
    },
    GeneralizedCes {
        alpha: f64,
        #[serde(rename = "ln_cK")]
        ln_ck: f64,
        #[serde(rename = "ln_cL")]
        ln_cl: f64,
        #[serde(rename = "eK")]
        e_k: f64,
        #[serde(rename = "eL")]
        e_l: f64,
        outer: f64,
    },
    Ces {
        #[serde(rename = "A")]
        a: f64,
        alpha: f64,
        p: f64,
        v: f64,
    },
}

impl FunctionDoc {
    pub fn to_function(&self) -> Result<ProductionFunction, MathError> {
        Ok(match *self {
            FunctionDoc::PowerLaw { input, coeff, exponent } => {
                let input = match input {
                    InputDoc::Labor => Input::Labor,
                    InputDoc::Capital => Input::Capital,
                };
                PowerLaw::new(coeff, exponent, input)?.into()
            }
            FunctionDoc::CobbDouglas { a, alpha, beta } => CobbDouglas::new(a, alpha, beta)?.into(),
            FunctionDoc::GeneralizedCes { alpha, ln_ck, ln_cl, e_k, e_l, outer } => {
                GeneralizedCes::from_log_coefficients(ln_ck, ln_cl, alpha, e_k, e_l, outer)?.into()
            }
            FunctionDoc::Ces { a, alpha, p, v } => Ces::new(a, alpha, p, v)?.into(),
        })
    }
}
