//! User-supplied expressions such as `sin(x) + y^2`.

use std::sync::Arc;

use eulerkit::firstorder::{Func1, Func2};
use meval::{Context, Expr};

use crate::output::CliError;

thread_local! {
    static BUILTINS: Context<'static> = Context::new();
}

/// A parsed expression in named variables. Evaluation failures give NaN.
#[derive(Debug, Clone)]
pub struct Formula {
    expr: Expr,
    vars: Vec<String>,
}

impl Formula {
    pub fn parse(text: &str, vars: &[&str]) -> Result<Self, CliError> {
        let expr: Expr = text.parse().map_err(|e| CliError::usage(format!("cannot parse expression {text:?}: {e}")))?;
        let f = Self { expr, vars: vars.iter().map(|v| v.to_string()).collect() };
        // unknown names surface here rather than as NaN later
        let probe = vec![0.5; vars.len()];
        f.try_eval(&probe).map_err(|e| CliError::usage(format!("expression {text:?}: {e}")))?;
        Ok(f)
    }

    fn try_eval(&self, values: &[f64]) -> Result<f64, meval::Error> {
        let bound: Vec<(&str, f64)> = self.vars.iter().map(String::as_str).zip(values.iter().copied()).collect();
        BUILTINS.with(|b| self.expr.eval_with_context((bound, b)))
    }

    pub fn eval(&self, values: &[f64]) -> f64 {
        self.try_eval(values).unwrap_or(f64::NAN)
    }

    pub fn func1(text: &str, var: &str) -> Result<Func1, CliError> {
        let f = Self::parse(text, &[var])?;
        Ok(Arc::new(move |x| f.eval(&[x])))
    }

    pub fn func2(text: &str, u: &str, v: &str) -> Result<Func2, CliError> {
        let f = Self::parse(text, &[u, v])?;
        Ok(Arc::new(move |x, y| f.eval(&[x, y])))
    }
}
