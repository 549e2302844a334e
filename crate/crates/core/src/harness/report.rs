use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::fit::{fit_rate, RateFit};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub quantity: String,
    pub eps: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantityFit {
    pub fit: Option<RateFit>,
    pub theory_slope: Option<f64>,
}

/// `(ε, value)` rows per quantity with fitted log-log slopes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceReport {
    pub rows: Vec<Row>,
    pub fits: BTreeMap<String, QuantityFit>,
}

impl ConvergenceReport {
    pub fn push(&mut self, quantity: &str, eps: f64, value: f64) {
        self.rows.push(Row { quantity: quantity.to_string(), eps, value });
    }

    pub fn quantities(&self) -> Vec<String> {
        let mut q: Vec<String> = Vec::new();
        for r in &self.rows {
            if !q.contains(&r.quantity) {
                q.push(r.quantity.clone());
            }
        }
        q
    }

    /// Rows of one quantity, in insertion (ladder) order.
    pub fn series(&self, quantity: &str) -> Vec<(f64, f64)> {
        self.rows.iter().filter(|r| r.quantity == quantity).map(|r| (r.eps, r.value)).collect()
    }

    pub fn values(&self, quantity: &str) -> Vec<f64> {
        self.series(quantity).into_iter().map(|r| r.1).collect()
    }

    /// Fits every quantity; those with fewer than 3 usable rows get no slope.
    pub fn fit(&mut self, theory: &[(&str, f64)]) {
        for q in self.quantities() {
            let fit = fit_rate(&self.series(&q)).ok();
            let theory_slope = theory.iter().find(|t| t.0 == q).map(|t| t.1);
            self.fits.insert(q, QuantityFit { fit, theory_slope });
        }
    }

    pub fn slope(&self, quantity: &str) -> Option<f64> {
        self.fits.get(quantity).and_then(|f| f.fit.as_ref()).map(|f| f.slope)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("quantity,eps,value,slope,theory_slope,residual\n");
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.16e}")).unwrap_or_default();
        for r in &self.rows {
            let f = self.fits.get(&r.quantity);
            let fit = f.and_then(|f| f.fit.as_ref());
            let _ = writeln!(
                s,
                "{},{:.16e},{:.16e},{},{},{}",
                r.quantity,
                r.eps,
                r.value,
                opt(fit.map(|f| f.slope)),
                opt(f.and_then(|f| f.theory_slope)),
                opt(fit.map(|f| f.residual)),
            );
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("quantity,eps,value,slope,theory_slope,residual") {
            return Err(invalid("convergence report must start with its header"));
        }
        let mut rep = Self::default();
        for (k, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 6 {
                return Err(invalid(format!("row {} has {} columns", k + 1, cols.len())));
            }
            let num = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| invalid(format!("bad number '{s}' in row {}", k + 1)))
                }
            };
            let eps = num(cols[1])?.ok_or_else(|| invalid("missing eps"))?;
            let value = num(cols[2])?.ok_or_else(|| invalid("missing value"))?;
            rep.push(cols[0], eps, value);
            if let Some(slope) = num(cols[3])? {
                let fit = RateFit { slope, intercept: f64::NAN, residual: num(cols[5])?.unwrap_or(f64::NAN), dropped: Vec::new() };
                rep.fits.insert(cols[0].to_string(), QuantityFit { fit: Some(fit), theory_slope: num(cols[4])? });
            } else {
                rep.fits.entry(cols[0].to_string()).or_insert(QuantityFit { fit: None, theory_slope: num(cols[4])? });
            }
        }
        Ok(rep)
    }
}
