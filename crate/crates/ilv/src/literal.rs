//! Module literals: `interval:a,b`, `rect:a1,a2;b1,b2` and `empty`.

use interleaving::pmod::{IntervalModule, RectangleModule};

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum ModuleLiteral {
    Interval(IntervalModule),
    Rect(RectangleModule),
    Empty,
}

impl ModuleLiteral {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Parse(format!("{text:?}: {why}"));
        let numbers = |list: &str| -> Result<Vec<f64>, CliError> {
            list.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| bad(&format!("bad number {t:?}"))))
                .collect()
        };
        if text.trim() == "empty" {
            return Ok(ModuleLiteral::Empty);
        }
        if let Some(rest) = text.strip_prefix("interval:") {
            let v = numbers(rest)?;
            if v.len() != 2 {
                return Err(bad("an interval needs two endpoints"));
            }
            return IntervalModule::new(v[0], v[1])
                .map(ModuleLiteral::Interval)
                .map_err(|e| bad(&e.to_string()));
        }
        if let Some(rest) = text.strip_prefix("rect:") {
            let (lo, hi) = rest.split_once(';').ok_or_else(|| bad("a rectangle needs `lower;upper`"))?;
            return RectangleModule::new(numbers(lo)?, numbers(hi)?)
                .map(ModuleLiteral::Rect)
                .map_err(|e| bad(&e.to_string()));
        }
        Err(bad("expected interval:a,b, rect:a1,a2;b1,b2 or empty"))
    }

    /// Ambient dimension, `None` for `empty`.
    pub fn dim(&self) -> Option<usize> {
        match self {
            ModuleLiteral::Interval(_) => Some(1),
            ModuleLiteral::Rect(r) => Some(r.dim()),
            ModuleLiteral::Empty => None,
        }
    }

    pub fn to_rectangle(&self, dim: usize) -> RectangleModule {
        match self {
            ModuleLiteral::Interval(i) => i.to_rectangle(),
            ModuleLiteral::Rect(r) => r.clone(),
            ModuleLiteral::Empty => RectangleModule::empty(dim),
        }
    }

    pub fn as_interval(&self) -> Option<IntervalModule> {
        match self {
            ModuleLiteral::Interval(i) => Some(*i),
            ModuleLiteral::Empty => Some(IntervalModule::empty()),
            ModuleLiteral::Rect(r) if r.dim() == 1 => {
                if r.is_empty() {
                    Some(IntervalModule::empty())
                } else {
                    IntervalModule::new(r.a[0], r.b[0]).ok()
                }
            }
            ModuleLiteral::Rect(_) => None,
        }
    }
}
