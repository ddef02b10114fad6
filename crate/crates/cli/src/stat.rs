use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use gbe_core::density::{FnHandle, LinearStatistic};

#[derive(Clone, Debug, PartialEq)]
pub enum StatSpec {
    Poly(usize),
    Cheb(usize),
    Cos(f64),
    Exp(f64),
}

impl FromStr for StatSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| format!("`{s}`: expected poly:K, cheb:K, cos:T or exp:T"))?;
        let int = || {
            arg.parse::<usize>()
                .map_err(|_| format!("`{arg}` is not a degree"))
        };
        let real = || {
            arg.parse::<f64>()
                .map_err(|_| format!("`{arg}` is not a number"))
        };
        match kind {
            "poly" => Ok(StatSpec::Poly(int()?)),
            "cheb" => Ok(StatSpec::Cheb(int()?)),
            "cos" => Ok(StatSpec::Cos(real()?)),
            "exp" => Ok(StatSpec::Exp(real()?)),
            _ => Err(format!("unknown statistic `{kind}`")),
        }
    }
}

impl fmt::Display for StatSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatSpec::Poly(k) => write!(f, "poly:{k}"),
            StatSpec::Cheb(k) => write!(f, "cheb:{k}"),
            StatSpec::Cos(t) => write!(f, "cos:{t}"),
            StatSpec::Exp(t) => write!(f, "exp:{t}"),
        }
    }
}

/// Derivatives available to the quadrature path.
const ORDER: usize = 64;

impl StatSpec {
    pub fn statistic(&self) -> LinearStatistic {
        match *self {
            StatSpec::Poly(k) => LinearStatistic::monomial(k),
            StatSpec::Cheb(k) => LinearStatistic::chebyshev(k),
            StatSpec::Cos(t) => {
                LinearStatistic::Smooth(Arc::new(FnHandle::new(ORDER, move |x: f64, k| {
                    let (s, c) = (t * x).sin_cos();
                    (0..=k)
                        .map(|j| {
                            let v = [c, -s, -c, s][j % 4];
                            v * t.powi(j as i32)
                        })
                        .collect()
                })))
            }
            StatSpec::Exp(t) => {
                LinearStatistic::Smooth(Arc::new(FnHandle::new(ORDER, move |x: f64, k| {
                    let e = (t * x).exp();
                    (0..=k).map(|j| e * t.powi(j as i32)).collect()
                })))
            }
        }
    }
}
