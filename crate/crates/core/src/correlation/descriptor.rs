use std::fmt;

use crate::arith::LinearSieve;
use crate::crs::{CrsParams, CrsTable};
use crate::error::{Error, Result};
use crate::expansion::{tabulate_truncated, ArgumentMode, CoefficientFamily, TabulatedFunction};

/// A real arithmetical function that can be tabulated on `1..=N`.
///
/// Text forms (see [`FunctionDescriptor::parse`]):
///
/// | form | value at `n` |
/// |------|--------------|
/// | `one`, `const:V` | `1`, `V` |
/// | `sigma:T` | `sigma_T(n) / n^T` |
/// | `sigma-root:T:S` | `sigma_T(m) / m^T`, `m` the largest integer with `m^S | n` |
/// | `jordan:K` | `J_K(n) / n^K` |
/// | `jordan-root:K:S` | `J_K(m) / m^K`, `m` as above |
/// | `crs:R:S` | `c_R^S(n)` |
/// | `csv:PATH` | tabulated values |
/// | `expand:S:RANK:<family>` | truncated expansion |
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionDescriptor {
    Constant(f64),
    SigmaRatio { t: u32, root: u32 },
    JordanRatio { k: u32, root: u32 },
    Crs { r: u64, s: u32 },
    Tabulated { source: String, table: TabulatedFunction<f64> },
    Expansion { family: CoefficientFamily<f64>, rank: u64 },
}

impl FunctionDescriptor {
    /// Parses a text form; `csv:` reads the file immediately.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("function `{text}`: {why}"));
        let int = |arg: &str| arg.parse::<u32>().map_err(|_| bad("expected a positive integer"));
        let parts: Vec<&str> = text.splitn(2, ':').collect();
        let rest = parts.get(1).copied().unwrap_or("");
        let args: Vec<&str> = rest.split(':').collect();
        let positive = |v: u32| if v == 0 { Err(bad("zero index")) } else { Ok(v) };
        match (parts[0], args.as_slice()) {
            ("one", _) if parts.len() == 1 => Ok(Self::Constant(1.0)),
            ("const", [v]) => Ok(Self::Constant(v.parse().map_err(|_| bad("bad constant"))?)),
            ("sigma", [t]) => Ok(Self::SigmaRatio { t: int(t)?, root: 1 }),
            ("sigma-root", [t, s]) => Ok(Self::SigmaRatio {
                t: int(t)?,
                root: positive(int(s)?)?,
            }),
            ("jordan", [k]) => Ok(Self::JordanRatio {
                k: positive(int(k)?)?,
                root: 1,
            }),
            ("jordan-root", [k, s]) => Ok(Self::JordanRatio {
                k: positive(int(k)?)?,
                root: positive(int(s)?)?,
            }),
            ("crs", [r, s]) => {
                let r = r.parse::<u64>().map_err(|_| bad("bad modulus"))?;
                let s = int(s)?;
                CrsParams::new(r, s)?;
                Ok(Self::Crs { r, s })
            }
            ("csv", _) if !rest.is_empty() => Ok(Self::Tabulated {
                source: rest.to_string(),
                table: TabulatedFunction::read_csv_path(rest)?,
            }),
            ("expand", _) => {
                let mut it = rest.splitn(3, ':');
                let (s, rank, family) = match (it.next(), it.next(), it.next()) {
                    (Some(s), Some(rank), Some(family)) => (s, rank, family),
                    _ => return Err(bad("expected `expand:S:RANK:<family>`")),
                };
                let rank = rank.parse::<u64>().map_err(|_| bad("bad rank"))?;
                if rank == 0 {
                    return Err(bad("rank must be positive"));
                }
                Ok(Self::Expansion {
                    family: CoefficientFamily::parse(family, int(s)?)?,
                    rank,
                })
            }
            _ => Err(bad("unknown form")),
        }
    }

    /// The family expanding this function in `c_r^s(n)`, when one is known.
    ///
    /// `sigma-root:T:S` with `S | T` and `jordan-root:K:S` are the plain
    /// readings of the closed-form families; at `s = 1` the root forms
    /// reduce to `sigma:T` and `jordan:K`.
    pub fn family(&self, s: u32) -> Result<Option<CoefficientFamily<f64>>> {
        if s == 0 {
            return Err(Error::ZeroArgument("exponent s"));
        }
        Ok(match self {
            Self::Constant(v) => Some(CoefficientFamily::tabulated(s, vec![*v], ArgumentMode::Plain)?),
            Self::SigmaRatio { t, root } if *root == s && *t >= s && t % s == 0 => {
                Some(CoefficientFamily::sigma(t / s, s)?.reinterpret_plain())
            }
            Self::JordanRatio { k, root } if *root == s => Some(CoefficientFamily::jordan(*k, s)?.reinterpret_plain()),
            Self::Crs { r, s: cs } if *cs == s => {
                let mut coeffs = vec![0.0; *r as usize];
                coeffs[*r as usize - 1] = 1.0;
                Some(CoefficientFamily::tabulated(s, coeffs, ArgumentMode::Plain)?)
            }
            Self::Expansion { family, .. } if family.s() == s && family.is_plain() => Some(family.clone()),
            _ => None,
        })
    }

    /// Values at `n = 1, ..., upto` (index `n - 1`).
    pub fn tabulate(&self, upto: u64) -> Result<Vec<f64>> {
        let len = upto as usize;
        match self {
            Self::Constant(v) => Ok(vec![*v; len]),
            Self::SigmaRatio { t, root } => {
                let (t, root) = (*t as i32, *root);
                Ok(multiplicative(len, |p, e| {
                    let inv = (p as f64).powi(-t);
                    let mut acc = 1.0;
                    let mut term = 1.0;
                    for _ in 0..e / root {
                        term *= inv;
                        acc += term;
                    }
                    acc
                }))
            }
            Self::JordanRatio { k, root } => {
                let (k, root) = (*k as i32, *root);
                Ok(multiplicative(len, |p, e| if e >= root { 1.0 - (p as f64).powi(-k) } else { 1.0 }))
            }
            Self::Crs { r, s } => {
                let table = CrsTable::new(&CrsParams::new(*r, *s)?)?;
                Ok((1..=upto).map(|n| table.get(n) as f64).collect())
            }
            Self::Tabulated { table, .. } => {
                if upto > table.len() {
                    return Err(Error::Evaluation {
                        n: table.len() + 1,
                        reason: format!("outside tabulated range 1..={}", table.len()),
                    });
                }
                Ok(table.values()[..len].to_vec())
            }
            Self::Expansion { family, rank } => tabulate_truncated(family, upto, *rank),
        }
    }
}

fn multiplicative(len: usize, local: impl Fn(u64, u32) -> f64) -> Vec<f64> {
    let sieve = LinearSieve::new(len);
    let mut values = sieve.tabulate_multiplicative(0.0, 1.0, local);
    values.remove(0);
    values
}

impl fmt::Display for FunctionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(v) if *v == 1.0 => write!(f, "one"),
            Self::Constant(v) => write!(f, "const:{v:?}"),
            Self::SigmaRatio { t, root: 1 } => write!(f, "sigma:{t}"),
            Self::SigmaRatio { t, root } => write!(f, "sigma-root:{t}:{root}"),
            Self::JordanRatio { k, root: 1 } => write!(f, "jordan:{k}"),
            Self::JordanRatio { k, root } => write!(f, "jordan-root:{k}:{root}"),
            Self::Crs { r, s } => write!(f, "crs:{r}:{s}"),
            Self::Tabulated { source, .. } => write!(f, "csv:{source}"),
            Self::Expansion { family, rank } => write!(f, "expand:{}:{rank}:{}", family.s(), family.describe()),
        }
    }
}
