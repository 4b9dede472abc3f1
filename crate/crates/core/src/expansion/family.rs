use serde::{Deserialize, Serialize};

use crate::arith::{factorize, jordan_totient, mobius_of, pow_or_overflow, zeta, RealApprox};
use crate::crs::{crs_fast, CrsParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::tabulated::parse_exact;

/// Whether an expansion is read against `c_r^s(n)` or `c_r^s(n^s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArgumentMode {
    Plain,
    SPower,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind<T> {
    /// `sigma_{ks}(n) / n^{ks}`, coefficients `zeta((k+1)s) / r^{(k+1)s}`.
    Sigma { k: u32, zeta: RealApprox },
    /// `J_k(n) / n^k`, coefficients `mu(q) / (zeta(s+k) J_{s+k}(q))`.
    Jordan { k: u32, zeta: RealApprox },
    /// `f(n + h)`, coefficients `f^(r) c_r^s(h) / Phi_s(r^s)`.
    Shifted { base: Box<CoefficientFamily<T>>, h: u64 },
    /// Finitely many explicit coefficients, `r = 1, 2, ...`.
    Tabulated(Vec<T>),
}

/// Decay envelope `|f^(r)| <= scale * r^-decay`, or finite support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Envelope {
    Power { scale: f64, decay: f64 },
    Finite { len: u64 },
}

/// A rule `r -> f^(r)` together with the argument the expansion is read at.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFamily<T> {
    s: u32,
    kind: FamilyKind<T>,
    mode: ArgumentMode,
}

fn check_s(s: u32) -> Result<()> {
    if s == 0 {
        Err(Error::ZeroArgument("exponent s"))
    } else {
        Ok(())
    }
}

impl<T: Scalar> CoefficientFamily<T> {
    pub fn sigma(k: u32, s: u32) -> Result<Self> {
        check_s(s)?;
        if k == 0 {
            return Err(Error::ZeroArgument("sigma family index k"));
        }
        Ok(Self {
            s,
            kind: FamilyKind::Sigma {
                k,
                zeta: zeta(((k + 1) * s) as f64)?,
            },
            mode: ArgumentMode::SPower,
        })
    }

    pub fn jordan(k: u32, s: u32) -> Result<Self> {
        check_s(s)?;
        if k == 0 {
            return Err(Error::ZeroArgument("jordan family index k"));
        }
        Ok(Self {
            s,
            kind: FamilyKind::Jordan {
                k,
                zeta: zeta((s + k) as f64)?,
            },
            mode: ArgumentMode::SPower,
        })
    }

    pub fn tabulated(s: u32, coefficients: Vec<T>, mode: ArgumentMode) -> Result<Self> {
        check_s(s)?;
        Ok(Self {
            s,
            kind: FamilyKind::Tabulated(coefficients),
            mode,
        })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn kind(&self) -> &FamilyKind<T> {
        &self.kind
    }

    pub fn mode(&self) -> ArgumentMode {
        self.mode
    }

    /// True when the expansion reads `c_r^s(n)`; for `s = 1` both modes agree.
    pub fn is_plain(&self) -> bool {
        self.mode == ArgumentMode::Plain || self.s == 1
    }

    /// Reads the same coefficients against `c_r^s(n)`. For an `SPower`
    /// family representing `f`, the result represents `n -> f(m)` where `m`
    /// is the largest integer with `m^s | n`.
    pub fn reinterpret_plain(mut self) -> Self {
        self.mode = ArgumentMode::Plain;
        self
    }

    /// The value `c_r^s` is evaluated at for input `n`.
    pub fn argument(&self, n: u64) -> Result<u128> {
        match self.mode {
            ArgumentMode::Plain => Ok(n as u128),
            ArgumentMode::SPower => pow_or_overflow(n as u128, self.s),
        }
    }

    /// The coefficient `f^(r)`.
    pub fn coeff(&self, r: u64) -> Result<T> {
        if r == 0 {
            return Err(Error::ZeroArgument("coefficient index r"));
        }
        match &self.kind {
            FamilyKind::Sigma { k, zeta } => {
                let exp = (k + 1) * self.s;
                Ok(T::from_real(zeta.value) * T::recip_pow(r, exp))
            }
            FamilyKind::Jordan { k, zeta } => {
                let f = factorize(r)?;
                let mu = mobius_of(&f);
                if mu == 0 {
                    return Ok(T::zero());
                }
                let j = jordan_totient(self.s + k, r)?;
                Ok(T::from_ratio(mu as i128, j) / T::from_real(zeta.value))
            }
            FamilyKind::Shifted { base, h } => {
                let b = base.coeff(r)?;
                if b.is_zero() {
                    return Ok(b);
                }
                let p = CrsParams::new(r, self.s)?;
                let c = crs_fast(&p, *h as u128)?;
                // Phi_s(r^s) = J_s(r)
                let phi = jordan_totient(self.s, r)?;
                Ok(b * T::from_ratio(c, phi))
            }
            FamilyKind::Tabulated(values) => Ok(values.get(r as usize - 1).cloned().unwrap_or_else(T::zero)),
        }
    }

    /// Envelope used for tail bounds.
    pub fn envelope(&self) -> Envelope {
        match &self.kind {
            FamilyKind::Sigma { k, zeta } => Envelope::Power {
                scale: zeta.value + zeta.abs_error_bound,
                decay: ((k + 1) * self.s) as f64,
            },
            // 1 / J_{s+k}(q) <= zeta(s+k) / q^{s+k}
            FamilyKind::Jordan { k, .. } => Envelope::Power {
                scale: 1.0,
                decay: (self.s + k) as f64,
            },
            // |c_r^s(h)| <= c_r^s(0) = Phi_s(r^s)
            FamilyKind::Shifted { base, .. } => base.envelope(),
            FamilyKind::Tabulated(values) => Envelope::Finite {
                len: values.len() as u64,
            },
        }
    }

    /// Whether `coeff` is multiplicative in `r` up to a constant factor.
    pub(crate) fn euler_factorable(&self) -> bool {
        matches!(self.kind, FamilyKind::Sigma { .. } | FamilyKind::Jordan { .. })
    }
}

/// The family of `n -> f(n + h)`. The base must read `c_r^s(n)`; use
/// [`CoefficientFamily::reinterpret_plain`] to opt an `SPower` family in.
pub fn shift_family<T: Scalar>(base: CoefficientFamily<T>, h: u64) -> Result<CoefficientFamily<T>> {
    if !base.is_plain() {
        return Err(Error::Domain(
            "shift needs a family expanded in c_r^s(n); reinterpret the base as plain first".into(),
        ));
    }
    Ok(CoefficientFamily {
        s: base.s,
        kind: FamilyKind::Shifted {
            base: Box::new(base),
            h,
        },
        mode: ArgumentMode::Plain,
    })
}

impl<T: Scalar> CoefficientFamily<T> {
    /// Parses the textual form used on the command line and in report
    /// echoes:
    ///
    /// * `sigma:K`, `jordan:K`, optionally suffixed `:plain`
    /// * `shift:H:<family>`
    /// * `coeffs:C1,C2,...` with exact literals, optionally suffixed
    ///   `:s-power`
    pub fn parse(text: &str, s: u32) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("family `{text}`: {why}"));
        let (head, rest) = text.split_once(':').ok_or_else(|| bad("expected `kind:args`"))?;
        let index = |arg: &str| arg.parse::<u32>().map_err(|_| bad("index must be a positive integer"));
        match head {
            "sigma" | "jordan" => {
                let (k, plain) = match rest.split_once(':') {
                    Some((k, "plain")) => (k, true),
                    Some(_) => return Err(bad("only `:plain` may follow the index")),
                    None => (rest, false),
                };
                let k = index(k)?;
                let f = if head == "sigma" { Self::sigma(k, s)? } else { Self::jordan(k, s)? };
                Ok(if plain { f.reinterpret_plain() } else { f })
            }
            "shift" => {
                let (h, base) = rest.split_once(':').ok_or_else(|| bad("expected `shift:H:<family>`"))?;
                let h = h.parse::<u64>().map_err(|_| bad("shift must be a non-negative integer"))?;
                shift_family(Self::parse(base, s)?, h)
            }
            "coeffs" => {
                let (list, mode) = match rest.rsplit_once(':') {
                    Some((list, "s-power")) => (list, ArgumentMode::SPower),
                    _ => (rest, ArgumentMode::Plain),
                };
                let coeffs = list
                    .split(',')
                    .filter(|c| !c.trim().is_empty())
                    .map(|c| parse_exact(c).map(|q| T::from_rational(&q)))
                    .collect::<Result<Vec<T>>>()?;
                Self::tabulated(s, coeffs, mode)
            }
            _ => Err(bad("unknown kind")),
        }
    }

    /// Inverse of [`CoefficientFamily::parse`] (for the same `s`).
    pub fn describe(&self) -> String {
        let suffix = match (self.mode, &self.kind) {
            (ArgumentMode::Plain, FamilyKind::Sigma { .. } | FamilyKind::Jordan { .. }) => ":plain",
            (ArgumentMode::SPower, FamilyKind::Tabulated(_)) => ":s-power",
            _ => "",
        };
        let body = match &self.kind {
            FamilyKind::Sigma { k, .. } => format!("sigma:{k}"),
            FamilyKind::Jordan { k, .. } => format!("jordan:{k}"),
            FamilyKind::Shifted { base, h } => format!("shift:{h}:{}", base.describe()),
            FamilyKind::Tabulated(values) => {
                format!("coeffs:{}", values.iter().map(|v| v.to_literal()).collect::<Vec<_>>().join(","))
            }
        };
        body + suffix
    }
}
