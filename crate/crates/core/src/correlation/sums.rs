use serde::{Deserialize, Serialize};

use super::descriptor::FunctionDescriptor;
use crate::arith::RealApprox;
use crate::error::{Error, Result};
use crate::scalar::{blocked_sum, Neumaier};

/// `sum_{n <= N} f(n) g(n + h)` together with the partial sums at each
/// checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSums {
    #[serde(rename = "N")]
    pub n: u64,
    pub h: u64,
    pub empirical: f64,
    /// `(N_i, sum_{n <= N_i})`, strictly increasing, ending at `N`.
    pub partials: Vec<(u64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    #[serde(rename = "N")]
    pub n: u64,
    pub ratio: f64,
}

/// Empirical shifted sum set against `N` times a predicted constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub h: u64,
    pub empirical: f64,
    #[serde(rename = "predicted")]
    pub predicted_constant: RealApprox,
    /// `empirical / (N * predicted)`
    pub ratio: f64,
    pub trace: Vec<TracePoint>,
}

impl CorrelationReport {
    pub fn new(sums: &CorrelationSums, predicted: RealApprox) -> Self {
        let ratio = |n: u64, s: f64| s / (n as f64 * predicted.value);
        Self {
            n: sums.n,
            h: sums.h,
            empirical: sums.empirical,
            predicted_constant: predicted,
            ratio: ratio(sums.n, sums.empirical),
            trace: sums
                .partials
                .iter()
                .map(|&(n, s)| TracePoint { n, ratio: ratio(n, s) })
                .collect(),
        }
    }
}

/// Sorted, deduplicated checkpoints within `1..N`, followed by `N`.
pub fn normalize_checkpoints(checkpoints: &[u64], n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = checkpoints.iter().copied().filter(|&c| c >= 1 && c < n).collect();
    out.sort_unstable();
    out.dedup();
    out.push(n);
    out
}

/// Powers of ten below `n`, then `n`.
pub fn decade_checkpoints(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut c = 10u64;
    while c < n {
        out.push(c);
        c = c.saturating_mul(10);
    }
    out.push(n);
    out
}

/// Computes `sum_{n <= N} f(n) g(n + h)`.
///
/// Each segment between consecutive checkpoints is reduced with
/// [`blocked_sum`]; segment totals are chained with Neumaier summation, so
/// the result does not depend on the thread count.
pub fn correlate(
    f: &FunctionDescriptor,
    g: &FunctionDescriptor,
    h: u64,
    n: u64,
    checkpoints: &[u64],
) -> Result<CorrelationSums> {
    if n == 0 {
        return Err(Error::ZeroArgument("correlation length N"));
    }
    let upto_g = n.checked_add(h).ok_or_else(|| Error::overflow("N + h"))?;
    let fv = f.tabulate(n)?;
    let gv = g.tabulate(upto_g)?;
    let h = h as usize;
    if let Some(i) = fv.iter().position(|v| !v.is_finite()) {
        return Err(non_finite(i as u64 + 1, "f"));
    }
    if let Some(i) = gv.iter().position(|v| !v.is_finite()) {
        return Err(non_finite(i as u64 + 1, "g"));
    }

    let mut acc = Neumaier::default();
    let mut start = 0usize;
    let mut partials = Vec::new();
    for c in normalize_checkpoints(checkpoints, n) {
        let end = c as usize;
        acc.add(blocked_sum(start..end, |i| fv[i] * gv[i + h]));
        partials.push((c, acc.total()));
        start = end;
    }
    Ok(CorrelationSums {
        n,
        h: h as u64,
        empirical: acc.total(),
        partials,
    })
}

fn non_finite(n: u64, which: &str) -> Error {
    Error::Evaluation {
        n,
        reason: format!("{which} is not finite"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::TabulatedFunction;

    fn parse(text: &str) -> FunctionDescriptor {
        FunctionDescriptor::parse(text).unwrap()
    }

    #[test]
    fn constant_functions_sum_to_n() {
        for h in [0u64, 1, 17] {
            let r = correlate(&parse("one"), &parse("one"), h, 1000, &[10, 100]).unwrap();
            assert_eq!(r.empirical, 1000.0);
            assert_eq!(r.partials, vec![(10, 10.0), (100, 100.0), (1000, 1000.0)]);
        }
    }

    #[test]
    fn ramanujan_two_squared() {
        let c2 = parse("crs:2:1");
        assert_eq!(correlate(&c2, &c2, 0, 4, &[]).unwrap().empirical, 4.0);
    }

    #[test]
    fn sigma_shift_one_matches_direct_loop() {
        // direct divisor enumeration, summed with plain f64 adds
        let ratio = |n: u64| -> f64 { (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| (d as f64 / n as f64).powi(2)).sum() };
        let direct: f64 = (1..=1000u64).map(|n| ratio(n) * ratio(n + 1)).sum();
        let f = parse("sigma:2");
        let got = correlate(&f, &f, 1, 1000, &[]).unwrap().empirical;
        assert!((got - direct).abs() < 1e-10, "{got} vs {direct}");
        assert!((got - 1420.123426502029).abs() < 1e-9);
    }

    #[test]
    fn failure_reports_offending_n() {
        let short = FunctionDescriptor::Tabulated {
            source: "mem".into(),
            table: TabulatedFunction::new(vec![1.0; 10]),
        };
        match correlate(&parse("one"), &short, 3, 9, &[]) {
            Err(Error::Evaluation { n, .. }) => assert_eq!(n, 11),
            other => panic!("{other:?}"),
        }
        let bad = FunctionDescriptor::Tabulated {
            source: "mem".into(),
            table: TabulatedFunction::new(vec![1.0, f64::NAN, 1.0]),
        };
        match correlate(&bad, &parse("one"), 0, 3, &[]) {
            Err(Error::Evaluation { n, .. }) => assert_eq!(n, 2),
            other => panic!("{other:?}"),
        }
        assert!(correlate(&parse("one"), &parse("one"), 0, 0, &[]).is_err());
    }

    #[test]
    fn checkpoints_are_normalized() {
        assert_eq!(normalize_checkpoints(&[50, 0, 10, 10, 500], 100), vec![10, 50, 100]);
        assert_eq!(decade_checkpoints(1000), vec![10, 100, 1000]);
        assert_eq!(decade_checkpoints(5), vec![5]);
    }

    #[test]
    fn report_ratios_follow_trace() {
        let sums = correlate(&parse("one"), &parse("one"), 0, 100, &[10]).unwrap();
        let report = CorrelationReport::new(&sums, RealApprox::exact(0.5));
        assert_eq!(report.ratio, 2.0);
        assert_eq!(report.trace.iter().map(|t| t.ratio).collect::<Vec<_>>(), vec![2.0, 2.0]);
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["N"], 100);
        assert!(json["trace"][0]["N"] == 10);
        let back: CorrelationReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, report);
    }
}
