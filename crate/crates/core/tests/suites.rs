use crs_core::correlation::{correlate, FunctionDescriptor};
use crs_core::verify::{run_check, run_suite, Suite};
use crs_core::{ExactFamily, Family};
use proptest::prelude::*;

#[test]
fn sigma_correlation_constant_suite() {
    let outcomes = run_suite(Suite::Cor1);
    assert!(!outcomes.is_empty());
    for o in &outcomes {
        assert!(o.passed, "{o}");
    }
}

#[test]
fn unknown_check_id() {
    assert!(run_check("no-such-check").is_none());
}

#[test]
fn family_text_round_trips() {
    for text in [
        "sigma:1",
        "sigma:2:plain",
        "jordan:3",
        "shift:4:jordan:2:plain",
        "coeffs:1,-1/2,0,3",
        "coeffs:1/3,2:s-power",
    ] {
        for s in [1, 2] {
            let exact = ExactFamily::parse(text, s).unwrap();
            assert_eq!(exact.describe(), text, "s={s}");
            let float = Family::parse(&exact.describe(), s).unwrap();
            assert_eq!(Family::parse(&float.describe(), s).unwrap(), float);
        }
    }
    assert!(Family::parse("shift:1:sigma:2", 2).is_err());
    assert!(Family::parse("sigma", 1).is_err());
}

#[test]
fn descriptor_text_round_trips() {
    for text in ["one", "sigma:2", "jordan:1", "crs:6:2", "expand:1:50:sigma:1"] {
        let d = FunctionDescriptor::parse(text).unwrap();
        assert_eq!(FunctionDescriptor::parse(&d.to_string()).unwrap().to_string(), d.to_string());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn correlation_sums_ignore_pool_size(h in 0u64..20, n in 1u64..60_000, threads in 2usize..5) {
        let f = FunctionDescriptor::parse("sigma:1").unwrap();
        let g = FunctionDescriptor::parse("jordan:2").unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let many = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let a = one.install(|| correlate(&f, &g, h, n, &[n / 2 + 1, n]).unwrap());
        let b = many.install(|| correlate(&f, &g, h, n, &[n / 2 + 1, n]).unwrap());
        prop_assert_eq!(a.empirical.to_bits(), b.empirical.to_bits());
        prop_assert_eq!(a.partials.len(), b.partials.len());
        for (x, y) in a.partials.iter().zip(&b.partials) {
            prop_assert_eq!(x.0, y.0);
            prop_assert_eq!(x.1.to_bits(), y.1.to_bits());
        }
    }
}
