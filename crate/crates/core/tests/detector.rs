use proptest::prelude::*;

use num_complex::Complex64;
use scfdma_cyclo::config_file::RunConfig;
use scfdma_cyclo::detector::{detect, threshold, DetectorSettings};
use scfdma_cyclo::harness::trial_record;
use scfdma_cyclo::Error;

fn record() -> (RunConfig, scfdma_cyclo::ComplexStream) {
    let mut cfg = RunConfig::default();
    cfg.scenario.observation_s = 4e-3;
    cfg.scenario.snr_db = -8.0;
    cfg.scenario.quantizer_bits = None;
    let r = trial_record(&cfg, 0, 77).unwrap();
    (cfg, r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn statistic_is_scale_invariant(mag in 1e-4f64..1e4, phase in -3.14f64..3.14) {
        let (cfg, r) = record();
        let s = DetectorSettings::default();
        let base = detect(&r, &cfg.signal, &s).unwrap();
        let t = detect(&r.scaled(Complex64::from_polar(mag, phase)), &cfg.signal, &s).unwrap();
        prop_assert_eq!(t.decision, base.decision);
        prop_assert!((t.upsilon - base.upsilon).abs() <= 1e-7 * base.upsilon);
    }

    #[test]
    fn threshold_decreases_with_pfa(a in 1e-6f64..0.999, b in 1e-6f64..0.999) {
        prop_assume!(a < b);
        prop_assert!(threshold(a).unwrap() > threshold(b).unwrap());
    }
}

#[test]
fn short_records_and_bad_pfa_are_rejected() {
    let (cfg, r) = record();
    let short = scfdma_cyclo::ComplexStream::new(r.samples()[..400].to_vec(), r.sample_rate_hz()).unwrap();
    assert!(matches!(detect(&short, &cfg.signal, &DetectorSettings::default()), Err(Error::InvalidArgument(_))));
    let bad = DetectorSettings { p_fa: 0.0, ..DetectorSettings::default() };
    assert!(detect(&r, &cfg.signal, &bad).is_err());
}

#[test]
fn window_length_follows_record_length() {
    let (cfg, r) = record();
    let t = detect(&r, &cfg.signal, &DetectorSettings::default()).unwrap();
    assert_eq!(t.u_s, r.len());
    assert_eq!(t.u_sw % 2, 1);
    let explicit = detect(&r, &cfg.signal, &DetectorSettings { u_sw: Some(101), ..Default::default() }).unwrap();
    assert_eq!(explicit.u_sw, 101);
}
