use piezoloc_core::signal_chain::{CircuitConfig, Scanner};
use proptest::prelude::*;

/// Resistance change represented by one ADC step at `rs`.
fn lsb_ohms(cfg: &CircuitConfig, r1: f64, rs: f64) -> f64 {
    let lsb_v1 = cfg.vcc / f64::from((1u32 << cfg.adc_bits) - 1) / cfg.gain;
    lsb_v1 * rs * rs / (cfg.vcc * r1)
}

proptest! {
    #[test]
    fn noise_free_round_trip(r0 in 10e3..100e3f64, delta in -0.012..0.012f64) {
        let cfg = CircuitConfig::default();
        let circuit = cfg.resolve(&[r0]).unwrap();
        let baselines = circuit.capture_baseline(&[r0]).unwrap();
        let mut scanner = Scanner::new(circuit, baselines, 0.0, 0).unwrap();
        let rs = r0 * (1.0 + delta);
        let rest = circuit.counts_to_features(&scanner.scan(&[r0]).unwrap()).unwrap()[0];
        let loaded = circuit.counts_to_features(&scanner.scan(&[rs]).unwrap()).unwrap()[0];
        prop_assert!(!rest.saturated && !loaded.saturated);
        let bound = 0.5 * (lsb_ohms(&cfg, circuit.r1, r0) + lsb_ohms(&cfg, circuit.r1, rs.max(r0))) * 1.001;
        let err = (loaded.dr - rest.dr) - (rs - r0);
        prop_assert!(err.abs() <= bound, "err {err} bound {bound}");
    }

    #[test]
    fn counts_are_monotone_and_bounded(r0 in 10e3..100e3f64, a in -0.5..0.5f64, b in -0.5..0.5f64) {
        let circuit = CircuitConfig::default().resolve(&[r0]).unwrap();
        let code = circuit.capture_baseline(&[r0]).unwrap()[0];
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let c_lo = circuit.pair_count(r0 * (1.0 + lo), code, 0.0).unwrap();
        let c_hi = circuit.pair_count(r0 * (1.0 + hi), code, 0.0).unwrap();
        prop_assert!(c_lo <= c_hi);
        prop_assert!(c_hi <= circuit.adc_full_scale());
        let f = circuit.count_to_feature(c_hi, code);
        prop_assert_eq!(f.saturated, c_hi == 0 || c_hi == circuit.adc_full_scale());
    }
}
