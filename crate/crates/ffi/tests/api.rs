use std::ffi::CStr;
use std::ptr;

use loqc_qec_ffi::*;

fn last_error() -> String {
    let p = lq_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

struct Config(*mut LqConfig);

impl Config {
    fn new() -> Self {
        Config(lq_config_new())
    }
}

impl Drop for Config {
    fn drop(&mut self) {
        unsafe { lq_config_free(self.0) }
    }
}

fn run(cfg: &Config, sampled: bool) -> Result<*mut LqSweep, LqStatus> {
    let mut out = ptr::null_mut();
    let status = unsafe {
        if sampled {
            lq_run_sweep(cfg.0, &mut out)
        } else {
            lq_run_analytic(cfg.0, &mut out)
        }
    };
    if status == LqStatus::Ok {
        Ok(out)
    } else {
        assert!(out.is_null());
        Err(status)
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(lq_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn analytic_sweep_matches_the_library() {
    let cfg = Config::new();
    unsafe {
        assert_eq!(lq_config_set_overlap(cfg.0, 0.922), LqStatus::Ok);
        assert_eq!(lq_config_set_wiring(cfg.0, LqWiring::AdBc), LqStatus::Ok);
    }
    let sweep = run(&cfg, false).unwrap();
    let want = loqc_qec::experiment::run_analytic(&loqc_qec::experiment::ExperimentConfig {
        overlap_v: 0.922,
        ..Default::default()
    })
    .unwrap();
    unsafe {
        assert_eq!(lq_sweep_len(sweep), want.rows.len());
        for (i, w) in want.rows.iter().enumerate() {
            let mut row = LqRow::default();
            assert_eq!(lq_sweep_row(sweep, i, &mut row), LqStatus::Ok);
            assert_eq!(row.theta_deg, w.theta_deg);
            assert!((row.p_d1_d3 - w.p_d1_d3).abs() < 1e-12);
            assert!(!row.has_counts);
        }
        let mut s = LqSummary::default();
        assert_eq!(lq_sweep_summary(sweep, &mut s), LqStatus::Ok);
        assert!((s.d1_d3.fit.visibility - 0.922).abs() < 1e-9);
        assert!((s.success_probability - 0.5).abs() < 1e-12);
        assert!(s.d1_d3.counts_fit.visibility.is_nan());
        let mut row = LqRow::default();
        assert_eq!(lq_sweep_row(sweep, 19, &mut row), LqStatus::OutOfRange);
        assert!(last_error().contains("19"));
        lq_sweep_free(sweep);
    }
}

#[test]
fn sampled_sweep_is_seeded() {
    let cfg = Config::new();
    let thetas = [0.0, 30.0, 60.0, 90.0];
    unsafe {
        lq_config_set_thetas(cfg.0, thetas.as_ptr(), thetas.len());
        lq_config_set_seed(cfg.0, 5);
        lq_config_set_pair_rate(cfg.0, 100.0);
        lq_config_set_duration(cfg.0, 10.0);
    }
    let counts = |sweep: *mut LqSweep| -> Vec<u64> {
        (0..thetas.len())
            .map(|i| {
                let mut row = LqRow::default();
                unsafe { lq_sweep_row(sweep, i, &mut row) };
                assert!(row.has_counts);
                row.counts_d1_d2
            })
            .collect()
    };
    let a = run(&cfg, true).unwrap();
    let b = run(&cfg, true).unwrap();
    assert_eq!(counts(a), counts(b));
    unsafe {
        assert_eq!(lq_sweep_len(a), 4);
        lq_sweep_free(a);
        lq_sweep_free(b);
    }
}

#[test]
fn invalid_config_reports_validation() {
    let cfg = Config::new();
    unsafe {
        lq_config_set_overlap(cfg.0, 1.5);
        assert_eq!(lq_config_validate(cfg.0), LqStatus::Validation);
    }
    assert!(last_error().contains("overlap_v"));
    assert_eq!(run(&cfg, false), Err(LqStatus::Validation));
}

#[test]
fn null_handles_are_rejected() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(
            lq_run_analytic(ptr::null(), &mut out),
            LqStatus::NullPointer
        );
        assert!(last_error().contains("cfg"));
        assert_eq!(
            lq_config_set_seed(ptr::null_mut(), 1),
            LqStatus::NullPointer
        );
        assert_eq!(lq_sweep_len(ptr::null()), 0);
        lq_sweep_free(ptr::null_mut());
        lq_config_free(ptr::null_mut());
    }
}

#[test]
fn hom_scan_fills_buffer() {
    let sigma = 1e-13;
    let delays = [0.0, sigma * (2.0 * 2f64.ln()).sqrt(), 10.0 * sigma];
    let mut p = [f64::NAN; 3];
    unsafe {
        assert_eq!(
            lq_hom_scan(delays.as_ptr(), 3, sigma, p.as_mut_ptr()),
            LqStatus::Ok
        );
    }
    assert!(p[0] < 1e-12);
    assert!((p[1] - 0.375).abs() < 1e-12);
    assert!((p[2] - 0.5).abs() < 1e-6);
    unsafe {
        assert_eq!(
            lq_hom_scan(delays.as_ptr(), 3, 0.0, p.as_mut_ptr()),
            LqStatus::Validation
        );
    }
}

#[test]
fn fit_recovers_generator_and_reports_rank_deficiency() {
    let thetas: Vec<f64> = (-9..=9).map(|k| f64::from(k) * 10.0).collect();
    let values: Vec<f64> = thetas
        .iter()
        .map(|t| 50.0 + 46.1 * (2.0 * (t - 45.0)).to_radians().cos())
        .collect();
    let mut fit = LqFit::default();
    unsafe {
        assert_eq!(
            lq_fit_malus(thetas.as_ptr(), values.as_ptr(), thetas.len(), &mut fit),
            LqStatus::Ok
        );
    }
    assert!((fit.visibility - 0.922).abs() < 1e-12);
    assert!((fit.phase_deg - 45.0).abs() < 1e-9);
    let bad = [0.0, 90.0, 180.0];
    unsafe {
        assert_eq!(
            lq_fit_malus(bad.as_ptr(), values.as_ptr(), 3, &mut fit),
            LqStatus::Fit
        );
    }
}
