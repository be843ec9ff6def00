//! Every cargo example runs and produces sensible numbers.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }
    };
}

example!(absorption_spectrum);
example!(bleaching_curve);
example!(uniform_pump_profile);
example!(transmittance_curves);
example!(copropagating_pump);
example!(slow_light);
example!(noise_filtering);
example!(filter_design);

#[test]
fn absorption_spectrum_peak() {
    let (num, closed) = absorption_spectrum::run_example().unwrap();
    assert!((num - closed).abs() <= 0.01);
}

#[test]
fn bleaching_curve_slopes() {
    let (lin, quad) = bleaching_curve::run_example().unwrap();
    assert!((lin + 1.0).abs() < 0.1 && (quad + 2.0).abs() < 0.1);
}

#[test]
fn uniform_pump_profile_runs() {
    let t = uniform_pump_profile::run_example().unwrap();
    assert!(t.iter().all(|&v| v > 0.0 && v <= 1.0));
}

#[test]
fn transmittance_curves_agree() {
    assert!(transmittance_curves::run_example().unwrap() < 1e-6);
}

#[test]
fn copropagating_pump_ordering() {
    let pairs = copropagating_pump::run_example().unwrap();
    assert!(pairs[0].0 < pairs[0].1);
    assert!(pairs[4].0 > pairs[4].1);
}

#[test]
fn slow_light_matches_at_equal_drives() {
    let (vs, vp) = slow_light::run_example().unwrap();
    assert!((vs / vp - 1.0).abs() < 1e-3);
}

#[test]
fn noise_filtering_prefers_main_lobe() {
    let (lobe, top) = noise_filtering::run_example().unwrap();
    assert!(top < lobe);
}

#[test]
fn filter_design_length() {
    let l = filter_design::run_example().unwrap();
    assert!((l - 0.019).abs() < 0.001);
}
