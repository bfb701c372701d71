use coxnet_core::simulate::default_window;
use coxnet_core::{estimate_pc, estimate_pc_thresholds, success_probability, PcModel, QuadratureSpec, RawParams};

fn params(mu_l: f64, lambda_v: f64, p: f64, sigma2: f64) -> coxnet_core::NetworkParams {
    RawParams {
        mu_l,
        lambda_v,
        p,
        sigma2,
        ..RawParams::default()
    }
    .validate()
    .unwrap()
}

#[test]
fn estimates_bracket_the_analytic_value() {
    let spec = QuadratureSpec::default();
    let cases = [
        params(2.0, 20.0, 1.0, 0.0),
        params(10.0, 20.0, 0.5, 0.0),
        params(10.0, 5.0, 1.0, 0.0),
        // Noise comparable to the received power at unit fading.
        params(5.0, 20.0, 1.0, 5e7),
    ];
    for (i, params) in cases.iter().enumerate() {
        let exact = success_probability(params, PcModel::Cox, &spec).unwrap();
        let est = estimate_pc(params, default_window(params), 6000, 100 + i as u64).unwrap();
        assert!(
            est.contains(exact),
            "case {i}: {exact} not in [{}, {}]",
            est.ci_low,
            est.ci_high
        );
    }
}

#[test]
fn cox_sits_between_its_limits_in_simulation() {
    let spec = QuadratureSpec::default();
    let params = params(10.0, 20.0, 1.0, 0.0);
    let betas = [0.1, 1.0, 10.0];
    let estimates = estimate_pc_thresholds(&params, &betas, 2.0, 6000, 5).unwrap();
    let mut previous = 1.0;
    for est in &estimates {
        let one = success_probability(&est.params, PcModel::Limit1D, &spec).unwrap();
        assert!(
            est.ci_low <= one,
            "beta {}: simulation exceeds the 1D limit",
            est.params.beta()
        );
        assert!(est.pc_hat <= previous);
        previous = est.pc_hat;
    }
}
