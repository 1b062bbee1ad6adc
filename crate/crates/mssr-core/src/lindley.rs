//! Taylor-approximated Bayes estimates of the system reliability under
//! squared-error and LINEX losses, with independent gamma priors on the
//! shapes (and on the scale when it is unknown).
//!
//! The posterior expectation of a smooth `w(a1, a2, theta)` is expanded to
//! second order around the MLE; everything reduces to the log-likelihood
//! derivative tensor, the prior log-gradient and the derivative bundle of
//! `w`. The reliability does not depend on the scale, so all `theta`
//! derivatives of `w` vanish and only the likelihood couples the scale in.

use crate::classical::{self, MleFit};
use crate::error::{Error, Result};
use crate::math;
use crate::pareto::RecordSample;
use crate::reliability::{self, SystemSpec, WBundle};

/// Independent gamma priors: shape/rate pairs for the strength shape, the
/// stress shape and the common scale. The scale pair is ignored in
/// known-scale estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorConfig {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub a3: f64,
    pub b3: f64,
}

impl PriorConfig {
    pub fn new(a: [f64; 3], b: [f64; 3]) -> Result<Self> {
        for (&v, name) in a
            .iter()
            .zip(["a1", "a2", "a3"])
            .chain(b.iter().zip(["b1", "b2", "b3"]))
        {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "gamma hyperparameters must be positive",
                });
            }
        }
        Ok(Self {
            a1: a[0],
            b1: b[0],
            a2: a[1],
            b2: b[1],
            a3: a[2],
            b3: b[2],
        })
    }
}

/// Loss function selecting the Bayes estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Loss {
    /// Squared-error loss; the Bayes estimate is the posterior mean.
    Sel,
    /// LINEX loss with asymmetry `c != 0`; the Bayes estimate is
    /// `-(1/c) ln E[exp(-c R)]`.
    Linex(f64),
}

/// Whether the common scale is treated as known or estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaMode {
    Known,
    Unknown,
}

/// Log-likelihood curvature at the MLE: the inverse negative Hessian and
/// the non-zero third derivatives.
///
/// In known-scale mode the scale row/column is identically zero and the
/// matrix is diagonal (the two shapes are information-orthogonal).
#[derive(Debug, Clone, Copy)]
pub struct LindleyTerms {
    pub sigma: [[f64; 3]; 3],
    pub l111: f64,
    pub l222: f64,
    pub l133: f64,
    pub l233: f64,
    pub l333: f64,
    pub mode: ThetaMode,
}

/// Second- and third-order log-likelihood derivatives at the fit.
///
/// All values follow mechanically from the record log-likelihood:
/// `L11 = -n/a1^2`, `L22 = -m/a2^2`, `L12 = 0`, `L13 = L23 = 1/theta`,
/// `L33 = -(a1+a2)/theta^2`, `L111 = 2n/a1^3`, `L222 = 2m/a2^3`,
/// `L133 = L233 = -1/theta^2`, `L333 = 2(a1+a2)/theta^3`. The whole set is
/// pinned against finite differences by the test suite.
pub fn loglik_derivatives(fit: &MleFit, mode: ThetaMode) -> Result<LindleyTerms> {
    let a1 = fit.alpha1_hat;
    let a2 = fit.alpha2_hat;
    let n = fit.n as f64;
    let m = fit.m as f64;
    match mode {
        ThetaMode::Known => {
            let mut sigma = [[0.0; 3]; 3];
            sigma[0][0] = a1 * a1 / n;
            sigma[1][1] = a2 * a2 / m;
            Ok(LindleyTerms {
                sigma,
                l111: 2.0 * n / (a1 * a1 * a1),
                l222: 2.0 * m / (a2 * a2 * a2),
                l133: 0.0,
                l233: 0.0,
                l333: 0.0,
                mode,
            })
        }
        ThetaMode::Unknown => {
            let theta = fit.theta_hat.ok_or(Error::InvalidParameter {
                name: "theta_hat",
                value: f64::NAN,
                reason: "unknown-scale expansion needs the estimated scale",
            })?;
            let neg_l = [
                [n / (a1 * a1), 0.0, -1.0 / theta],
                [0.0, m / (a2 * a2), -1.0 / theta],
                [-1.0 / theta, -1.0 / theta, (a1 + a2) / (theta * theta)],
            ];
            let sigma = math::invert3(&neg_l)?;
            Ok(LindleyTerms {
                sigma,
                l111: 2.0 * n / (a1 * a1 * a1),
                l222: 2.0 * m / (a2 * a2 * a2),
                l133: -1.0 / (theta * theta),
                l233: -1.0 / (theta * theta),
                l333: 2.0 * (a1 + a2) / (theta * theta * theta),
                mode,
            })
        }
    }
}

/// Gradient of the log-prior: `rho_j = (a_j - 1)/lambda_j - b_j` per
/// coordinate. The scale coordinate is zeroed in known-scale mode.
pub fn prior_log_gradient(params: &[f64; 3], prior: &PriorConfig, mode: ThetaMode) -> [f64; 3] {
    let rho3 = match mode {
        ThetaMode::Known => 0.0,
        ThetaMode::Unknown => (prior.a3 - 1.0) / params[2] - prior.b3,
    };
    [
        (prior.a1 - 1.0) / params[0] - prior.b1,
        (prior.a2 - 1.0) / params[1] - prior.b2,
        rho3,
    ]
}

/// The second-order posterior-expectation expansion evaluated at the MLE.
fn assemble(terms: &LindleyTerms, rho: &[f64; 3], wb: &WBundle) -> f64 {
    let s = &terms.sigma;
    let mut d = [0.0; 3];
    for i in 0..3 {
        d[i] = rho[0] * s[i][0] + rho[1] * s[i][1] + rho[2] * s[i][2];
    }
    // w is scale-free: w3 = w13 = w23 = w33 = 0.
    let d4 = wb.w12 * s[0][1];
    let d5 = 0.5 * (wb.w11 * s[0][0] + wb.w22 * s[1][1]);
    let a = terms.l111 * s[0][0] + terms.l133 * s[2][2];
    let b = terms.l222 * s[1][1] + terms.l233 * s[2][2];
    let c = 2.0 * terms.l133 * s[0][2] + 2.0 * terms.l233 * s[1][2] + terms.l333 * s[2][2];
    wb.w
        + wb.w1 * d[0]
        + wb.w2 * d[1]
        + d4
        + d5
        + 0.5
            * (a * (wb.w1 * s[0][0] + wb.w2 * s[0][1])
                + b * (wb.w1 * s[1][0] + wb.w2 * s[1][1])
                + c * (wb.w1 * s[2][0] + wb.w2 * s[2][1]))
}

fn estimate(fit: &MleFit, terms: &LindleyTerms, rho: &[f64; 3], spec: &SystemSpec, loss: Loss) -> Result<f64> {
    match loss {
        Loss::Sel => {
            let wb = reliability::sel_w_bundle(fit.alpha1_hat, fit.alpha2_hat, spec)?;
            Ok(assemble(terms, rho, &wb))
        }
        Loss::Linex(c) => {
            let wb = reliability::linex_w_bundle(fit.alpha1_hat, fit.alpha2_hat, spec, c)?;
            let expectation = assemble(terms, rho, &wb);
            if expectation <= 0.0 {
                return Err(Error::ApproximationBreakdown { value: expectation });
            }
            Ok(-math::ln(expectation) / c)
        }
    }
}

/// Bayes estimate with all three parameters unknown; the expansion is
/// evaluated at the full MLE vector, including the boundary estimate of
/// the scale (a documented caveat of the method: the scale MLE sits on
/// the edge of the support, where a Taylor expansion is heuristic).
pub fn lindley_estimate_3param(
    rec_r: &RecordSample,
    rec_s: &RecordSample,
    prior: &PriorConfig,
    spec: &SystemSpec,
    loss: Loss,
) -> Result<f64> {
    let fit = classical::mle_unknown_theta(rec_r, rec_s);
    let terms = loglik_derivatives(&fit, ThetaMode::Unknown)?;
    let params = [
        fit.alpha1_hat,
        fit.alpha2_hat,
        fit.theta_hat.expect("unknown-theta fit"),
    ];
    let rho = prior_log_gradient(&params, prior, ThetaMode::Unknown);
    estimate(&fit, &terms, &rho, spec, loss)
}

/// Bayes estimate with the scale known; the expansion runs over the two
/// shapes only and the curvature matrix is diagonal.
pub fn lindley_estimate_2param(
    rec_r: &RecordSample,
    rec_s: &RecordSample,
    theta: f64,
    prior: &PriorConfig,
    spec: &SystemSpec,
    loss: Loss,
) -> Result<f64> {
    let fit = classical::mle_known_theta(rec_r, rec_s, theta)?;
    let terms = loglik_derivatives(&fit, ThetaMode::Known)?;
    let params = [fit.alpha1_hat, fit.alpha2_hat, theta];
    let rho = prior_log_gradient(&params, prior, ThetaMode::Known);
    estimate(&fit, &terms, &rho, spec, loss)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn real_data() -> (RecordSample, RecordSample) {
        (
            RecordSample::new(alloc::vec![0.40, 82.85, 89.29, 215.10]).unwrap(),
            RecordSample::new(alloc::vec![0.47, 0.73, 1.40, 2.38]).unwrap(),
        )
    }

    fn prior333() -> PriorConfig {
        PriorConfig::new([3.0, 3.0, 3.0], [1.5, 1.5, 1.5]).unwrap()
    }

    #[test]
    fn prior_validation() {
        assert!(PriorConfig::new([0.0, 1.0, 1.0], [1.0, 1.0, 1.0]).is_err());
        assert!(PriorConfig::new([1.0, 1.0, 1.0], [1.0, -1.0, 1.0]).is_err());
    }

    #[test]
    fn known_theta_sigma_is_diagonal_inverse() {
        let fit = MleFit {
            alpha1_hat: 2.0,
            alpha2_hat: 1.0,
            theta_hat: None,
            n: 8,
            m: 5,
        };
        let t = loglik_derivatives(&fit, ThetaMode::Known).unwrap();
        assert_abs_diff_eq!(t.sigma[0][0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(t.sigma[1][1], 0.2, epsilon = 1e-14);
        assert_eq!(t.sigma[0][1], 0.0);
        assert_eq!(t.sigma[2][2], 0.0);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn unknown_theta_sigma_inverts_information() {
        let (rec_r, rec_s) = real_data();
        let fit = classical::mle_unknown_theta(&rec_r, &rec_s);
        let t = loglik_derivatives(&fit, ThetaMode::Unknown).unwrap();
        let (a1, a2, th) = (fit.alpha1_hat, fit.alpha2_hat, fit.theta_hat.unwrap());
        let neg_l = [
            [fit.n as f64 / (a1 * a1), 0.0, -1.0 / th],
            [0.0, fit.m as f64 / (a2 * a2), -1.0 / th],
            [-1.0 / th, -1.0 / th, (a1 + a2) / (th * th)],
        ];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += t.sigma[i][k] * neg_l[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(acc, expect, epsilon = 1e-10);
            }
        }
        // Symmetry of the inverse.
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(t.sigma[i][j], t.sigma[j][i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn prior_gradient_values() {
        let prior = PriorConfig::new([1.0, 2.0, 2.0], [0.7, 1.5, 1.5]).unwrap();
        let rho = prior_log_gradient(&[2.0, 1.0, 1.0], &prior, ThetaMode::Unknown);
        assert_abs_diff_eq!(rho[0], -0.7, epsilon = 1e-14);
        assert_abs_diff_eq!(rho[1], -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rho[2], -0.5, epsilon = 1e-14);
        let prior222 = PriorConfig::new([2.0, 2.0, 2.0], [1.5, 1.5, 1.5]).unwrap();
        let rho = prior_log_gradient(&[1.0, 1.0, 1.0], &prior222, ThetaMode::Unknown);
        for v in rho {
            assert_abs_diff_eq!(v, -0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn constant_w_is_reproduced_exactly() {
        let (rec_r, rec_s) = real_data();
        let fit = classical::mle_unknown_theta(&rec_r, &rec_s);
        let terms = loglik_derivatives(&fit, ThetaMode::Unknown).unwrap();
        let rho = prior_log_gradient(&[1.0, 1.0, 1.0], &prior333(), ThetaMode::Unknown);
        let constant = WBundle {
            w: 0.42,
            w1: 0.0,
            w2: 0.0,
            w11: 0.0,
            w12: 0.0,
            w22: 0.0,
        };
        assert_abs_diff_eq!(assemble(&terms, &rho, &constant), 0.42, epsilon = 1e-15);
    }

    #[test]
    fn three_param_estimates_on_breakdown_records() {
        let (rec_r, rec_s) = real_data();
        let spec = SystemSpec::new(2, 4).unwrap();
        let sel =
            lindley_estimate_3param(&rec_r, &rec_s, &prior333(), &spec, Loss::Sel).unwrap();
        // Cross-implementation anchor (numpy prototype of the same formula).
        assert_abs_diff_eq!(sel, 0.8633, epsilon = 5e-4);
        let linex =
            lindley_estimate_3param(&rec_r, &rec_s, &prior333(), &spec, Loss::Linex(1.0)).unwrap();
        assert!(linex < sel, "positive-c LINEX must sit below SEL");
        let linex_neg =
            lindley_estimate_3param(&rec_r, &rec_s, &prior333(), &spec, Loss::Linex(-1.0))
                .unwrap();
        assert!(linex_neg > sel);
    }

    #[test]
    fn linex_breakdown_is_reported() {
        let (rec_r, rec_s) = real_data();
        let spec = SystemSpec::new(2, 4).unwrap();
        let mut c = 8.0;
        let mut saw_breakdown = false;
        while c <= 4096.0 {
            match lindley_estimate_3param(&rec_r, &rec_s, &prior333(), &spec, Loss::Linex(c)) {
                Err(Error::ApproximationBreakdown { .. }) => {
                    saw_breakdown = true;
                    break;
                }
                Ok(_) => c *= 2.0,
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(saw_breakdown, "expected a breakdown for extreme asymmetry");
    }

    #[test]
    fn two_param_matches_direct_formula() {
        let (rec_r, rec_s) = real_data();
        let spec = SystemSpec::new(2, 5).unwrap();
        let prior = PriorConfig::new([2.0, 2.0, 1.0], [3.0, 3.0, 1.0]).unwrap();
        let theta = 0.4;
        let got = lindley_estimate_2param(&rec_r, &rec_s, theta, &prior, &spec, Loss::Sel).unwrap();

        // Hand assembly of the diagonal two-parameter reduction.
        let fit = classical::mle_known_theta(&rec_r, &rec_s, theta).unwrap();
        let (a1, a2) = (fit.alpha1_hat, fit.alpha2_hat);
        let (s11, s22) = (a1 * a1 / 4.0, a2 * a2 / 4.0);
        let wb = reliability::sel_w_bundle(a1, a2, &spec).unwrap();
        let (r1, r2) = ((2.0 - 1.0) / a1 - 3.0, (2.0 - 1.0) / a2 - 3.0);
        let q1 = 2.0 * 4.0 / (a1 * a1 * a1) * s11;
        let q2 = 2.0 * 4.0 / (a2 * a2 * a2) * s22;
        let expect = wb.w
            + wb.w1 * r1 * s11
            + wb.w2 * r2 * s22
            + 0.5 * (wb.w11 * s11 + wb.w22 * s22)
            + 0.5 * (q1 * wb.w1 * s11 + q2 * wb.w2 * s22);
        assert_abs_diff_eq!(got, expect, epsilon = 1e-12);
    }

    #[test]
    fn linex_requires_nonzero_c() {
        let (rec_r, rec_s) = real_data();
        let spec = SystemSpec::new(2, 4).unwrap();
        assert!(matches!(
            lindley_estimate_3param(&rec_r, &rec_s, &prior333(), &spec, Loss::Linex(0.0)),
            Err(Error::InvalidParameter { name: "c", .. })
        ));
    }
}
