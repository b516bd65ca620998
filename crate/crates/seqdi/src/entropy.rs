//! Randomness figures of merit for the certified long-branch outputs.
//!
//! The triple (a, b1, b2) conditioned on x = x*, y = (0, 1) has joint
//! probabilities f/8 for a trigonometric f in the protocol angles. Both
//! entropies are computed from f directly and, independently, from the
//! correlation table; the two must agree to high precision.

use serde::Serialize;

use crate::correlations::{CorrelationTable, OUTCOMES};
use crate::protocol::{Preset, ProtocolParams};
use crate::tol::EPS_ENDPOINT;

/// Min- and von Neumann entropy (bits) of the certified output triple.
///
/// Values are always computed; `security_valid` carries the
/// interpretation burden of whether the certificate applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyReport {
    pub x_star: u8,
    pub theta: f64,
    pub delta: f64,
    pub h_min: f64,
    pub h_vn: f64,
    pub security_valid: bool,
}

/// Unnormalized outcome weight:
///   f = 1 + b1 b2 cos(delta) cos(2 theta)
///       + a cos(alpha) (b1 cos(2 theta) + b2 cos(delta))
///       + a b2 sin(alpha) sin(2 theta) sin(delta).
/// P(a, b1, b2 | x*, y = (0, 1)) = f / 8, so f is nonnegative.
pub fn f_value(a: i8, b1: i8, b2: i8, alpha_x: f64, theta: f64, delta: f64) -> f64 {
    let (fa, f1, f2) = (f64::from(a), f64::from(b1), f64::from(b2));
    let (s2t, c2t) = (2.0 * theta).sin_cos();
    let (sd, cd) = delta.sin_cos();
    let (sa, ca) = alpha_x.sin_cos();
    1.0 + f1 * f2 * cd * c2t + fa * ca * (f1 * c2t + f2 * cd) + fa * f2 * sa * s2t * sd
}

fn p_log2_p(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// Entropies from the f-formula:
///   h_min = 3 - log2(max f),  h_vn = 3 - (1/8) sum f log2 f,
/// with the 0 log 0 = 0 convention.
pub fn entropies(p: &ProtocolParams, x_star: u8) -> EntropyReport {
    let alpha = p.alpha(x_star);
    let mut max_f: f64 = 0.0;
    let mut sum_f_log_f = 0.0;
    for &a in &OUTCOMES {
        for &b1 in &OUTCOMES {
            for &b2 in &OUTCOMES {
                let f = f_value(a, b1, b2, alpha, p.theta, p.delta);
                max_f = max_f.max(f);
                sum_f_log_f += p_log2_p(f);
            }
        }
    }
    EntropyReport {
        x_star,
        theta: p.theta,
        delta: p.delta,
        h_min: 3.0 - max_f.log2(),
        h_vn: 3.0 - sum_f_log_f / 8.0,
        security_valid: p.security_valid(),
    }
}

/// Entropies read off the correlation table:
///   h_min = -log2 max P(a, b1, b2 | x*, y = (0, 1)),
///   h_vn  = Shannon entropy of that 8-outcome distribution.
/// Must agree with [`entropies`] since P = f / 8.
pub fn entropies_from_table(
    table: &CorrelationTable,
    p: &ProtocolParams,
    x_star: u8,
) -> EntropyReport {
    let mut max_p: f64 = 0.0;
    let mut shannon = 0.0;
    for &a in &OUTCOMES {
        for &b1 in &OUTCOMES {
            for &b2 in &OUTCOMES {
                let prob = table.long(a, b1, b2, x_star, 1);
                max_p = max_p.max(prob);
                shannon -= p_log2_p(prob);
            }
        }
    }
    EntropyReport {
        x_star,
        theta: p.theta,
        delta: p.delta,
        h_min: -max_p.log2(),
        h_vn: shannon,
        security_valid: p.security_valid(),
    }
}

const INVPHI: f64 = 0.618_033_988_749_894_9;

/// Second-measurement angle maximizing h_vn over delta in (0, pi):
/// 721-point grid scan, then golden-section refinement of the winning
/// bracket to 1e-9 width. Ties break toward the smaller delta, so the
/// result is deterministic.
pub fn optimize_delta(p: &ProtocolParams, x_star: u8) -> f64 {
    let g = |delta: f64| entropies(&p.with_delta(delta), x_star).h_vn;
    let step = std::f64::consts::PI / 722.0;
    let mut best_k = 1;
    let mut best_v = g(step);
    for k in 2..=721 {
        let v = g(k as f64 * step);
        if v > best_v {
            best_v = v;
            best_k = k;
        }
    }

    let mut lo = (best_k - 1) as f64 * step;
    let mut hi = (best_k + 1) as f64 * step;
    while hi - lo > 1e-9 {
        let c = hi - INVPHI * (hi - lo);
        let d = lo + INVPHI * (hi - lo);
        if g(c) >= g(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    (lo + hi) / 2.0
}

/// Informational note for strength endpoints of the chsh preset, where
/// the certificate does not apply. The quoted figures are reference
/// values for this configuration, reported verbatim, never computed.
pub fn endpoint_annotation(preset: &Preset, theta: f64) -> Option<&'static str> {
    match preset {
        Preset::Chsh
            if theta.abs() < EPS_ENDPOINT
                || (theta - std::f64::consts::FRAC_PI_4).abs() < EPS_ENDPOINT =>
        {
            Some(
                "endpoint reference values (quoted, not computed): \
                 min-entropy approx. 1.2284 bits, von Neumann entropy approx. 1.6009 bits",
            )
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Unit tests
// ---------------------------------------------------------------------------
