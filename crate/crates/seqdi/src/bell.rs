//! Bell operator, saturation identities, and Bell-value functionals.
//!
//! The central object is an 8x8 operator S built from the swapped Alice
//! observables X_A, Z_A and weighted Bob2 observables. The design identity
//! is S psi = 0 for every measurement strength, including both endpoints;
//! everything downstream (ledger uniqueness, entropy certification) rides
//! on that saturation.

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::protocol::{dilated_realization, ProtocolParams};
use crate::tol::EPS_DEGENERATE;

/// Weights of the Bob2 observables inside the Bell operator, derived from
/// the strength theta and the second-measurement angle delta.
///
/// With D = 1 - cos^2(delta) cos^2(2 theta):
///   c1 =  cos(delta) sin^2(2 theta) / D
///   c2 =  cos(2 theta) sin^2(delta) / D
///   c3 =  sin(delta) sin(2 theta) / D
///   c4 = -sin(delta) cos(delta) cos(2 theta) sin(2 theta) / D
/// They satisfy c1^2 + c2^2 + c3^2 + c4^2 = 1 and c1 c2 + c3 c4 = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

pub fn coefficients(theta: f64, delta: f64) -> Result<Coefficients> {
    let (s2t, c2t) = (2.0 * theta).sin_cos();
    let (sd, cd) = delta.sin_cos();
    let d = 1.0 - cd * cd * c2t * c2t;
    if d.abs() <= 1e-12 {
        return Err(Error::DegenerateCoefficients { theta, delta });
    }
    Ok(Coefficients {
        c1: cd * s2t * s2t / d,
        c2: c2t * sd * sd / d,
        c3: sd * s2t / d,
        c4: -sd * cd * c2t * s2t / d,
    })
}

/// Swapped Alice observables: the unique linear combinations of A_0, A_1
/// that reproduce the ideal sigma_x, sigma_z pair,
///   X_A = ( sin(alpha1) A_0 - sin(alpha0) A_1) / sin(alpha1 - alpha0)
///   Z_A = (-cos(alpha1) A_0 + cos(alpha0) A_1) / sin(alpha1 - alpha0).
/// Returned lifted to the 8-dimensional dilation (Alice factor only).
pub fn xa_za(p: &ProtocolParams) -> Result<(CMat, CMat)> {
    let det = (p.alpha1 - p.alpha0).sin();
    if det.abs() <= EPS_DEGENERATE {
        return Err(Error::DegenerateAliceAngles {
            alpha0: p.alpha0,
            alpha1: p.alpha1,
        });
    }
    let r = dilated_realization(p)?;
    let (a0, a1) = (r.alice_full(0), r.alice_full(1));
    let x_a = a0
        .scale_re(p.alpha1.sin() / det)
        .add(&a1.scale_re(-p.alpha0.sin() / det))?;
    let z_a = a0
        .scale_re(-p.alpha1.cos() / det)
        .add(&a1.scale_re(p.alpha0.cos() / det))?;
    Ok((x_a, z_a))
}

/// Bell operator with explicit coefficients (the mismatched-coefficient
/// negative control needs this split).
pub fn bell_operator_with(p: &ProtocolParams, c: &Coefficients) -> Result<CMat> {
    let r = dilated_realization(p)?;
    let (x_a, z_a) = xa_za(p)?;
    let (b0, b01) = (r.bob_full(&r.b0), r.bob_full(&r.b01));
    let wx = b01.scale_re(c.c1).add(&b0.scale_re(c.c2))?;
    let wz = b01.scale_re(c.c3).add(&b0.scale_re(c.c4))?;
    let s = CMat::identity(8)
        .sub(&x_a.mul(&wx)?)?
        .sub(&z_a.mul(&wz)?)?
        .scale_re(0.5);
    Ok(s)
}

/// S = (1/2) [1 - X_A (c1 B01 + c2 B0) - Z_A (c3 B01 + c4 B0)].
pub fn bell_operator(p: &ProtocolParams) -> Result<CMat> {
    bell_operator_with(p, &coefficients(p.theta, p.delta)?)
}

/// || S psi ||; zero exactly when the protocol state saturates the design
/// identity.
pub fn saturation_residual(p: &ProtocolParams) -> Result<f64> {
    let r = dilated_realization(p)?;
    Ok(bell_operator(p)?.mul(&r.psi)?.norm())
}

/// || psi - X_A (c1 B01 + c2 B0) psi - Z_A (c3 B01 + c4 B0) psi || for an
/// arbitrary 8-component state: the saturation identity rearranged as a
/// boundary condition. Equals 2 || S state ||.
pub fn boundary_residual_for_state(p: &ProtocolParams, state: &CMat) -> Result<f64> {
    if !state.is_col_vector() || state.rows() != 8 {
        return Err(Error::InvalidInput(format!(
            "boundary residual expects an 8-component column state, got {}x{}",
            state.rows(),
            state.cols()
        )));
    }
    Ok(bell_operator(p)?.mul(state)?.scale_re(2.0).norm())
}

/// Boundary residual evaluated on the protocol state itself.
pub fn boundary_residual(p: &ProtocolParams) -> Result<f64> {
    let r = dilated_realization(p)?;
    boundary_residual_for_state(p, &r.psi)
}

// ---------------------------------------------------------------------------
// Bell-value functionals on correlation tables
// ---------------------------------------------------------------------------

use crate::correlations::CorrelationTable;

/// Tilted functional
///   I_omega = <A0 B0'> + (<A0 B1> + <A1 B0'>)/sin(omega)
///             - <A1 B1>/cos(2 omega),
/// with <A_x B0'> read from the y = (0, 0) Alice-Bob2 branch and <A_x B1>
/// from the short branch. Defined for omega in (0, pi/6].
pub fn i_omega(table: &CorrelationTable, omega: f64) -> Result<f64> {
    check_omega(omega)?;
    let ab0 = |x: u8| table.alice_bob2_correlator(x);
    let ab1 = |x: u8| table.short_branch_correlator(x);
    Ok(ab0(0) + (ab1(0) + ab0(1)) / omega.sin() - ab1(1) / (2.0 * omega).cos())
}

/// Quantum maximum of I_omega: 2 cos^3(omega) / (cos(2 omega) sin(omega)).
pub fn tsirelson_bound_omega(omega: f64) -> Result<f64> {
    check_omega(omega)?;
    let c = omega.cos();
    Ok(2.0 * c * c * c / ((2.0 * omega).cos() * omega.sin()))
}

fn check_omega(omega: f64) -> Result<()> {
    if omega <= 0.0 || omega > std::f64::consts::FRAC_PI_6 + crate::tol::EPS_OMEGA {
        return Err(Error::OmegaOutOfRange(omega));
    }
    Ok(())
}

/// Best-sign CHSH value over the same four correlators: the maximum of
/// |s1 E00 + s2 E01 + s3 E10 - s1 s2 s3 E11| over signs s in {+-1}^3.
pub fn chsh_best_sign_value(table: &CorrelationTable) -> f64 {
    let e00 = table.alice_bob2_correlator(0);
    let e01 = table.short_branch_correlator(0);
    let e10 = table.alice_bob2_correlator(1);
    let e11 = table.short_branch_correlator(1);
    let mut best: f64 = 0.0;
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            for s3 in [1.0f64, -1.0] {
                let v = (s1 * e00 + s2 * e01 + s3 * e10 - s1 * s2 * s3 * e11).abs();
                best = best.max(v);
            }
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Unit tests
// ---------------------------------------------------------------------------
