//! Protocol parameter space and the concrete operator sets.
//!
//! A protocol instance is fixed by five angles: Alice's two measurement
//! directions alpha0/alpha1, Bob1's short-branch direction beta1, the
//! weak-measurement strength theta in [0, pi/4], and Bob2's second
//! direction delta. Bob1's long-branch observable is sigma_x by convention
//! (beta0 = 0). The module builds both the 2-qubit POVM-picture objects and
//! the 3-qubit projective dilation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hadamard, sigma_x, sigma_z, CMat};
use crate::tol::{EPS_DEGENERATE, EPS_ENDPOINT, EPS_OMEGA};

/// The five protocol angles, all in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    pub alpha0: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub theta: f64,
    pub delta: f64,
}

impl ProtocolParams {
    /// Validates theta in [0, pi/4] and non-degenerate Alice angles
    /// (|sin(alpha1 - alpha0)| > 1e-9, needed to invert for X_A, Z_A).
    pub fn new(alpha0: f64, alpha1: f64, beta1: f64, theta: f64, delta: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_4).contains(&theta) {
            return Err(Error::ThetaOutOfRange(theta));
        }
        if (alpha1 - alpha0).sin().abs() <= EPS_DEGENERATE {
            return Err(Error::DegenerateAliceAngles { alpha0, alpha1 });
        }
        Ok(Self {
            alpha0,
            alpha1,
            beta1,
            theta,
            delta,
        })
    }

    /// Same angles with a different strength parameter.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.alpha0, self.alpha1, self.beta1, theta, self.delta)
    }

    /// Same angles with a different delta.
    pub fn with_delta(&self, delta: f64) -> Self {
        Self {
            delta,
            ..*self
        }
    }

    /// Alice's measurement angle for input x.
    pub fn alpha(&self, x: u8) -> f64 {
        if x == 0 {
            self.alpha0
        } else {
            self.alpha1
        }
    }

    /// Whether the extremality certificate applies at this point: theta
    /// strictly inside (0, pi/4) and delta not a multiple of pi.
    pub fn security_valid(&self) -> bool {
        self.theta > EPS_ENDPOINT
            && self.theta < FRAC_PI_4 - EPS_ENDPOINT
            && self.delta.sin().abs() > EPS_DEGENERATE
    }
}

/// Named protocol families with fixed angle expansions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// Sequential extension of the CHSH protocol:
    /// alpha0 = pi/4, alpha1 = 3pi/4, beta1 = pi/2, delta = pi/2.
    Chsh,
    /// Sequential extension of the optimal non-sequential strategy for
    /// omega in (0, pi/6]: alpha0 = pi/2, alpha1 = -omega,
    /// beta1 = omega + pi/2, delta = pi/2.
    Wooltorton { omega: f64 },
}

impl Preset {
    /// Wooltorton preset with validated omega. The upper bound carries
    /// a tiny slack so short decimal spellings of pi/6 stay accepted.
    pub fn wooltorton(omega: f64) -> Result<Self> {
        if omega <= 0.0 || omega > FRAC_PI_6 + EPS_OMEGA {
            return Err(Error::OmegaOutOfRange(omega));
        }
        Ok(Preset::Wooltorton { omega })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Chsh => "chsh",
            Preset::Wooltorton { .. } => "wooltorton",
        }
    }

    /// Expand to concrete parameters at the given strength.
    pub fn params(&self, theta: f64) -> Result<ProtocolParams> {
        match *self {
            Preset::Chsh => {
                ProtocolParams::new(FRAC_PI_4, 3.0 * FRAC_PI_4, FRAC_PI_2, theta, FRAC_PI_2)
            }
            Preset::Wooltorton { omega } => {
                if omega <= 0.0 || omega > FRAC_PI_6 + EPS_OMEGA {
                    return Err(Error::OmegaOutOfRange(omega));
                }
                ProtocolParams::new(FRAC_PI_2, -omega, omega + FRAC_PI_2, theta, FRAC_PI_2)
            }
        }
    }
}

/// rotated Pauli: cos(angle) sigma_x + sin(angle) sigma_z.
fn rotated_xz(angle: f64) -> CMat {
    sigma_x()
        .scale_re(angle.cos())
        .add(&sigma_z().scale_re(angle.sin()))
        .expect("fixed shape")
}

/// Alice's observable for input x: cos(alpha_x) sigma_x + sin(alpha_x) sigma_z.
pub fn alice_observable(p: &ProtocolParams, x: u8) -> CMat {
    rotated_xz(p.alpha(x))
}

/// Which Bob observable to build in the POVM picture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BobObservable {
    /// Bob1's long-branch observable, fixed to sigma_x (beta0 = 0).
    B0Prime,
    /// Bob1's short-branch observable, cos(beta1) sigma_x + sin(beta1) sigma_z.
    B1,
    /// Bob2's observable for y2 = 0: sigma_x.
    Bob2Y0,
    /// Bob2's observable for y2 = 1: cos(delta) sigma_x + sin(delta) sigma_z.
    Bob2Y1,
}

/// Bob-side 2x2 observables of the POVM picture.
pub fn bob_observable(p: &ProtocolParams, which: BobObservable) -> CMat {
    match which {
        BobObservable::B0Prime | BobObservable::Bob2Y0 => sigma_x(),
        BobObservable::B1 => rotated_xz(p.beta1),
        BobObservable::Bob2Y1 => rotated_xz(p.delta),
    }
}

/// Kraus pair of the strength-theta weak measurement of sigma_x:
/// K+ = cos(theta)(1 + sigma_x)/2 + sin(theta)(1 - sigma_x)/2 and K- with
/// cos/sin swapped. Both Hermitian; complete: K+†K+ + K-†K- = 1.
pub fn kraus_pair(theta: f64) -> Result<(CMat, CMat)> {
    if !(0.0..=FRAC_PI_4).contains(&theta) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    let id = CMat::identity(2);
    let proj_p = id.add(&sigma_x()).expect("fixed shape").scale_re(0.5);
    let proj_m = id.sub(&sigma_x()).expect("fixed shape").scale_re(0.5);
    let kp = proj_p
        .scale_re(theta.cos())
        .add(&proj_m.scale_re(theta.sin()))
        .expect("fixed shape");
    let km = proj_p
        .scale_re(theta.sin())
        .add(&proj_m.scale_re(theta.cos()))
        .expect("fixed shape");
    Ok((kp, km))
}

/// Maximally entangled pair (|00> + |11>)/sqrt(2) as a 4-dim column vector.
pub fn phi_plus() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::col_vector(&[
        Complex64::new(s, 0.0),
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::new(s, 0.0),
    ])
}

fn ket_plus() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::col_vector(&[Complex64::new(s, 0.0), Complex64::new(s, 0.0)])
}

fn ket_minus() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::col_vector(&[Complex64::new(s, 0.0), Complex64::new(-s, 0.0)])
}

/// The 3-qubit projective realization equivalent to the POVM picture.
///
/// `psi` lives on Alice (x) Bob (x) ancilla; the Alice observables stay 2x2
/// and the Bob observables act on the 4-dimensional Bob (x) ancilla factor.
#[derive(Debug, Clone)]
pub struct DilatedRealization {
    /// |phi+> (x) (cos(theta)|+> + sin(theta)|->), an 8-dim unit vector.
    pub psi: CMat,
    pub a0: CMat,
    pub a1: CMat,
    /// Bob1 long branch: sigma_x (x) sigma_x.
    pub b0: CMat,
    /// Bob1 short branch: (cos(beta1) sigma_x + sin(beta1) sigma_z) (x) 1.
    pub b1: CMat,
    /// Bob2, y2 = 0: sigma_x (x) 1.
    pub b00: CMat,
    /// Bob2, y2 = 1: cos(delta) sigma_x (x) 1 + sin(delta) sigma_z (x) sigma_z.
    pub b01: CMat,
    /// The |+>/|-> controlled-Z coupling Bob's qubit to the ancilla;
    /// satisfies B0 = U† (1 (x) sigma_x) U.
    pub u: CMat,
}

/// Build the projective dilation of Appendix-style form for the given
/// parameters.
pub fn dilated_realization(p: &ProtocolParams) -> Result<DilatedRealization> {
    if !(0.0..=FRAC_PI_4).contains(&p.theta) {
        return Err(Error::ThetaOutOfRange(p.theta));
    }
    let ancilla = ket_plus()
        .scale_re(p.theta.cos())
        .add(&ket_minus().scale_re(p.theta.sin()))
        .expect("fixed shape");
    let psi = phi_plus().kron(&ancilla);

    let id2 = CMat::identity(2);
    let b0 = sigma_x().kron(&sigma_x());
    let b1 = rotated_xz(p.beta1).kron(&id2);
    let b00 = sigma_x().kron(&id2);
    let b01 = sigma_x()
        .kron(&id2)
        .scale_re(p.delta.cos())
        .add(&sigma_z().kron(&sigma_z()).scale_re(p.delta.sin()))
        .expect("fixed shape");

    let plus = ket_plus();
    let minus = ket_minus();
    let u = plus
        .mul(&plus.adjoint())
        .expect("fixed shape")
        .kron(&id2)
        .add(
            &minus
                .mul(&minus.adjoint())
                .expect("fixed shape")
                .kron(&sigma_z()),
        )
        .expect("fixed shape");

    Ok(DilatedRealization {
        psi,
        a0: alice_observable(p, 0),
        a1: alice_observable(p, 1),
        b0,
        b1,
        b00,
        b01,
        u,
    })
}

impl DilatedRealization {
    /// A_x as an 8x8 operator on the full space.
    pub fn alice_full(&self, x: u8) -> CMat {
        let a = if x == 0 { &self.a0 } else { &self.a1 };
        a.kron(&CMat::identity(4))
    }

    /// A Bob-side (4x4) operator lifted to the full space.
    pub fn bob_full(&self, op: &CMat) -> CMat {
        CMat::identity(2).kron(op)
    }

    /// Local-unitary frame change on Bob's side: conjugates every Bob
    /// operator by H (x) H and co-rotates the state. Correlations are
    /// invariant under this hook, which is exactly the content of the
    /// CHSH-preset Hadamard convention.
    pub fn hadamard_transformed(&self) -> DilatedRealization {
        let hh = hadamard().kron(&hadamard());
        let tf = |m: &CMat| hh.mul(m).expect("fixed shape").mul(&hh).expect("fixed shape");
        DilatedRealization {
            psi: CMat::identity(2)
                .kron(&hh)
                .mul(&self.psi)
                .expect("fixed shape"),
            a0: self.a0.clone(),
            a1: self.a1.clone(),
            b0: tf(&self.b0),
            b1: tf(&self.b1),
            b00: tf(&self.b00),
            b01: tf(&self.b01),
            u: tf(&self.u),
        }
    }
}

// ---------------------------------------------------------------------------
// Unit tests
// ---------------------------------------------------------------------------
