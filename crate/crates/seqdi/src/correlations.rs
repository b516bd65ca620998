//! Exact sequential correlation tables in two independent pictures.
//!
//! The POVM picture contracts |phi+><phi+| against Alice's projectors and
//! Bob's Kraus-sandwiched projectors; the dilation picture contracts the
//! 3-qubit pure state against commuting projective measurements. The two
//! must agree entrywise, which is the main cross-check of the toolkit.
//! Probabilities are always computed by contraction, never by sampling.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{expval, sigma_x, CMat};
use crate::protocol::{
    alice_observable, bob_observable, dilated_realization, kraus_pair, phi_plus, BobObservable,
    DilatedRealization, ProtocolParams,
};
use crate::tol::{CLAMP_TOL, TOL_TABLE};

pub const OUTCOMES: [i8; 2] = [1, -1];

/// sign index: +1 -> 0, -1 -> 1.
fn oi(o: i8) -> usize {
    if o == 1 {
        0
    } else {
        1
    }
}

fn idx_long(a: i8, b1: i8, b2: i8, x: u8, y2: u8) -> usize {
    ((((x as usize * 2 + y2 as usize) * 2 + oi(a)) * 2 + oi(b1)) * 2) + oi(b2)
}

fn idx_short(a: i8, b1: i8, x: u8) -> usize {
    (x as usize * 2 + oi(a)) * 2 + oi(b1)
}

/// Joint outcome probabilities of the sequential scenario.
///
/// `long` holds P(a, b1, b2 | x, y1 = 0, y2) over a, b1, b2 in {+1, -1} and
/// x, y2 in {0, 1} (32 entries); `short` holds P(a, b1 | x, y1 = 1)
/// (8 entries). The y1 = 1 branch ends the protocol, so no dummy b2 outcome
/// is stored for it.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTable {
    long: [f64; 32],
    short: [f64; 8],
}

impl CorrelationTable {
    pub(crate) fn from_parts(long: [f64; 32], short: [f64; 8]) -> Self {
        Self { long, short }
    }

    /// P(a, b1, b2 | x, y1 = 0, y2), clamped to [0, 1] on read.
    pub fn long(&self, a: i8, b1: i8, b2: i8, x: u8, y2: u8) -> f64 {
        self.long[idx_long(a, b1, b2, x, y2)].clamp(0.0, 1.0)
    }

    /// P(a, b1 | x, y1 = 1), clamped to [0, 1] on read.
    pub fn short(&self, a: i8, b1: i8, x: u8) -> f64 {
        self.short[idx_short(a, b1, x)].clamp(0.0, 1.0)
    }

    /// Largest violation over all table invariants: entry bounds,
    /// normalization of each conditional distribution, Alice-side
    /// no-signaling (marginal independent of y1 and y2), and Bob-side
    /// no-signaling (marginals independent of x).
    pub fn invariant_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;

        for &v in self.long.iter().chain(self.short.iter()) {
            worst = worst.max(-v).max(v - 1.0);
        }

        // Normalization per input block.
        for x in 0..2u8 {
            for y2 in 0..2u8 {
                let s: f64 = OUTCOMES
                    .iter()
                    .flat_map(|&a| {
                        OUTCOMES.iter().flat_map(move |&b1| {
                            OUTCOMES
                                .iter()
                                .map(move |&b2| self.long[idx_long(a, b1, b2, x, y2)])
                        })
                    })
                    .sum();
                worst = worst.max((s - 1.0).abs());
            }
            let s: f64 = OUTCOMES
                .iter()
                .flat_map(|&a| OUTCOMES.iter().map(move |&b1| self.short[idx_short(a, b1, x)]))
                .sum();
            worst = worst.max((s - 1.0).abs());
        }

        // Alice's marginal must not depend on any of Bob's inputs.
        for x in 0..2u8 {
            for &a in &OUTCOMES {
                let marg = |y2: u8| -> f64 {
                    OUTCOMES
                        .iter()
                        .flat_map(|&b1| {
                            OUTCOMES
                                .iter()
                                .map(move |&b2| self.long[idx_long(a, b1, b2, x, y2)])
                        })
                        .sum()
                };
                let short_marg: f64 = OUTCOMES
                    .iter()
                    .map(|&b1| self.short[idx_short(a, b1, x)])
                    .sum();
                worst = worst.max((marg(0) - marg(1)).abs());
                worst = worst.max((marg(0) - short_marg).abs());
            }
        }

        // Bob-side marginals must not depend on x.
        for y2 in 0..2u8 {
            for &b1 in &OUTCOMES {
                for &b2 in &OUTCOMES {
                    let marg = |x: u8| -> f64 {
                        OUTCOMES
                            .iter()
                            .map(|&a| self.long[idx_long(a, b1, b2, x, y2)])
                            .sum()
                    };
                    worst = worst.max((marg(0) - marg(1)).abs());
                }
            }
        }
        for &b1 in &OUTCOMES {
            let marg = |x: u8| -> f64 {
                OUTCOMES
                    .iter()
                    .map(|&a| self.short[idx_short(a, b1, x)])
                    .sum()
            };
            worst = worst.max((marg(0) - marg(1)).abs());
        }

        worst
    }

    /// Errors unless every invariant holds within the table tolerance.
    pub fn validate(&self) -> Result<()> {
        let v = self.invariant_violation();
        if v > TOL_TABLE {
            return Err(Error::InvalidInput(format!(
                "correlation table violates an invariant by {v:.3e}"
            )));
        }
        Ok(())
    }

    /// <A_x B0'> from the y = (0, 0) Alice-Bob2 branch (the self-tested
    /// surrogate of Bob's sigma_x correlator).
    pub fn alice_bob2_correlator(&self, x: u8) -> f64 {
        let mut acc = 0.0;
        for &a in &OUTCOMES {
            for &b1 in &OUTCOMES {
                for &b2 in &OUTCOMES {
                    acc += f64::from(a) * f64::from(b2) * self.long[idx_long(a, b1, b2, x, 0)];
                }
            }
        }
        acc
    }

    /// <A_x B1> from the short (y1 = 1) branch.
    pub fn short_branch_correlator(&self, x: u8) -> f64 {
        let mut acc = 0.0;
        for &a in &OUTCOMES {
            for &b1 in &OUTCOMES {
                acc += f64::from(a) * f64::from(b1) * self.short[idx_short(a, b1, x)];
            }
        }
        acc
    }

    /// Largest entrywise gap against another table (raw entries, unclamped).
    pub fn max_abs_diff(&self, other: &CorrelationTable) -> f64 {
        let long = self
            .long
            .iter()
            .zip(&other.long)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        let short = self
            .short
            .iter()
            .zip(&other.short)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        long.max(short)
    }
}

fn real_probability(value: Complex64) -> f64 {
    debug_assert!(value.im.abs() < CLAMP_TOL, "probability with imaginary part");
    value.re
}

/// Correlation table in the POVM picture: Tr[rho (M_a (x) K N K)] on
/// rho = |phi+><phi+|, with Hermitian Kraus operators K.
pub fn joint_povm(p: &ProtocolParams) -> Result<CorrelationTable> {
    let psi = phi_plus();
    let id2 = CMat::identity(2);
    let (kp, km) = kraus_pair(p.theta)?;
    let kraus = |b1: i8| if b1 == 1 { &kp } else { &km };

    let mut long = [0.0; 32];
    let mut short = [0.0; 8];
    for x in 0..2u8 {
        let a_obs = alice_observable(p, x);
        let b1_obs = bob_observable(p, BobObservable::B1);
        for &a in &OUTCOMES {
            let m = id2
                .add(&a_obs.scale_re(f64::from(a)))?
                .scale_re(0.5);
            for y2 in 0..2u8 {
                let n_obs = bob_observable(
                    p,
                    if y2 == 0 {
                        BobObservable::Bob2Y0
                    } else {
                        BobObservable::Bob2Y1
                    },
                );
                for &b1 in &OUTCOMES {
                    let k = kraus(b1);
                    for &b2 in &OUTCOMES {
                        let n = id2.add(&n_obs.scale_re(f64::from(b2)))?.scale_re(0.5);
                        let sandwich = k.adjoint().mul(&n)?.mul(k)?;
                        let op = m.kron(&sandwich);
                        long[idx_long(a, b1, b2, x, y2)] = real_probability(expval(&psi, &op)?);
                    }
                }
            }
            for &b1 in &OUTCOMES {
                let proj = id2.add(&b1_obs.scale_re(f64::from(b1)))?.scale_re(0.5);
                let op = m.kron(&proj);
                short[idx_short(a, b1, x)] = real_probability(expval(&psi, &op)?);
            }
        }
    }
    let table = CorrelationTable::from_parts(long, short);
    table.validate()?;
    Ok(table)
}

/// Correlation table computed from an explicit projective realization.
pub fn joint_dilated_from(r: &DilatedRealization) -> Result<CorrelationTable> {
    let id2 = CMat::identity(2);
    let id4 = CMat::identity(4);
    let proj_a = |obs: &CMat, o: i8| -> Result<CMat> {
        Ok(CMat::identity(2)
            .add(&obs.scale_re(f64::from(o)))?
            .scale_re(0.5)
            .kron(&id4))
    };
    let proj_b = |obs: &CMat, o: i8| -> Result<CMat> {
        Ok(id2.kron(&id4.add(&obs.scale_re(f64::from(o)))?.scale_re(0.5)))
    };

    let mut long = [0.0; 32];
    let mut short = [0.0; 8];
    for (x, a_obs) in [(0u8, &r.a0), (1u8, &r.a1)] {
        for &a in &OUTCOMES {
            let pa = proj_a(a_obs, a)?;
            for (y2, b2_obs) in [(0u8, &r.b00), (1u8, &r.b01)] {
                for &b1 in &OUTCOMES {
                    let p1 = proj_b(&r.b0, b1)?;
                    for &b2 in &OUTCOMES {
                        let p2 = proj_b(b2_obs, b2)?;
                        let op = pa.mul(&p1)?.mul(&p2)?;
                        long[idx_long(a, b1, b2, x, y2)] =
                            real_probability(expval(&r.psi, &op)?);
                    }
                }
            }
            for &b1 in &OUTCOMES {
                let op = pa.mul(&proj_b(&r.b1, b1)?)?;
                short[idx_short(a, b1, x)] = real_probability(expval(&r.psi, &op)?);
            }
        }
    }
    let table = CorrelationTable::from_parts(long, short);
    table.validate()?;
    Ok(table)
}

/// Correlation table in the projective-dilation picture.
pub fn joint_dilated(p: &ProtocolParams) -> Result<CorrelationTable> {
    joint_dilated_from(&dilated_realization(p)?)
}

/// Bob1's long-branch CPTP map applied to a 4x4 two-qubit density matrix:
/// sum over b1 of (1 (x) K_b1) rho (1 (x) K_b1)†.
///
/// The density check is necessary-condition based (Hermiticity, unit trace,
/// non-negative diagonal and 2x2 principal minors); it rejects malformed
/// inputs without a full eigendecomposition.
pub fn post_measurement_state(rho: &CMat, theta: f64) -> Result<CMat> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::NotDensityMatrix(format!(
            "expected 4x4, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    if !rho.is_hermitian(1e-10) {
        return Err(Error::NotDensityMatrix("not Hermitian".into()));
    }
    let tr = rho.trace()?;
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::NotDensityMatrix(format!("trace = {tr}")));
    }
    for i in 0..4 {
        if rho.get(i, i).re < -1e-10 {
            return Err(Error::NotDensityMatrix(format!(
                "negative diagonal entry at ({i}, {i})"
            )));
        }
        for j in (i + 1)..4 {
            let minor = rho.get(i, i).re * rho.get(j, j).re - rho.get(i, j).norm_sqr();
            if minor < -1e-10 {
                return Err(Error::NotDensityMatrix(format!(
                    "negative 2x2 principal minor at ({i}, {j})"
                )));
            }
        }
    }

    let (kp, km) = kraus_pair(theta)?;
    let id2 = CMat::identity(2);
    let mut out = CMat::zeros(4, 4);
    for k in [&kp, &km] {
        let lifted = id2.kron(k);
        out = out.add(&lifted.mul(rho)?.mul(&lifted.adjoint())?)?;
    }
    Ok(out)
}

/// Residual of the projector-invariance identity for the weak sigma_x
/// measurement: max over b2 of the entrywise norm of
/// sum_b1 K_b1 (1 + b2 sigma_x)/2 K_b1 - (1 + b2 sigma_x)/2.
pub fn kraus_invariance_residual(theta: f64) -> Result<f64> {
    kraus_invariance_residual_for(theta, &sigma_x())
}

/// Same residual against an arbitrary projector-defining observable. The
/// identity holds only for observables diagonal in the Kraus eigenbasis,
/// so sigma_z serves as a negative control.
pub fn kraus_invariance_residual_for(theta: f64, observable: &CMat) -> Result<f64> {
    let (kp, km) = kraus_pair(theta)?;
    let id2 = CMat::identity(2);
    let mut worst: f64 = 0.0;
    for &b2 in &OUTCOMES {
        let proj = id2.add(&observable.scale_re(f64::from(b2)))?.scale_re(0.5);
        let mut acc = CMat::zeros(2, 2);
        for k in [&kp, &km] {
            acc = acc.add(&k.mul(&proj)?.mul(k)?)?;
        }
        worst = worst.max(acc.sub(&proj)?.max_abs());
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Unit tests
// ---------------------------------------------------------------------------
