//! Security ledger: 20 expectation values that pin down the long branch.
//!
//! The same ledger is computed two independent ways, once from closed
//! forms that use only the boundary condition and commutation algebra,
//! and once by direct Born-rule evaluation on the dilated realization.
//! Their agreement is the uniqueness check; their entries reconstruct
//! every long-branch probability by an affine combination.

use crate::bell::{coefficients, xa_za};
use crate::correlations::{CorrelationTable, OUTCOMES};
use crate::error::{Error, Result};
use crate::linalg::{expval, CMat};
use crate::protocol::{dilated_realization, ProtocolParams};
use crate::tol::TOL_LEDGER;

/// Operator labels, in the canonical ledger order.
pub const LEDGER_LABELS: [&str; 20] = [
    "Z_A",
    "X_A",
    "B1",
    "B00",
    "Z_A B1",
    "X_A B1",
    "Z_A B00",
    "X_A B00",
    "B0",
    "B01",
    "B0 B00",
    "B0 B01",
    "Z_A B0",
    "X_A B0",
    "Z_A B01",
    "X_A B01",
    "Z_A B0 B00",
    "Z_A B0 B01",
    "X_A B0 B00",
    "X_A B0 B01",
];

/// Real expectation values keyed by [`LEDGER_LABELS`].
#[derive(Debug, Clone, PartialEq)]
pub struct SecurityLedger {
    values: [f64; 20],
}

impl SecurityLedger {
    pub fn values(&self) -> &[f64; 20] {
        &self.values
    }

    /// Value under a canonical label; None for unknown labels.
    pub fn get(&self, label: &str) -> Option<f64> {
        LEDGER_LABELS
            .iter()
            .position(|&l| l == label)
            .map(|i| self.values[i])
    }

    /// (label, value) pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        LEDGER_LABELS.iter().copied().zip(self.values.iter().copied())
    }

    /// Largest entrywise gap against another ledger.
    pub fn max_abs_diff(&self, other: &SecurityLedger) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max)
    }
}

/// Ledger from the closed forms implied by the boundary condition.
///
/// Requires the interior domain where the derivation's divisions are
/// legitimate: c3 != 0 and c2 c3 - c1 c4 != 0, which fail exactly at
/// delta = 0 or theta in {0, pi/4}.
pub fn ledger_closed_form(p: &ProtocolParams) -> Result<SecurityLedger> {
    let c = coefficients(p.theta, p.delta)?;
    if c.c3.abs() < 1e-12 {
        return Err(Error::LedgerDomain(format!(
            "c3 = {:.3e} vanishes (delta = {}, theta = {})",
            c.c3, p.delta, p.theta
        )));
    }
    if (c.c2 * c.c3 - c.c1 * c.c4).abs() < 1e-12 {
        return Err(Error::LedgerDomain(format!(
            "c2 c3 - c1 c4 = {:.3e} vanishes (delta = {}, theta = {})",
            c.c2 * c.c3 - c.c1 * c.c4,
            p.delta,
            p.theta
        )));
    }

    // <B0 B01> follows first; the B0-column entries are linear in it.
    let b0b01 = -c.c4 / c.c3;
    let values = [
        0.0,                    // Z_A
        0.0,                    // X_A
        0.0,                    // B1
        0.0,                    // B00
        p.beta1.sin(),          // Z_A B1
        p.beta1.cos(),          // X_A B1
        0.0,                    // Z_A B00
        1.0,                    // X_A B00
        0.0,                    // B0
        0.0,                    // B01
        c.c2 + c.c1 * b0b01,    // B0 B00
        b0b01,                  // B0 B01
        c.c4 + c.c3 * b0b01,    // Z_A B0 (cancels identically)
        c.c2 + c.c1 * b0b01,    // X_A B0
        c.c3 + c.c4 * b0b01,    // Z_A B01
        c.c1 + c.c2 * b0b01,    // X_A B01
        0.0,                    // Z_A B0 B00
        0.0,                    // Z_A B0 B01
        0.0,                    // X_A B0 B00
        0.0,                    // X_A B0 B01
    ];
    Ok(SecurityLedger { values })
}

/// Ledger by direct Born-rule evaluation <psi| O |psi> on the dilated
/// realization. Valid on the whole parameter domain.
pub fn ledger_born(p: &ProtocolParams) -> Result<SecurityLedger> {
    let r = dilated_realization(p)?;
    let (x_a, z_a) = xa_za(p)?;
    let b0 = r.bob_full(&r.b0);
    let b1 = r.bob_full(&r.b1);
    let b00 = r.bob_full(&r.b00);
    let b01 = r.bob_full(&r.b01);
    let b0b00 = b0.mul(&b00)?;
    let b0b01 = b0.mul(&b01)?;
    let ident = CMat::identity(8);
    let entries: [(usize, &CMat, &CMat); 20] = [
        (0, &z_a, &ident),
        (1, &x_a, &ident),
        (2, &ident, &b1),
        (3, &ident, &b00),
        (4, &z_a, &b1),
        (5, &x_a, &b1),
        (6, &z_a, &b00),
        (7, &x_a, &b00),
        (8, &ident, &b0),
        (9, &ident, &b01),
        (10, &ident, &b0b00),
        (11, &ident, &b0b01),
        (12, &z_a, &b0),
        (13, &x_a, &b0),
        (14, &z_a, &b01),
        (15, &x_a, &b01),
        (16, &z_a, &b0b00),
        (17, &z_a, &b0b01),
        (18, &x_a, &b0b00),
        (19, &x_a, &b0b01),
    ];

    let mut values = [0.0; 20];
    for (i, left, right) in entries {
        let v = expval(&r.psi, &left.mul(right)?)?;
        if v.im.abs() >= 1e-12 {
            return Err(Error::InvalidInput(format!(
                "ledger entry {} has imaginary part {:.3e}",
                LEDGER_LABELS[i], v.im
            )));
        }
        values[i] = v.re;
    }
    Ok(SecurityLedger { values })
}

/// Outcome of comparing the two ledgers entrywise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniquenessReport {
    pub max_abs_gap: f64,
    pub pass: bool,
}

/// Closed-form vs Born-rule ledger agreement on all 20 entries.
pub fn uniqueness_check(p: &ProtocolParams) -> Result<UniquenessReport> {
    let closed = ledger_closed_form(p)?;
    let born = ledger_born(p)?;
    let max_abs_gap = closed.max_abs_diff(&born);
    Ok(UniquenessReport {
        max_abs_gap,
        pass: max_abs_gap < TOL_LEDGER,
    })
}

/// Rebuilds the full correlation table from ledger values alone. Every
/// probability is an affine combination of the 20 entries:
///   P(a, b1, b2 | x, 0, y2) = (1/8) [1 + a<A_x> + b1<B0> + b2<B0y2>
///     + a b1 <A_x B0> + a b2 <A_x B0y2> + b1 b2 <B0 B0y2>
///     + a b1 b2 <A_x B0 B0y2>]
/// with <A_x .> = cos(alpha_x) <X_A .> + sin(alpha_x) <Z_A .>, and the
/// short branch from the B1 column.
pub fn reconstructed_table(
    p: &ProtocolParams,
    ledger: &SecurityLedger,
) -> Result<CorrelationTable> {
    let v = &ledger.values;
    // (z_index, x_index) pairs resolve <A_x O> for O in the four columns
    // used by the long branch: identity, B0, B0y2, B0 B0y2.
    let a_of = |x: u8, zi: usize, xi: usize| -> f64 {
        let alpha = p.alpha(x);
        alpha.cos() * v[xi] + alpha.sin() * v[zi]
    };

    let mut long = [0.0; 32];
    let mut short = [0.0; 8];
    let mut li = 0;
    let mut si = 0;
    for x in 0..2u8 {
        for y2 in 0..2u8 {
            let (b2_m, ab2, b1b2, ab1b2) = if y2 == 0 {
                (v[3], a_of(x, 6, 7), v[10], a_of(x, 16, 18))
            } else {
                (v[9], a_of(x, 14, 15), v[11], a_of(x, 17, 19))
            };
            for &a in &OUTCOMES {
                for &b1 in &OUTCOMES {
                    for &b2 in &OUTCOMES {
                        let (fa, f1, f2) = (f64::from(a), f64::from(b1), f64::from(b2));
                        long[li] = (1.0
                            + fa * a_of(x, 0, 1)
                            + f1 * v[8]
                            + f2 * b2_m
                            + fa * f1 * a_of(x, 12, 13)
                            + fa * f2 * ab2
                            + f1 * f2 * b1b2
                            + fa * f1 * f2 * ab1b2)
                            / 8.0;
                        li += 1;
                    }
                }
            }
        }
        for &a in &OUTCOMES {
            for &b1 in &OUTCOMES {
                let (fa, f1) = (f64::from(a), f64::from(b1));
                short[si] =
                    (1.0 + fa * a_of(x, 0, 1) + f1 * v[2] + fa * f1 * a_of(x, 4, 5)) / 4.0;
                si += 1;
            }
        }
    }
    Ok(CorrelationTable::from_parts(long, short))
}

// ---------------------------------------------------------------------------
// Unit tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::joint_dilated;
    use crate::protocol::Preset;
    use std::f64::consts::{FRAC_PI_6, FRAC_PI_8};

    fn chsh(theta: f64) -> ProtocolParams {
        Preset::Chsh.params(theta).unwrap()
    }

    #[test]
    fn labels_are_distinct_and_addressable() {
        for (i, a) in LEDGER_LABELS.iter().enumerate() {
            for b in &LEDGER_LABELS[i + 1..] {
                assert_ne!(a, b);
            }
        }
        let l = ledger_closed_form(&chsh(FRAC_PI_8)).unwrap();
        for (label, value) in l.iter() {
            assert_eq!(l.get(label), Some(value));
        }
        assert_eq!(l.get("nope"), None);
    }

    #[test]
    fn closed_form_at_right_angle_delta() {
        // c = (0, sqrt(2)/2, sqrt(2)/2, 0) at theta = pi/8, delta = pi/2.
        let l = ledger_closed_form(&chsh(FRAC_PI_8)).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(l.get("B0 B01").unwrap().abs() < 1e-12);
        assert!((l.get("Z_A B01").unwrap() - s).abs() < 1e-12);
        assert!((l.get("X_A B0").unwrap() - s).abs() < 1e-12);
    }

    #[test]
    fn closed_form_fixed_entries() {
        for theta in [0.1, FRAC_PI_8, 0.6] {
            for delta in [0.4, 1.2, 2.8] {
                let p = chsh(theta).with_delta(delta);
                let l = ledger_closed_form(&p).unwrap();
                // c4 + c3 (-c4/c3) cancels algebraically; floats leave dust.
                assert!(l.get("Z_A B0").unwrap().abs() < 1e-15);
                assert_eq!(l.get("B0"), Some(0.0));
                assert_eq!(l.get("X_A B00"), Some(1.0));
                assert!((l.get("Z_A B1").unwrap() - p.beta1.sin()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn closed_form_rejects_the_excluded_domain() {
        // theta at an endpoint.
        assert!(matches!(
            ledger_closed_form(&chsh(1e-13)),
            Err(Error::LedgerDomain(_))
        ));
        assert!(matches!(
            ledger_closed_form(&chsh(std::f64::consts::FRAC_PI_4)),
            Err(Error::LedgerDomain(_))
        ));
        // delta = 0 kills c3.
        assert!(matches!(
            ledger_closed_form(&chsh(FRAC_PI_8).with_delta(0.0)),
            Err(Error::LedgerDomain(_))
        ));
    }

    #[test]
    fn born_matches_pauli_algebra() {
        let p = chsh(FRAC_PI_8);
        let l = ledger_born(&p).unwrap();
        assert!((l.get("X_A B00").unwrap() - 1.0).abs() < 1e-12);
        assert!((l.get("Z_A B1").unwrap() - p.beta1.sin()).abs() < 1e-12);
        assert!((l.get("X_A B1").unwrap() - p.beta1.cos()).abs() < 1e-12);
    }

    #[test]
    fn uniqueness_passes_on_both_presets() {
        let r = uniqueness_check(&chsh(FRAC_PI_8)).unwrap();
        assert!(r.pass, "gap {}", r.max_abs_gap);
        let p = Preset::wooltorton(FRAC_PI_6).unwrap().params(0.3).unwrap();
        let r = uniqueness_check(&p).unwrap();
        assert!(r.pass, "gap {}", r.max_abs_gap);
    }

    #[test]
    fn uniqueness_propagates_the_domain_error() {
        assert!(matches!(
            uniqueness_check(&chsh(1e-13)),
            Err(Error::LedgerDomain(_))
        ));
    }

    #[test]
    fn cross_products_are_purely_imaginary() {
        // <X_A Z_A B> has vanishing real part on the realization for
        // B in {B0, B01, B0 B00}.
        let p = chsh(0.3);
        let r = dilated_realization(&p).unwrap();
        let (x_a, z_a) = xa_za(&p).unwrap();
        let b0 = r.bob_full(&r.b0);
        let b01 = r.bob_full(&r.b01);
        let b0b00 = b0.mul(&r.bob_full(&r.b00)).unwrap();
        for b in [&b0, &b01, &b0b00] {
            let op = x_a.mul(&z_a).unwrap().mul(b).unwrap();
            let v = expval(&r.psi, &op).unwrap();
            assert!(v.re.abs() < 1e-12, "Re = {}", v.re);
        }
    }

    #[test]
    fn reconstruction_closes_on_both_presets() {
        for p in [
            chsh(FRAC_PI_8),
            Preset::wooltorton(FRAC_PI_6).unwrap().params(0.3).unwrap(),
        ] {
            let table = joint_dilated(&p).unwrap();
            for ledger in [ledger_born(&p).unwrap(), ledger_closed_form(&p).unwrap()] {
                let rebuilt = reconstructed_table(&p, &ledger).unwrap();
                let gap = rebuilt.max_abs_diff(&table);
                assert!(gap < TOL_LEDGER, "gap {gap}");
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn uniqueness_and_reconstruction_hold_interiorly(
                theta in 0.05..0.73f64,
                delta in 0.1..3.0f64,
                beta1 in 0.0..3.1f64,
            ) {
                let p = ProtocolParams::new(
                    std::f64::consts::FRAC_PI_4,
                    3.0 * std::f64::consts::FRAC_PI_4,
                    beta1,
                    theta,
                    delta,
                ).unwrap();
                let r = uniqueness_check(&p).unwrap();
                prop_assert!(r.pass, "gap {}", r.max_abs_gap);
                let rebuilt = reconstructed_table(&p, &ledger_born(&p).unwrap()).unwrap();
                let gap = rebuilt.max_abs_diff(&joint_dilated(&p).unwrap());
                prop_assert!(gap < TOL_LEDGER, "gap {gap}");
            }
        }
    }
}
