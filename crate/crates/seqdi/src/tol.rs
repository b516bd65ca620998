//! Numeric tolerances used across the toolkit.
//!
//! Every quantity here is the product of at most ~6 bounded matrices in
//! dimension <= 8, so double precision leaves orders of magnitude of slack
//! below each threshold. The constants are grouped by the kind of claim
//! they guard rather than by module.

/// Hermiticity, unitarity, and state-normalization assertions.
pub const TOL_UNITARY: f64 = 1e-12;

/// Kraus completeness and the projector-invariance identity.
pub const TOL_KRAUS: f64 = 1e-14;

/// Correlation-table invariants (normalization, no-signaling) and the
/// entrywise agreement of the POVM and dilation pictures.
pub const TOL_TABLE: f64 = 1e-12;

/// Bell-operator saturation ||S psi|| on the ideal realization.
pub const TOL_SATURATION: f64 = 1e-10;

/// Closed-form vs Born-rule security-ledger agreement, and the
/// reconstruction of the correlation table from ledger values.
pub const TOL_LEDGER: f64 = 1e-10;

/// Exact algebraic identities: coefficient relations, S†S = S on the state,
/// boundary-condition residuals.
pub const TOL_IDENTITY: f64 = 1e-12;

/// Bell values with closed-form targets (2*sqrt(2), the I_omega bound).
pub const TOL_BELL: f64 = 1e-9;

/// Formula-based vs table-based entropy agreement.
pub const TOL_ENTROPY: f64 = 1e-10;

/// Endpoint exclusion for the security-validity flag: the extremality
/// argument holds for theta strictly inside (0, pi/4).
pub const EPS_ENDPOINT: f64 = 1e-12;

/// Degeneracy floor for angle differences that must be inverted
/// (|sin(alpha1 - alpha0)|) or kept away from zero (|sin(delta)|).
pub const EPS_DEGENERATE: f64 = 1e-9;

/// Slack on the omega upper bound pi/6, so that rounded decimal
/// spellings of pi/6 (0.5236, 0.5235987756, ...) stay accepted even when
/// they land a hair above the exact value.
pub const EPS_OMEGA: f64 = 1e-4;

/// Probabilities are clamped to [0, 1] on read when within this slack.
pub const CLAMP_TOL: f64 = 1e-12;
