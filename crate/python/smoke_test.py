#!/usr/bin/env python3
"""Smoke test for the seqdi_py extension module.

Build the module first:

    cargo build -p seqdi-py --release

then run this script with any Python 3.9+ interpreter.
"""

import math
import shutil
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
ROOT = HERE.parent


def load_module():
    """Copy the built cdylib next to this script under the importable name."""
    candidates = [
        ROOT / "target" / "release" / "libseqdi_py.so",
        ROOT / "target" / "debug" / "libseqdi_py.so",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("libseqdi_py.so not found; run `cargo build -p seqdi-py --release` first")
    target = HERE / "seqdi_py.so"
    if not target.exists() or built.stat().st_mtime > target.stat().st_mtime:
        shutil.copy2(built, target)
    sys.path.insert(0, str(HERE))
    import seqdi_py

    return seqdi_py


def approx(a, b, tol=1e-9):
    assert abs(a - b) < tol, f"{a} != {b} (tol {tol})"


def main():
    m = load_module()

    # CHSH point at theta = pi/8: two certified bits of min-entropy.
    p = m.ProtocolParams.chsh(math.pi / 8)
    assert p.security_valid()
    rep = m.entropies(p, 0)
    approx(rep.h_min, 2.0)
    approx(rep.h_vn, 2.5, 1e-12)

    # Both correlation pictures agree and reproduce the entropy report.
    povm = m.CorrelationTable.povm(p)
    dilated = m.CorrelationTable.dilated(p)
    assert povm.max_abs_diff(dilated) < 1e-12
    rep2 = m.entropies_from_table(povm, p, 0)
    approx(rep2.h_min, rep.h_min, 1e-10)

    # Boundary saturation and ledger uniqueness at the same point.
    assert m.saturation_residual(p) < 1e-12
    assert m.boundary_residual(p) < 1e-12
    assert m.uniqueness_gap(p) < 1e-10
    closed = m.SecurityLedger.closed_form(p)
    born = m.SecurityLedger.born(p)
    assert closed.max_abs_diff(born) < 1e-10
    assert len(m.SecurityLedger.labels()) == 20
    approx(closed.get("X_A B1"), math.cos(math.pi / 2), 1e-12)

    # Coefficient identities.
    c1, c2, c3, c4 = m.coefficients(math.pi / 8, math.pi / 2)
    approx(c1 * c1 + c2 * c2 + c3 * c3 + c4 * c4, 1.0, 1e-12)
    approx(c1 * c2 + c3 * c4, 0.0, 1e-12)

    # Bell values: CHSH reaches 2 sqrt(2); the tilted family saturates its bound.
    approx(m.chsh_best_sign_value(p), 2.0 * math.sqrt(2.0))
    w = m.ProtocolParams.wooltorton(math.pi / 6, 0.3)
    approx(m.i_omega(w, math.pi / 6), 3.0 * math.sqrt(3.0))
    approx(m.tsirelson_bound_omega(math.pi / 6), 3.0 * math.sqrt(3.0))

    # With alpha_{x*} = pi/2 the entropy is symmetric about pi/2 and the
    # optimizer lands exactly there at moderate strength.
    approx(m.optimize_delta(m.ProtocolParams.wooltorton(math.pi / 6, math.pi / 16), 0), math.pi / 2, 1e-6)

    # Full verification suite: nothing fails.
    results = m.verify(w)
    assert len(results) == 16
    assert all(status != "fail" for _, status, _ in results)

    # Invalid parameters surface as ValueError.
    try:
        m.ProtocolParams(0.0, 0.0, 1.0, 0.3, 1.0)
    except ValueError as e:
        assert "degenerate" in str(e)
    else:
        raise AssertionError("degenerate angles must raise")

    print("smoke test passed")


if __name__ == "__main__":
    main()
