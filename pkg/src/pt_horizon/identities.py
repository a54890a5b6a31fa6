"""Algebraic identity suite with a machine-readable report.

Polynomial identities are proved by exact integer evaluation on grids with
more points per axis than the degree (at most 4), which pins the polynomials
uniquely; numerical consistency checks run on seeded random points.  The
reduced-coupling bound check deliberately evaluates both candidate prefactor
normalizations (1/2 and 1/4) against the sign of the quartic and flags the
one that fails, so the report always carries exactly one annotated mismatch.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import model, oracle

DEFAULT_SEED = 314159

INT_GRID = range(-3, 4)  # 7 points per axis > degree 4


@dataclass
class IdentityResult:
    name: str
    status: str                      # Proved | Holds | Fails
    witness: Optional[tuple] = None  # first counterexample, if any
    detail: str = ""
    reference: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "witness": list(self.witness) if self.witness is not None else None,
            "detail": self.detail,
            "paper_ref": self.reference,
        }


def verify_w_forms() -> IdentityResult:
    """Compact vs expanded quartic discriminant, exact on the integer grid."""
    for a in INT_GRID:
        for b in INT_GRID:
            for c in INT_GRID:
                if model.eval_w(a, b, c) != model.eval_w_expanded(a, b, c):
                    return IdentityResult(
                        name="w_forms", status="Fails", witness=(a, b, c),
                        detail="compact and expanded quartic disagree",
                        reference="compact vs expanded quartic discriminant")
    return IdentityResult(
        name="w_forms", status="Proved", witness=None,
        detail=f"exact equality on {len(INT_GRID) ** 3} integer points "
               "(7 per axis > degree 4)",
        reference="compact vs expanded quartic discriminant")


def verify_wpq_relation() -> IdentityResult:
    """W = P^2 - 4 Q, exact on the integer grid."""
    for a in INT_GRID:
        for b in INT_GRID:
            for c in INT_GRID:
                W = model.eval_w(a, b, c)
                Q = model.eval_q(a, b, c)
                P = model.eval_p(a, b, c)
                if W != P * P - 4 * Q:
                    return IdentityResult(
                        name="wpq_relation", status="Fails", witness=(a, b, c),
                        detail="W != P^2 - 4Q",
                        reference="discriminant identity of the reduced quadratic")
    return IdentityResult(
        name="wpq_relation", status="Proved", witness=None,
        detail=f"exact equality on {len(INT_GRID) ** 3} integer points; "
               "derived relation (discriminant of the reduced quadratic), "
               "not one of the stated closed forms",
        reference="discriminant identity of the reduced quadratic")


def verify_factor_b1() -> IdentityResult:
    """Factorization of the quartic on the b = 1 plane, exact integer grid."""
    grid = range(0, 6)
    for a in grid:
        for c in grid:
            if model.eval_w(a, 1, c) != model.w_b1_factored(a, c):
                return IdentityResult(
                    name="b1_factorization", status="Fails", witness=(a, 1, c),
                    detail="factorized form disagrees with compact form",
                    reference="factorization of the quartic on the b=1 plane")
    return IdentityResult(
        name="b1_factorization", status="Proved", witness=None,
        detail=f"exact equality on {len(grid) ** 2} integer points "
               "(6 per axis > degree 4)",
        reference="factorization of the quartic on the b=1 plane")


def verify_b0_square() -> IdentityResult:
    """On b = 0 the quartic is a perfect square, hence nonnegative."""
    for a in INT_GRID:
        for c in INT_GRID:
            lhs = model.eval_w(a, 0, c)
            s = model.w_b0_square_root_term(a, c)
            if lhs != s * s or lhs < 0:
                return IdentityResult(
                    name="b0_square", status="Fails", witness=(a, 0, c),
                    detail="W(a,0,c) is not the expected square",
                    reference="perfect-square form of the quartic at b=0")
    return IdentityResult(
        name="b0_square", status="Proved", witness=None,
        detail=f"exact equality with (8+c^2-a^2)^2 on {len(INT_GRID) ** 2} "
               "integer points; nonnegativity follows",
        reference="perfect-square form of the quartic at b=0")


def verify_c0_forms() -> IdentityResult:
    """Reduced c = 0 forms, plus the bound-prefactor cross-check.

    The specialized W, Q, P are proved exact on the integer grid; then both
    candidate prefactors of the |b| bound are compared with the sign of W on
    a float grid, and the failing printed normalization is flagged.
    """
    for a in INT_GRID:
        for b in INT_GRID:
            ok = (model.eval_w(a, b, 0) == model.w_c0(a, b)
                  and model.eval_q(a, b, 0) == model.q_c0(a, b)
                  and model.eval_p(a, b, 0) == model.p_c0(a, b))
            if not ok:
                return IdentityResult(
                    name="c0_reduction", status="Fails", witness=(a, b, 0),
                    detail="reduced c=0 forms disagree with the general forms",
                    reference="reduced closed forms on the c=0 plane")
    n = 200
    a = np.linspace(-3.9 + 1e-9, 3.9 - 1e-9, n)[:, None]
    b = np.linspace(-2.3, 2.3, n)[None, :]
    w = model.eval_w(a, b, 0.0)
    bound = np.abs(8 - a * a) / (2 * np.sqrt(16 - a * a))
    inside = np.abs(w) > 1e-9  # skip exact boundary hits
    half_ok = ((np.abs(b) < bound) == (w > 0)) | ~inside
    quarter_ok = ((np.abs(b) < bound / 2) == (w > 0)) | ~inside
    n_half_bad = int((~half_ok).sum())
    n_quarter_bad = int((~quarter_ok).sum())
    if n_half_bad:
        ii, jj = np.nonzero(~half_ok)
        return IdentityResult(
            name="c0_reduction", status="Fails",
            witness=(float(a[ii[0], 0]), float(b[0, jj[0]]), 0.0),
            detail="the 1/2-prefactor bound disagrees with sign(W)",
            reference="reduced closed forms on the c=0 plane")
    return IdentityResult(
        name="c0_reduction", status="Holds", witness=None,
        detail=(f"reduced forms proved exact on {len(INT_GRID) ** 2} integer points; "
                f"prefactor 1/2 matches sign(W) at all {n * n} grid points while the "
                f"1/4 normalization fails at {n_quarter_bad} "
                "(printed-form mismatch: the derived prefactor is 1/2)"),
        reference="bound on |b| for the c=0 plane; prefactor cross-check")


def verify_secular_vs_charpoly(seed: int = DEFAULT_SEED) -> IdentityResult:
    """det(E I - H) equals the reduced quadratic evaluated at s = E^2."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        a, b, c = rng.uniform(-3, 3, 3)
        p = model.CouplingPoint(a, b, c)
        poly = oracle.char_poly(model.build_circular(p))
        q1, q0 = model.secular_coeffs(p)
        for e in rng.uniform(-4, 4, 20):
            det_val = poly(e)
            s = e * e
            sec_val = s * s + q1 * s + q0
            scale = max(1.0, abs(det_val), abs(sec_val))
            worst = max(worst, abs(det_val - sec_val) / scale)
    status = "Holds" if worst < 1e-10 else "Fails"
    return IdentityResult(
        name="secular_vs_charpoly", status=status, witness=None,
        detail=f"max relative deviation {worst:.3e} over 100 points x 20 energies "
               f"(seed={seed})",
        reference="characteristic determinant vs reduced quadratic in s=E^2")


def verify_pseudo_hermiticity(seed: int = DEFAULT_SEED) -> IdentityResult:
    """(parity @ H) is exactly symmetric for every sampled coupling point."""
    rng = np.random.default_rng(seed)
    par = model.parity_matrix(4)
    for _ in range(100):
        a, b, c = rng.uniform(-5, 5, 3)
        H = model.build_circular(model.CouplingPoint(a, b, c))
        M = par @ H
        if not np.array_equal(M, M.T):
            return IdentityResult(
                name="pseudo_hermiticity", status="Fails", witness=(a, b, c),
                detail="parity @ H is not exactly symmetric",
                reference="parity-weighted symmetry of the lattice matrix")
    return IdentityResult(
        name="pseudo_hermiticity", status="Holds", witness=None,
        detail=f"entrywise exact over 100 random points (seed={seed})",
        reference="parity-weighted symmetry of the lattice matrix")


def verify_strip_equivalence() -> IdentityResult:
    """sign(W) matches the strip-form inequality inside the strip |a+c| < 4."""
    n = 100
    a = np.linspace(-3.5, 3.5, n)[:, None, None]
    b = np.linspace(-2.3, 2.3, n)[None, :, None]
    c = np.linspace(-3.5, 3.5, n)[None, None, :]
    in_strip = np.abs(a + c) < 4 - 1e-6
    w = np.broadcast_to(model.eval_w(a, b, c), (n, n, n))
    tau = (c - a) / 2
    sinphi = (a + c) / 4
    cos2 = 1 - sinphi ** 2
    strip_form = np.broadcast_to((1 + tau * sinphi) ** 2 - b * b * cos2, (n, n, n))
    significant = np.abs(w) > 1e-9
    agree = (np.sign(w) == np.sign(64 * strip_form)) | ~significant | ~np.broadcast_to(in_strip, (n, n, n))
    if not agree.all():
        ii = np.argwhere(~agree)[0]
        return IdentityResult(
            name="strip_equivalence", status="Fails",
            witness=(float(a[ii[0], 0, 0]), float(b[0, ii[1], 0]), float(c[0, 0, ii[2]])),
            detail="sign(W) disagrees with the strip inequality",
            reference="strip reparametrization of the quartic positivity region")
    return IdentityResult(
        name="strip_equivalence", status="Holds", witness=None,
        detail=f"sign agreement at all {n ** 3} strip grid points",
        reference="strip reparametrization of the quartic positivity region")


ALL_CHECKS = (
    verify_b0_square,
    verify_factor_b1,
    verify_c0_forms,
    verify_pseudo_hermiticity,
    verify_secular_vs_charpoly,
    verify_strip_equivalence,
    verify_w_forms,
    verify_wpq_relation,
)


def run_all(seed: int = DEFAULT_SEED) -> list:
    """Run every registered check; results ordered by check name."""
    results = []
    for check in ALL_CHECKS:
        if check in (verify_secular_vs_charpoly, verify_pseudo_hermiticity):
            results.append(check(seed))
        else:
            results.append(check())
    return sorted(results, key=lambda r: r.name)


def report_json(results) -> str:
    return json.dumps([r.to_dict() for r in results], indent=2)


def has_failures(results) -> bool:
    return any(r.status == "Fails" for r in results)
