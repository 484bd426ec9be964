"""Check results and the identity registry shared by all verification suites."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

# identity name -> (equation label, kind).  Labels are the equation labels of
# the source derivation; kind "conjecture" never affects the exit status.
REGISTRY = {
    # scalars / clock
    "weyl_relation": ("morris", "identity"),
    # core
    "A0_scalar": ("A0L", "identity"),
    "AL_product": ("A0L", "identity"),
    "A_commute": ("A", "identity"),
    "A_degree": ("A", "identity"),
    "L_split": ("Ljsum", "identity"),
    "H_explicit": ("H", "identity"),
    "A_split": ("Al", "identity"),
    "A1_split": ("A1", "identity"),
    "commu": ("commu", "identity"),
    "beta": ("beta", "identity"),
    "comb": ("comb", "identity"),
    # parafermions
    "gamma1": ("gamma1", "identity"),
    "gamma_recursion": ("gamma", "identity"),
    "gamma_closed_right": ("gammaj", "identity"),
    "gamma_closed_left": ("gammaj", "identity"),
    "q0": ("q0", "identity"),
    "R_top": ("Rm", "identity"),
    "comR1": ("comR1", "identity"),
    "comR2": ("comR2", "identity"),
    "mu_nu": ("dfmunu", "identity"),
    "hmn_mu": ("hmn", "identity"),
    "hmn_nu": ("hmn", "identity"),
    "eq48a": ("4.8a", "identity"),
    "eq48b": ("4.8b", "identity"),
    "s_scalar": ("sj", "identity"),
    "s_vanish": ("vanish", "identity"),
    "s_product": ("prodsum", "identity"),
    "truncation": ("B4.3j", "identity"),
    "truncation_closed": ("B4.3j", "identity"),
    "K_split": ("bKK", "identity"),
    "K_collapse": ("Kf", "identity"),
    "K_cancel": ("K", "identity"),
    "hat_top": ("A0L", "identity"),
    # ybe
    "site_ybe": ("YBE3", "identity"),
    "ybeac": ("YBEAC", "identity"),
    "AA_commute": ("comCA", "identity"),
    "CC_commute": ("comCA", "identity"),
    "yb1": ("YB1", "identity"),
    "yb2": ("YB2", "identity"),
    "yb3": ("YB3", "identity"),
    # spectral
    "spol_factorization": ("spol", "identity"),
    "companion_spectrum": ("pron", "identity"),
    "vandermonde_eigvec": ("vi", "identity"),
    "pinv_lagrange": ("Pinverse", "identity"),
    "biorthonormal": ("Hami", "identity"),
    "H_eigenvalue": ("Hami", "identity"),
    "labels_unique": ("Hami", "identity"),
    "Q_inverse": ("Q", "identity"),
    "q_spectral": ("qal", "identity"),
    "q_negative": ("qal", "identity"),
    "raising": ("Gright2", "identity"),
    "annihilation": ("Gright", "identity"),
    "lowering_left": ("leftG", "identity"),
    "Y_selection": ("Lambda3", "identity"),
    "lambda_1_vs_2": ("Lambda2", "identity"),
    "lambda_1_vs_4": ("Lambda4", "identity"),
    "lambda_2_vs_4": ("Lambda4", "identity"),
    "lambda_3_vs_4": ("Lambda3", "identity"),
    "b54": ("b5.4", "conjecture"),
    # fendley
    "h_algebra": ("h-operators", "identity"),
    "H_fendley": ("Hami-limit", "identity"),
    "exclusion_A": ("Tbtau", "identity"),
    "u_roots": ("spol-limit", "identity"),
    "pinv_factorized": ("PX", "identity"),
    "phi_decomposition": ("Phi", "identity"),
    # a suite stage raised instead of producing results
    "suite_error": ("-", "error"),
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float = 0.0
    indices: dict = field(default_factory=dict)
    detail: str = ""
    wall_time: float = 0.0

    @property
    def tag(self):
        return REGISTRY[self.name][0]

    @property
    def kind(self):
        return REGISTRY[self.name][1]

    def to_json(self):
        d = asdict(self)
        d["paper_eq_tag"] = self.tag
        d["kind"] = self.kind
        return d

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        idx = ",".join(f"{k}={v}" for k, v in self.indices.items())
        return f"{status} {self.name}[{idx}] residual={self.residual:.3g} {self.detail}".rstrip()


def _magnitude(x):
    if isinstance(x, (int, float)):
        return abs(x)
    if isinstance(x, (list, tuple)):
        return max((_magnitude(y) for y in x), default=0.0)
    return max((o.max_abs() for o in getattr(x, "coeffs", [x])), default=0.0)


def zero_check(name, op, tol=0.0, scale=None, **indices):
    """Check that an Operator (or OperatorPolynomial) vanishes.

    Exact operators must vanish identically; the residual is then reported as
    0.0 or as the magnitude of the largest entry.  Float operators pass when
    the largest absolute entry, divided by max(1, scale), is at most ``tol``.
    ``scale`` is a number or the operators whose difference was formed; their
    largest entry sets the size at which rounding cancels.
    """
    ops = getattr(op, "coeffs", [op])
    worst, detail = 0.0, ""
    exact = ops[0].field.exact
    for k, o in enumerate(ops):
        if exact:
            hit = o.first_nonzero()
            if hit is not None:
                r = o.max_abs()
                if r >= worst:
                    worst = r
                    detail = f"nonzero entry ({hit[0]},{hit[1]}) = {hit[2]!r}" + (
                        f" in coefficient {k}" if len(ops) > 1 else "")
        else:
            worst = max(worst, o.max_abs())
    if exact:
        return CheckResult(name, worst == 0.0 and not detail, worst, indices, detail)
    mag = max(1.0, _magnitude(scale)) if scale is not None else 1.0
    if mag > 1.0:
        detail = f"relative to scale {mag:.3g}"
    return CheckResult(name, worst / mag <= tol, worst / mag, indices, detail)


def scalar_check(name, value, tol=0.0, **indices):
    value = abs(value)
    return CheckResult(name, value <= tol, float(value), indices)


def bool_check(name, ok, detail="", **indices):
    return CheckResult(name, bool(ok), 0.0 if ok else 1.0, indices, detail)


@contextmanager
def timed(results):
    """Stamp the wall time of a block onto every result it appends."""
    start, n0 = time.perf_counter(), len(results)
    yield
    dt = time.perf_counter() - start
    new = results[n0:]
    for r in new:
        r.wall_time = dt / max(len(new), 1)
