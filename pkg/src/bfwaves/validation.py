"""Acceptance suite: twelve end-to-end checks with fixed tolerances.

Each check returns a CheckResult; `run_all` evaluates them in order. The
oracles used here (brute-force determinants, dense solves, the flat-state
dispersion relation, direct eigensolves) are independent of the code paths
being checked.
"""

from dataclasses import dataclass
import time

import numpy as np
from scipy.optimize import linear_sum_assignment

from .coeffs import critical_depth, depth_coefficients
from .kato import reduce_operator
from .operator import assemble_L, flat_eigenvalues, full_spectrum, symplectic_form
from .reduction import (
    SylvesterCoefficients, run_pipeline, sylvester_det, sylvester_inverse, sylvester_matrix,
)
from .spectrum import direct_quadruple, near_zero, numeric_max_growth
from .stokes import coefficient_functions, traveling_residual


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def multiset_distance(a, b):
    """Largest distance under the optimal one-to-one pairing of two point sets."""
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def mirror_defect(values):
    values = np.asarray(values)
    return multiset_distance(values, -np.conj(values))


def cofactor_det(A):
    """Determinant by Laplace expansion along the first row."""
    A = np.asarray(A, dtype=float)
    if A.shape == (1, 1):
        return A[0, 0]
    total = 0.0
    for j in range(A.shape[0]):
        minor = np.delete(np.delete(A, 0, axis=0), j, axis=1)
        total += (-1) ** j * A[0, j] * cofactor_det(minor)
    return total


def check_critical_depth():
    h = critical_depth((1.0, 2.0), 1e-12)
    return abs(h - 1.363) <= 1e-3, f"h_WB = {h:.10f}"


def check_coefficient_identity():
    worst = 0.0
    for h in np.logspace(np.log10(0.1), np.log10(30), 200):
        d = depth_coefficients(h)
        worst = max(worst, abs(d.e_WB - (d.e_11 + d.tilde_e11)) / max(1.0, abs(d.e_WB)))
    return worst <= 1e-12, f"max scaled gap {worst:.2e}"


def check_flat_spectrum():
    worst = 0.0
    for h in (0.5, 1.0, 2.0):
        for mu in (0.1, 0.3):
            ev = full_spectrum(assemble_L(h, 0.0, mu, 32))
            worst = max(worst, multiset_distance(ev, flat_eigenvalues(h, mu, 32)))
    return worst <= 1e-10, f"max eigenvalue gap {worst:.2e}"


def check_sylvester(samples=100, seed=0):
    rng = np.random.default_rng(seed)
    det_gap = inv_gap = 0.0
    count = 0
    while count < samples:
        co = SylvesterCoefficients(*rng.uniform(-2, 2, 5))
        A = sylvester_matrix(co)
        ref = cofactor_det(A)
        if abs(ref) <= 1e-6:
            continue
        det_gap = max(det_gap, abs(sylvester_det(co) - ref))
        inv_gap = max(inv_gap, np.max(np.abs(sylvester_inverse(co) - np.linalg.solve(A, np.eye(4)))))
        count += 1
    return det_gap <= 1e-12 and inv_gap <= 1e-10, f"det gap {det_gap:.2e}, inverse gap {inv_gap:.2e}"


def check_stokes_residual():
    ratio = traveling_residual(1.5, 0.02, 32) / traveling_residual(1.5, 0.01, 32)
    return 6.5 <= ratio <= 9.5, f"residual ratio {ratio:.4f}"


def check_coefficient_functions():
    eps = 0.005
    worst = 0.0
    for h in (1.0, 2.0):
        cf = coefficient_functions(h, eps, 32)
        for got, want in ((cf.p_eps.cos_coeff(1), cf.p1_1 * eps), (cf.a_eps.cos_coeff(1), cf.a1_1 * eps)):
            worst = max(worst, abs(got - want) / abs(want))
    return worst <= 2 * eps, f"max relative error {worst:.2e} (bound {2 * eps:.0e})"


def check_kato_structure():
    herm = pattern = eig = 0.0
    for h in (1.0, 2.0):
        for eps in (0.005, 0.01):
            cf = coefficient_functions(h, eps, 32)
            for mu in (0.005, 0.02):
                kr = reduce_operator(h, eps, mu, 32, cf)
                q = kr.quadruple
                herm = max(herm, q.hermitian_defect())
                pattern = max(pattern, q.pattern_defect())
                eig = max(eig, multiset_distance(q.eigenvalues(), near_zero(full_spectrum(kr.L))))
    ok = herm <= 1e-8 and pattern <= 1e-8 and eig <= 1e-7
    return ok, f"self-adjoint {herm:.1e}, pattern {pattern:.1e}, eigenvalues {eig:.1e}"


def entry_scaling_ratios(h):
    """Successive ratios of the scaled remainders of E11, Im E12 and F11 along mu = eps."""
    d = depth_coefficients(h)
    rows = []
    for e in (0.02, 0.01, 0.005):
        B = reduce_operator(h, e, e, 32).quadruple.B4
        rows.append([
            (B[0, 0].real - (d.e_11 * e**2 - d.e_22 * e**2 / 8)) / e**3,
            (B[0, 1].imag - 0.5 * d.e_12 * e) / e**3,
            (B[0, 2].real - d.f_11 * e) / e**3,
        ])
    rows = np.array(rows)
    return rows[1:] / rows[:-1]


def check_entry_scaling():
    ok = True
    parts = []
    for h in (1.0, 2.0):
        ratios = entry_scaling_ratios(h)
        ok &= bool(np.all((ratios >= 0.3) & (ratios <= 3)))
        text = ", ".join(f"{n} {r[0]:.2f}/{r[1]:.2f}" for n, r in zip(("E11", "E12", "F11"), ratios.T))
        parts.append(f"h={h:g}: {text}")
    return ok, "successive ratios " + "; ".join(parts)


def check_dichotomy():
    d = depth_coefficients(2.0)
    eps = 0.01
    mu_bar = d.e_h * eps
    cf = coefficient_functions(2.0, eps, 32)
    inside = direct_quadruple(2.0, eps, 0.5 * mu_bar, 32, cf)
    outside = direct_quadruple(2.0, eps, 2.0 * mu_bar, 32, cf)
    n_in = int(np.sum(inside.real > 1e-8))
    n_out = int(np.sum(np.abs(outside.real) > 1e-8))
    cf1 = coefficient_functions(1.0, eps, 32)
    shallow = max(np.max(np.abs(direct_quadruple(1.0, eps, mu, 32, cf1).real))
                  for mu in np.linspace(0.0025, 0.05, 20))
    ok = n_in == 1 and n_out == 0 and shallow <= 1e-8
    return ok, f"h=2: {n_in} unstable at mu_bar/2, {n_out} at 2 mu_bar; h=1 max |Re| {shallow:.1e}"


def check_max_growth(h=2.0):
    d = depth_coefficients(h)
    gaps = []
    for eps in (0.01, 0.005):
        g, _ = numeric_max_growth(h, eps, 32)
        gaps.append(abs(g - 0.5 * d.e_WB * eps**2) / (0.5 * d.e_WB * eps**2))
    ok = gaps[0] <= 0.15 and gaps[1] < gaps[0]
    return ok, f"relative gap {gaps[0]:.2e} at eps=0.01, {gaps[1]:.2e} at eps=0.005"


def check_decoupling():
    ok = True
    parts = []
    spec = off = 0.0
    for h in (1.0, 2.0):
        d = depth_coefficients(h)
        errs, signs1 = [], []
        for e in (0.02, 0.01, 0.005):
            st = run_pipeline(reduce_operator(h, e, e, 32).quadruple)
            lead = d.e_22 * e**3 / 8
            errs.append(abs((st.step.E[0, 0].real + lead) / e**3 - d.e_WB))
            signs1.append((st.rescaled.E[0, 0].real + lead) / e**3)
            spec = max(spec, multiset_distance(st.step.eigenvalues(), st.pair.eigenvalues()))
            off = max(off, st.pair.off_diagonal_residual)
        converging = errs[2] < errs[0] and errs[2] <= 10 * 0.005 * abs(d.e_WB)
        flip = all(s > 0 for s in signs1)
        ok &= converging and flip
        parts.append(f"h={h:g}: |E2/(mu eps^2) - e_WB| {errs[0]:.1e} -> {errs[2]:.1e}")
    ok &= spec <= 1e-10 and off <= 1e-12
    return ok, "; ".join(parts) + f"; spectrum {spec:.1e}, off-diagonal {off:.1e}"


def check_symmetry():
    mirror = idem = sympl = 0.0
    J = symplectic_form(32)
    for h, eps, mu in ((1.0, 0.01, 0.01), (2.0, 0.01, 0.005), (2.0, 0.02, 0.02), (0.5, 0.01, 0.03)):
        kr = reduce_operator(h, eps, mu, 32)
        mirror = max(mirror, mirror_defect(full_spectrum(kr.L)))
        P, U = kr.basis.P, kr.basis.U
        idem = max(idem, np.max(np.abs(P @ P - P)))
        sympl = max(sympl, np.max(np.abs(U.conj().T @ J @ U - J)))
    ok = mirror <= 1e-9 and idem <= 1e-8 and sympl <= 1e-8
    return ok, f"mirror {mirror:.1e}, idempotency {idem:.1e}, symplectic {sympl:.1e}"


CRITERIA = [
    (1, "critical depth", check_critical_depth),
    (2, "coefficient identity", check_coefficient_identity),
    (3, "flat-state spectrum", check_flat_spectrum),
    (4, "Sylvester algebra", check_sylvester),
    (5, "Stokes residual order", check_stokes_residual),
    (6, "p/a first harmonics", check_coefficient_functions),
    (7, "Kato structure", check_kato_structure),
    (8, "entry scaling", check_entry_scaling),
    (9, "instability dichotomy", check_dichotomy),
    (10, "maximal growth", check_max_growth),
    (11, "decoupling pipeline", check_decoupling),
    (12, "symmetry suite", check_symmetry),
]


def run_check(number):
    num, name, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(num, name, bool(ok), detail, time.perf_counter() - t0)


def run_all():
    return [run_check(n) for n, _, _ in CRITERIA]
