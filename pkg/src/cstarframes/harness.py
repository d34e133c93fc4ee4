"""Random instance generation, theorem-audit ensembles, and run reports.

Every ensemble is driven by Philox streams keyed (seed, suite tag, trial
index), so a (suite, config, seed) triple reproduces every numeric field
bit for bit.  A run report is a plain dict with fixed key order; its
serialized payload (wall clock excluded) is byte-identical across reruns.
"""

from __future__ import annotations

import math
import re
import time
from typing import Optional

from ._version import __version__
from .algebra import AlgebraSpec
from .certify import CERTIFIED, FALSIFIED
from .douglas import equivalence_audit, pseudo_inverse
from .errors import AtomicSystemError, InputError
from .frames import (
    FrameSeq,
    atomic_coefficients,
    certify_kframe,
    certify_star_bessel,
    coisometry_invariance_audit,
    conjugation_audit,
    dual_atoms_audit,
    optimal_scalar_bounds,
)
from .hilbmod import (
    ModuleOperator,
    ModuleVector,
    central_mult,
    identity_operator,
)
from .perturb import pertur1_audit, pertur2_audit
from .sampling import (
    random_central,
    random_operator,
    random_unitary,
    random_vector,
    stream,
)
from .serialize import Instance, certificate_to_dict
from .tensor import tensor_frame_audit, tensor_witness

PROFILES = (
    "generic",
    "rank-deficient-K",
    "co-isometry-commuting",
    "paper-example-truncation(N)",
)

SUITES = (
    "douglas-equivalence",
    "kframe-main",
    "paper-example",
    "conjugation",
    "tensor",
    "co-isometry",
    "perturb1",
    "perturb2",
)

# margin between optimal scalar bounds and the bounds stored in instances,
# so downstream perturbation checks have headroom
BOUND_MARGIN = 0.05


def _parse_profile(profile: str) -> tuple[str, Optional[int]]:
    m = re.fullmatch(r"paper-example-truncation\((\d+)\)", profile)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise InputError("paper-example-truncation needs N >= 1")
        return "paper-example-truncation", n
    if profile == "paper-example-truncation":
        return "paper-example-truncation", 10
    if profile in ("generic", "rank-deficient-K", "co-isometry-commuting"):
        return profile, None
    raise InputError(f"unknown profile {profile!r}; known: {', '.join(PROFILES)}")


def paper_truncation_values(n_terms: int) -> list[float]:
    return [1.0 / 3.0 + 1.0 / (j + 1) for j in range(n_terms)]


def _paper_truncation_instance(n_terms: int, seed: int) -> Instance:
    spec = AlgebraSpec((1,) * n_terms)
    vals = paper_truncation_values(n_terms)
    members = []
    for j in range(n_terms):
        scalars = [0.0] * n_terms
        scalars[j] = vals[j]
        members.append(ModuleVector(spec, [spec.central(scalars)]))
    k_op = central_mult(spec.central([v * v for v in vals]), 1)
    bound = spec.central(vals)
    return Instance(
        spec=spec,
        rank=1,
        members=members,
        operators={"K": k_op},
        bounds={"B": bound, "C": bound},
        seed=seed,
    )


def _scalar_bounds(frame: FrameSeq, k_op: ModuleOperator) -> tuple:
    """Central scalar bounds with headroom from the optimal pencil values."""
    lam, mu = optimal_scalar_bounds(frame, k_op)
    low = math.sqrt(max(lam, 0.0) * (1.0 - BOUND_MARGIN)) if math.isfinite(lam) else 1.0
    up = math.sqrt(mu) * (1.0 + BOUND_MARGIN)
    a = max(low, 1e-8) * frame.spec.unit()
    b = max(up, 1e-8) * frame.spec.unit()
    return a, b


def _generic_instance(seed: int) -> Instance:
    rng = stream(seed, 1)
    spec = AlgebraSpec((2, 1))
    n = int(rng.integers(1, 4))
    j_count = int(rng.integers(n, 7))
    members = [random_vector(spec, n, rng) for _ in range(j_count)]
    frame = FrameSeq(members)
    q0 = random_operator(spec, n, j_count, rng)
    k_op = frame.synthesis_op.compose(q0)
    l_op = k_op.compose(random_operator(spec, n, n, rng))
    a, b = _scalar_bounds(frame, k_op)
    return Instance(
        spec=spec,
        rank=n,
        members=members,
        operators={"K": k_op, "L": l_op},
        bounds={"A": a, "B": b},
        seed=seed,
    )


def _rank_deficient_instance(seed: int) -> Instance:
    rng = stream(seed, 1)
    spec = AlgebraSpec((2, 1))
    n = int(rng.integers(2, 4))
    j_count = int(rng.integers(n, 7))
    members = []
    for _ in range(j_count):
        v = random_vector(spec, n, rng)
        entries = list(v.entries[:-1]) + [spec.zero()]
        members.append(ModuleVector(spec, entries))
    ident = identity_operator(spec, n)
    proj_grid = [
        [spec.unit() if (i == j and j < n - 1) else spec.zero() for i in range(n)]
        for j in range(n)
    ]
    return Instance(
        spec=spec,
        rank=n,
        members=members,
        operators={"K": ident, "P": ModuleOperator(spec, proj_grid)},
        bounds={"A": spec.unit(), "B": spec.unit()},
        seed=seed,
    )


def _coisometry_instance(seed: int) -> Instance:
    rng = stream(seed, 1)
    spec = AlgebraSpec((2, 1))
    n = int(rng.integers(1, 4))
    j_count = int(rng.integers(n, 7))
    members = [random_vector(spec, n, rng) for _ in range(j_count)]
    frame = FrameSeq(members)
    k_op = central_mult(random_central(spec, rng), n)
    t_op = random_unitary(spec, n, rng)
    a, b = _scalar_bounds(frame, k_op)
    return Instance(
        spec=spec,
        rank=n,
        members=members,
        operators={"K": k_op, "T": t_op},
        bounds={"A": a, "B": b},
        seed=seed,
    )


def random_instance(seed: int, profile: str) -> Instance:
    """Deterministic instance for the named ensemble profile."""
    name, n_terms = _parse_profile(profile)
    if name == "paper-example-truncation":
        return _paper_truncation_instance(n_terms, seed)
    if name == "generic":
        return _generic_instance(seed)
    if name == "rank-deficient-K":
        return _rank_deficient_instance(seed)
    return _coisometry_instance(seed)


def _trial_seed(seed: int, trial: int) -> int:
    return (seed * 1_000_003 + trial) % (2**61)


# -- suite trial bodies ----------------------------------------------------------


def _douglas_trial(seed: int, trial: int, tol: float) -> dict:
    rng = stream(seed, 2, trial)
    spec = AlgebraSpec((2, 1))
    n = 2 + trial % 2
    n2 = int(rng.integers(1, 4))
    s0 = random_operator(spec, n2, n, rng)
    drop_grid = [
        [spec.unit() if (i == j and j < n - 1) else spec.zero() for i in range(n)]
        for j in range(n)
    ]
    s_op = ModuleOperator(spec, drop_grid).compose(s0)
    nt = int(rng.integers(1, 4))
    q0 = random_operator(spec, nt, n2, rng)
    t_op = s_op.compose(q0)
    planted_inclusion = trial % 2 == 0
    if not planted_inclusion:
        r_op = random_operator(spec, nt, n, rng)
        coproj = identity_operator(spec, n) - s_op.compose(pseudo_inverse(s_op))
        t_op = t_op + coproj.compose(r_op)
    cert = equivalence_audit(t_op, s_op, tol, samples=50, seed=_trial_seed(seed, trial))
    matches = bool(cert.witness.get("cond_i")) == planted_inclusion
    status = cert.status if matches else FALSIFIED
    return {
        "trial": trial,
        "status": status,
        "planted_inclusion": planted_inclusion,
        "matches_planted": matches,
        "certificate": certificate_to_dict(cert),
    }


def _kframe_main_trial(seed: int, trial: int, tol: float) -> dict:
    profile = "generic" if trial % 2 == 0 else "rank-deficient-K"
    inst = random_instance(_trial_seed(seed, trial), profile)
    frame = inst.frame()
    k_op = inst.operators["K"]
    lam, mu = optimal_scalar_bounds(frame, k_op)
    kframe_ok = False
    if math.isfinite(lam) and lam > 1e-8:
        a = math.sqrt(lam * (1.0 - 1e-9)) * inst.spec.unit()
        b = math.sqrt(mu) * (1.0 + 1e-9) * inst.spec.unit()
        kframe_ok = certify_kframe(frame, k_op, a, b, tol).ok
    atomic_ok = True
    recon_residual = None
    try:
        _, _, residual = atomic_coefficients(
            frame, k_op, tol=1e-8, samples=20, seed=_trial_seed(seed, trial) + 1
        )
        atomic_ok = residual <= 1e-8
    except AtomicSystemError:
        atomic_ok = False
    dual_ok = True
    if atomic_ok:
        audit = dual_atoms_audit(
            frame, k_op, tol=1e-9, samples=20, seed=_trial_seed(seed, trial) + 2
        )
        recon_residual = audit.witness["max_reconstruction_residual"]
        dual_ok = recon_residual <= 1e-9
    agreement = (kframe_ok == atomic_ok) and (not atomic_ok or dual_ok)
    return {
        "trial": trial,
        "status": CERTIFIED if agreement else FALSIFIED,
        "profile": profile,
        "kframe_ok": kframe_ok,
        "atomic_ok": atomic_ok,
        "dual_ok": dual_ok,
        "lambda_star": lam,
        "reconstruction_residual": recon_residual,
    }


def _paper_example_run(seed: int, n_terms: int, samples: int) -> dict:
    inst = _paper_truncation_instance(n_terms, seed)
    frame = inst.frame()
    k_op = inst.operators["K"]
    c_bound = inst.bounds["C"]
    bessel = certify_star_bessel(frame, inst.bounds["B"], tol=1e-9)
    q, _, residual = atomic_coefficients(frame, k_op, tol=1e-9, samples=0)
    rng = stream(seed, 5)
    max_dev = 0.0
    for _ in range(samples):
        u = random_vector(inst.spec, 1, rng)
        a_u = q.apply(u)
        dev = (a_u.inner(a_u) - c_bound * u.inner(u) * c_bound.adjoint()).norm()
        max_dev = max(max_dev, dev)
    ok = bessel.ok and residual <= 1e-10 and max_dev <= 1e-12
    return {
        "trial": 0,
        "status": CERTIFIED if ok else FALSIFIED,
        "n_terms": n_terms,
        "bessel_status": bessel.status,
        "factorization_residual": residual,
        "max_equality_deviation": max_dev,
    }


def _conjugation_trial(seed: int, trial: int, tol: float) -> dict:
    inst = random_instance(_trial_seed(seed, trial), "generic")
    frame = inst.frame()
    rng = stream(seed, 6, trial)
    k_op = random_operator(inst.spec, inst.rank, inst.rank, rng)
    cert = conjugation_audit(frame, k_op, tol=1e-10)
    return {
        "trial": trial,
        "status": cert.status,
        "matched": cert.witness["matched"],
        "certificate": certificate_to_dict(cert),
    }


def tensor_pair_instance(seed: int) -> Instance:
    """Left/right instance pair for the tensor audit: left algebra M_2,
    right algebra C + C, planted K and L with scalar bounds."""
    rng = stream(seed, 7)
    left = AlgebraSpec((2,))
    right = AlgebraSpec((1, 1))
    n = int(rng.integers(1, 3))
    m = int(rng.integers(1, 3))
    j_count = int(rng.integers(n, 4))
    i_count = int(rng.integers(m, 4))
    f_members = [random_vector(left, n, rng) for _ in range(j_count)]
    h_members = [random_vector(right, m, rng) for _ in range(i_count)]
    f_seq = FrameSeq(f_members)
    h_seq = FrameSeq(h_members)
    k_op = f_seq.synthesis_op.compose(random_operator(left, n, j_count, rng))
    l_op = h_seq.synthesis_op.compose(random_operator(right, m, i_count, rng))
    a, b = _scalar_bounds(f_seq, k_op)
    c, d = _scalar_bounds(h_seq, l_op)
    right_inst = Instance(
        spec=right,
        rank=m,
        members=h_members,
        operators={"L": l_op},
        bounds={"C": c, "D": d},
        seed=seed,
    )
    return Instance(
        spec=left,
        rank=n,
        members=f_members,
        operators={"K": k_op},
        bounds={"A": a, "B": b},
        seed=seed,
        right=right_inst,
    )


def _tensor_trial(seed: int, trial: int, tol: float) -> dict:
    inst = tensor_pair_instance(_trial_seed(seed, trial))
    f_seq = inst.frame()
    h_seq = inst.right.frame()
    w = tensor_witness(inst.spec, inst.right.spec)
    cert = tensor_frame_audit(
        w,
        f_seq,
        h_seq,
        inst.operators["K"],
        inst.right.operators["L"],
        inst.bounds["A"],
        inst.bounds["B"],
        inst.right.bounds["C"],
        inst.right.bounds["D"],
        tol,
    )
    return {
        "trial": trial,
        "status": cert.status,
        "frame_operator_residual": cert.witness.get("frame_operator_residual"),
        "certificate": certificate_to_dict(cert),
    }


def _coisometry_trial(seed: int, trial: int, tol: float) -> dict:
    inst = random_instance(_trial_seed(seed, trial), "co-isometry-commuting")
    cert = coisometry_invariance_audit(
        inst.frame(), inst.operators["T"], inst.operators["K"], tol=1e-8
    )
    return {
        "trial": trial,
        "status": cert.status,
        "certificate": certificate_to_dict(cert),
    }


def _perturbed_pair(inst: Instance, seed: int, epsilon: float):
    rng = stream(seed, 8)
    frame = inst.frame()
    h_members = [
        m + random_vector(inst.spec, inst.rank, rng).scalar_mul(epsilon)
        for m in frame.members
    ]
    return frame, FrameSeq(h_members)


def _perturb1_trial(seed: int, trial: int, tol: float, epsilon: float, samples: int) -> dict:
    inst = random_instance(_trial_seed(seed, trial), "generic")
    frame, h_seq = _perturbed_pair(inst, _trial_seed(seed, trial) + 3, epsilon)
    k_op = inst.operators["K"]
    a, b = inst.bounds["A"], inst.bounds["B"]
    rep = pertur1_audit(
        frame, h_seq, k_op, k_op, a, b, tol=1e-9,
        samples=samples, seed=_trial_seed(seed, trial) + 4,
    )
    m_val = rep.certified_M
    bessel_h = rep.constants_used["bessel_of_h"]
    bessel_bound = (1.0 + math.sqrt(m_val)) * b.norm() + 1e-9
    bessel_ok = bessel_h <= bessel_bound
    ok = rep.conclusion.ok and bessel_ok
    return {
        "trial": trial,
        "status": CERTIFIED if ok else FALSIFIED,
        "M": m_val,
        "branch_M_f": rep.branch_M_f,
        "branch_M_h": rep.branch_M_h,
        "sampled_M": rep.sampled_M,
        "bessel_of_h": bessel_h,
        "bessel_bound": bessel_bound,
        "conclusion_status": rep.conclusion.status,
    }


def _perturb2_trial(seed: int, trial: int, tol: float, epsilon: float, samples: int) -> dict:
    inst = random_instance(_trial_seed(seed, trial), "generic")
    frame, h_seq = _perturbed_pair(inst, _trial_seed(seed, trial) + 3, epsilon)
    k_op = inst.operators["K"]
    a, b = inst.bounds["A"], inst.bounds["B"]
    rep = pertur2_audit(
        frame, h_seq, k_op, k_op, 0.2, 0.1, 0.05, a, b,
        tol=1e-9, samples=samples, seed=_trial_seed(seed, trial) + 4,
    )
    hypothesis_passed = rep.constants_used.get("hypothesis") == "sampled-consistent"
    ok = (not hypothesis_passed) or rep.conclusion.ok
    return {
        "trial": trial,
        "status": CERTIFIED if ok else FALSIFIED,
        "hypothesis_passed": hypothesis_passed,
        "conclusion_status": rep.conclusion.status,
        "M": rep.certified_M,
    }


def run_suite(
    suite: str,
    trials: int = 100,
    seed: int = 0,
    tol: float = 1e-9,
    samples: int = 100,
    n_terms: int = 10,
    epsilon: float = 1e-3,
) -> dict:
    """Execute one audit ensemble and assemble its run report."""
    if suite not in SUITES:
        raise InputError(f"unknown suite {suite!r}; known: {', '.join(SUITES)}")
    t0 = time.perf_counter()
    rows: list[dict] = []
    if suite == "paper-example":
        rows.append(_paper_example_run(seed, n_terms, samples))
    else:
        body = {
            "douglas-equivalence": lambda t: _douglas_trial(seed, t, tol),
            "kframe-main": lambda t: _kframe_main_trial(seed, t, tol),
            "conjugation": lambda t: _conjugation_trial(seed, t, tol),
            "tensor": lambda t: _tensor_trial(seed, t, tol),
            "co-isometry": lambda t: _coisometry_trial(seed, t, tol),
            "perturb1": lambda t: _perturb1_trial(seed, t, tol, epsilon, samples),
            "perturb2": lambda t: _perturb2_trial(seed, t, tol, epsilon, samples),
        }[suite]
        for t in range(trials):
            try:
                rows.append(body(t))
            except InputError as exc:
                rows.append({"trial": t, "status": "error", "error": str(exc)})
    statuses = [r["status"] for r in rows]
    if FALSIFIED in statuses:
        overall = FALSIFIED
    elif "inconclusive" in statuses or "error" in statuses:
        overall = "inconclusive"
    else:
        overall = CERTIFIED
    summary = {
        "total": len(rows),
        "certified": statuses.count("certified"),
        "falsified": statuses.count("falsified"),
        "inconclusive": statuses.count("inconclusive"),
        "errors": statuses.count("error"),
        "overall": overall,
    }
    report = {
        "tool": "cstarframes",
        "version": __version__,
        "command": "suite",
        "suite": suite,
        "config": {
            "trials": trials,
            "seed": seed,
            "tol": tol,
            "samples": samples,
            "n_terms": n_terms,
            "epsilon": epsilon,
        },
        "seed": seed,
        "instance_digest": None,
        "trials": rows,
        "summary": summary,
        "wall_clock_s": time.perf_counter() - t0,
    }
    return report
