"""Executable Douglas-theorem toolkit.

For adjointable T and S with a common target module, the classical
equivalences are: range inclusion R(T) <= R(S); a pencil inequality
mu T T* <= S S* for some mu > 0; a norm inequality lambda ||T* f||^2 <=
||S* f||^2; and a factorization T = S Q.  All four are decidable here
because the flattened matrices are finite; Q is realized as the
minimal-norm solution S^+ T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .certify import (
    BOUNDARY_FACTOR,
    CERTIFIED,
    Certificate,
    FALSIFIED,
    INCONCLUSIVE,
)
from .errors import InputError
from .hilbmod import ModuleOperator, from_block_matrices
from .sampling import random_vector, stream

DEFAULT_RTOL = 1e-10


@dataclass
class DouglasReport:
    inclusion_ok: bool
    residual: float
    pencil_mu: float
    q: Optional[ModuleOperator]
    q_norm: float


def _check_common_target(t: ModuleOperator, s: ModuleOperator) -> None:
    if t.spec != s.spec or t.out_rank != s.out_rank:
        raise InputError("operators must share algebra spec and output rank")


def pseudo_inverse(t: ModuleOperator, rtol: float = DEFAULT_RTOL) -> ModuleOperator:
    """Moore-Penrose pseudo-inverse as a module operator.

    Computed per reduced block with singular values <= rtol * sigma_max
    (the global largest singular value) treated as zero.  The result is
    automatically A-linear because each reduced block is inverted in place.
    """
    svds = [np.linalg.svd(m, full_matrices=False) for m in t.block_matrices()]
    smax = max((s.max() if s.size else 0.0) for _, s, _ in svds)
    mats = []
    for u, s, vh in svds:
        if smax == 0.0:
            mats.append(np.zeros((vh.shape[1], u.shape[0]), dtype=complex))
            continue
        inv = np.where(s > rtol * smax, 1.0 / np.where(s > 0, s, 1.0), 0.0)
        mats.append((vh.conj().T * inv) @ u.conj().T)
    return from_block_matrices(t.spec, t.out_rank, t.in_rank, mats)


def range_residual(t: ModuleOperator, s: ModuleOperator, rtol: float = DEFAULT_RTOL) -> float:
    """Norm of (I - S S^+) T, zero exactly when R(T) is inside R(S)."""
    _check_common_target(t, s)
    sp = pseudo_inverse(s, rtol)
    proj = s.compose(sp)
    return (t - proj.compose(t)).norm()


def range_inclusion(
    t: ModuleOperator, s: ModuleOperator, tol: float, rtol: float = DEFAULT_RTOL
) -> bool:
    return range_residual(t, s, rtol) <= tol * max(1.0, t.norm())


def pencil_lower_bound(
    t: ModuleOperator,
    s: ModuleOperator,
    rtol: float = DEFAULT_RTOL,
    incl_tol: float = 1e-8,
) -> float:
    """sup{mu >= 0 : mu T T* <= S S*}.

    Returns 0 when range inclusion fails, math.inf for T = 0.  Otherwise
    computed by whitening: with W the pseudo-inverse square root of S S*,
    the value is 1 / lambda_max(W T T* W), evaluated per reduced block.
    """
    _check_common_target(t, s)
    tnorm = t.norm()
    if tnorm == 0.0:
        return math.inf
    if range_residual(t, s, rtol) > incl_tol * max(1.0, tnorm):
        return 0.0
    lam_max = 0.0
    smax = max(
        (np.linalg.svd(m, compute_uv=False).max() if m.size else 0.0)
        for m in s.block_matrices()
    )
    for mt, ms in zip(t.block_matrices(), s.block_matrices()):
        u, sig, _ = np.linalg.svd(ms, full_matrices=False)
        keep = sig > rtol * smax
        if not keep.any():
            continue
        w = (u[:, keep] / sig[keep]) @ u[:, keep].conj().T
        lam = float(np.linalg.norm(w @ mt, ord=2)) ** 2
        lam_max = max(lam_max, lam)
    if lam_max == 0.0:
        return math.inf
    return 1.0 / lam_max


def douglas_solve(
    t: ModuleOperator, s: ModuleOperator, tol: float, rtol: float = DEFAULT_RTOL
) -> DouglasReport:
    """Minimal-norm factorization T = S Q with Q = S^+ T, plus diagnostics."""
    _check_common_target(t, s)
    q = pseudo_inverse(s, rtol).compose(t)
    residual = (s.compose(q) - t).norm()
    inclusion_ok = residual <= tol * max(1.0, t.norm())
    mu = pencil_lower_bound(t, s, rtol)
    return DouglasReport(
        inclusion_ok=inclusion_ok,
        residual=residual,
        pencil_mu=mu,
        q=q,
        q_norm=q.norm(),
    )


def equivalence_audit(
    t: ModuleOperator,
    s: ModuleOperator,
    tol: float = 1e-9,
    samples: int = 100,
    seed: int = 0,
) -> Certificate:
    """Evaluate the four equivalent conditions independently and certify
    that they agree.

    (i) range-inclusion residual, (ii) pencil positivity, (iii) the norm
    inequality lambda ||T* f||^2 <= ||S* f||^2 sampled at lambda equal to
    the pencil value, (iv) factorization residual of S (S^+ T) = T.
    """
    _check_common_target(t, s)
    rng = stream(seed, 0xD0)
    tscale = max(1.0, t.norm())

    residual = range_residual(t, s)
    cond_i = residual <= tol * tscale

    mu = pencil_lower_bound(t, s)
    near_boundary = math.isfinite(mu) and tol < mu <= BOUNDARY_FACTOR * tol
    cond_ii = mu > BOUNDARY_FACTOR * tol or math.isinf(mu)

    t_adj = t.adjoint()
    s_adj = s.adjoint()
    witness_vec = None
    if cond_ii and math.isfinite(mu):
        cond_iii = True
        for _ in range(samples):
            f = random_vector(t.spec, t.out_rank, rng)
            lhs = mu * t_adj.apply(f).norm() ** 2
            rhs = s_adj.apply(f).norm() ** 2
            if lhs > rhs + tol * max(1.0, rhs):
                cond_iii = False
                witness_vec = f
                break
    elif math.isinf(mu):
        cond_iii = True
    else:
        # look for a direction in the cokernel of S seen by T*
        cond_iii = True
        sp = pseudo_inverse(s)
        coproj = s.compose(sp)
        for _ in range(samples):
            g = random_vector(t.spec, t.out_rank, rng)
            f = g - coproj.apply(g)
            if s_adj.apply(f).norm() <= tol and t_adj.apply(f).norm() > BOUNDARY_FACTOR * tol:
                cond_iii = False
                witness_vec = f
                break

    rep = douglas_solve(t, s, tol)
    cond_iv = rep.residual <= tol * tscale

    verdicts = [cond_i, cond_ii, cond_iii, cond_iv]
    witness = {
        "range_residual": residual,
        "pencil_mu": mu if math.isfinite(mu) else float("inf"),
        "factorization_residual": rep.residual,
        "q_norm": rep.q_norm,
        "cond_i": cond_i,
        "cond_ii": cond_ii,
        "cond_iii": cond_iii,
        "cond_iv": cond_iv,
    }
    tolerances = {"tol": tol}
    if near_boundary:
        return Certificate(
            INCONCLUSIVE, "douglas-equivalence", witness, tolerances, samples, seed
        )
    if all(verdicts) or not any(verdicts):
        return Certificate(
            CERTIFIED, "douglas-equivalence", witness, tolerances, samples, seed
        )
    return Certificate(
        FALSIFIED,
        "douglas-equivalence",
        witness,
        tolerances,
        samples,
        seed,
        witness_vector=witness_vec,
    )
