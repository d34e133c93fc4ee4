import math

import numpy as np
import pytest

from cstarframes import (
    AlgebraSpec,
    AtomicSystemError,
    FrameSeq,
    InputError,
    ModuleOperator,
    ModuleVector,
    PreconditionError,
    atomic_coefficients,
    certify_kframe,
    certify_star_bessel,
    coisometry_invariance_audit,
    conjugation_audit,
    coordinate_frame,
    coordinate_vector,
    dual_atoms,
    identity_operator,
    ks_inverse_frame,
    local_atoms_check,
    optimal_scalar_bounds,
    pencil_lower_bound,
    range_inclusion,
    transform_frame,
    transform_kframe_audit,
    zero_operator,
)
from cstarframes.harness import random_instance
from cstarframes.hilbmod import central_mult
from cstarframes.sampling import (
    random_central,
    random_element,
    random_operator,
    random_unitary,
    random_vector,
    stream,
)

from oracles import coefficient_gram_direct, pencil_oracle

SPEC = AlgebraSpec((2, 1))


def random_frame(spec, rank, count, rng):
    return FrameSeq([random_vector(spec, rank, rng) for _ in range(count)])


def paper_frame(n_terms):
    return random_instance(0, f"paper-example-truncation({n_terms})")


def scalar_bounds_with_margin(frame, k_op, margin=1e-6):
    lam, mu = optimal_scalar_bounds(frame, k_op)
    a = math.sqrt(lam * (1 - margin)) * frame.spec.unit()
    b = math.sqrt(mu) * (1 + margin) * frame.spec.unit()
    return a, b


# -- construction invariants ---------------------------------------------------------


def test_analysis_formula():
    rng = stream(70, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    f = random_vector(SPEC, 2, rng)
    coeffs = fr.analysis(f)
    for j, m in enumerate(fr.members):
        assert (coeffs.entries[j] - f.inner(m)).norm() <= 1e-12


def test_frame_operator_hermitian_positive():
    rng = stream(71, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    s = fr.frame_op
    assert (s - s.adjoint()).norm() <= 1e-12 * max(1.0, s.norm())
    assert s.is_positive(1e-9)


def test_frame_operator_entry_formula():
    rng = stream(72, 0)
    fr = random_frame(SPEC, 3, 5, rng)
    s = fr.frame_op
    for k in range(3):
        for i in range(3):
            total = SPEC.zero()
            for m in fr.members:
                total = total + m.entries[k].adjoint() * m.entries[i]
            assert (s.entries[k][i] - total).norm() <= 1e-12 * max(1.0, total.norm())


def test_frame_operator_factors_through_flattening():
    rng = stream(73, 0)
    fr = random_frame(SPEC, 2, 5, rng)
    lhs = fr.frame_op.flatten()
    rhs = fr.synthesis_op.flatten() @ fr.analysis_op.flatten()
    assert np.linalg.norm(lhs - rhs) <= 1e-11 * max(1.0, np.linalg.norm(rhs))


# -- analysis / synthesis ----------------------------------------------------------------


def test_coordinate_frame_analysis_recovers_entries():
    fr = coordinate_frame(SPEC, 3)
    rng = stream(74, 0)
    f = random_vector(SPEC, 3, rng)
    coeffs = fr.analysis(f)
    for j in range(3):
        assert (coeffs.entries[j] - f.entries[j]).norm() <= 1e-13


def test_synthesis_adjoint_law():
    rng = stream(75, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    g = random_vector(SPEC, 4, rng)
    f = random_vector(SPEC, 2, rng)
    lhs = fr.synthesis(g).inner(f)
    rhs = g.inner(fr.analysis(f))
    assert (lhs - rhs).norm() <= 1e-11 * max(1.0, lhs.norm())


def test_synthesis_pairing_formula():
    rng = stream(76, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    g = random_vector(SPEC, 4, rng)
    f = random_vector(SPEC, 2, rng)
    direct = SPEC.zero()
    for j, m in enumerate(fr.members):
        direct = direct + g.entries[j] * m.inner(f)
    assert (fr.synthesis(g).inner(f) - direct).norm() <= 1e-11 * max(1.0, direct.norm())


def test_paper_truncation_analysis_coefficients():
    inst = paper_frame(3)
    fr = inst.frame()
    u = ModuleVector(inst.spec, [inst.spec.central([1.0, 1.0, 1.0])])
    coeffs = fr.analysis(u)
    expect = [4 / 3, 5 / 6, 2 / 3]
    for j in range(3):
        scal = coeffs.entries[j].central_scalars()
        assert scal[j].real == pytest.approx(expect[j], abs=1e-14)
        off = [abs(scal[i]) for i in range(3) if i != j]
        assert max(off) <= 1e-14


def test_frame_operator_action_matches_direct_sum():
    rng = stream(77, 0)
    fr = random_frame(SPEC, 2, 5, rng)
    f = random_vector(SPEC, 2, rng)
    direct = None
    for m in fr.members:
        term = m.module_mul(f.inner(m))
        direct = term if direct is None else direct + term
    got = fr.frame_op.apply(f)
    assert (got - direct).norm() <= 1e-11 * max(1.0, direct.norm())


def test_single_unit_member_gives_identity_frame_operator():
    fr = FrameSeq([coordinate_vector(SPEC, 1, 0)])
    assert (fr.frame_op - identity_operator(SPEC, 1)).norm() <= 1e-14


def test_paper_truncation_frame_operator():
    inst = paper_frame(3)
    fr = inst.frame()
    expected = central_mult(
        inst.spec.central([(4 / 3) ** 2, (5 / 6) ** 2, (2 / 3) ** 2]), 1
    )
    assert (fr.frame_op - expected).norm() <= 1e-14


def test_coefficient_gram_matches_direct_sum():
    rng = stream(78, 0)
    fr = random_frame(SPEC, 2, 5, rng)
    f = random_vector(SPEC, 2, rng)
    got = fr.coefficient_gram(f)
    want = coefficient_gram_direct(fr, f)
    assert (got - want).norm() <= 1e-11 * max(1.0, want.norm())


# -- Bessel certification ---------------------------------------------------------------


def test_bessel_coordinate_frame():
    fr = coordinate_frame(SPEC, 2)
    cert = certify_star_bessel(fr, SPEC.unit(), 1e-9)
    assert cert.status == "certified"


def test_bessel_scaled_frame_falsified_with_witness():
    fr = FrameSeq([m.scalar_mul(2.0) for m in coordinate_frame(SPEC, 2).members])
    cert = certify_star_bessel(fr, SPEC.unit(), 1e-9)
    assert cert.status == "falsified"
    w = cert.witness_vector
    assert w is not None
    gap = SPEC.unit() * w.inner(w) * SPEC.unit() - fr.coefficient_gram(w)
    assert not gap.is_positive(1e-9)


def test_bessel_paper_equality_case():
    inst = paper_frame(4)
    cert = certify_star_bessel(inst.frame(), inst.bounds["B"], 1e-9)
    assert cert.status == "certified"
    assert abs(cert.witness["min_eig"]) <= 1e-12


def test_bessel_non_central_bound_is_sampled():
    rng = stream(79, 0)
    fr = coordinate_frame(SPEC, 2)
    # non-central strictly nonzero element dominating the identity
    b = SPEC.element(
        [np.array([[3.0, 0.5], [0.0, 3.0]], dtype=complex), np.array([[3.0]], dtype=complex)]
    )
    cert = certify_star_bessel(fr, b, 1e-9, samples=50, seed=3)
    assert cert.status == "inconclusive"
    small = b * 0.01
    cert2 = certify_star_bessel(fr, small, 1e-9, samples=50, seed=3)
    assert cert2.status == "falsified"
    assert cert2.witness_vector is not None


def test_bessel_rejects_degenerate_bound():
    fr = coordinate_frame(SPEC, 2)
    with pytest.raises(InputError):
        certify_star_bessel(fr, SPEC.zero(), 1e-9)


# -- K-frame certification ----------------------------------------------------------------


def test_every_frame_is_kframe_for_identity():
    rng = stream(80, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    a, b = scalar_bounds_with_margin(fr, identity_operator(SPEC, 2))
    cert = certify_kframe(fr, identity_operator(SPEC, 2), a, b, 1e-9)
    assert cert.status == "certified"


def test_contraction_scales_lower_bound():
    # a frame with bounds (A, B) is a K-frame with bounds (A/||K||, B)
    rng = stream(81, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    a, b = scalar_bounds_with_margin(fr, identity_operator(SPEC, 2))
    k0 = random_operator(SPEC, 2, 2, rng)
    k = k0.scalar_mul(1.0 / (k0.norm() * 1.01))
    assert k.norm() <= 1.0
    a_scaled = a * (1.0 / k.norm())
    cert = certify_kframe(fr, k, a_scaled, b, 1e-9)
    assert cert.status == "certified"


def test_rank_deficient_frame_falsified_with_witness():
    rng = stream(82, 0)
    members = []
    for _ in range(4):
        v = random_vector(SPEC, 2, rng)
        members.append(ModuleVector(SPEC, [v.entries[0], SPEC.zero()]))
    fr = FrameSeq(members)
    k = identity_operator(SPEC, 2)
    cert = certify_kframe(fr, k, SPEC.unit(), 10.0 * SPEC.unit(), 1e-9)
    assert cert.status == "falsified"
    w = cert.witness_vector
    assert w is not None
    # the witness lives in the lost direction: the lower inequality fails there
    ka = k.adjoint().apply(w)
    gap = fr.coefficient_gram(w) - SPEC.unit() * ka.inner(ka) * SPEC.unit()
    assert not gap.is_positive(1e-9)


def test_kframe_non_central_bounds_sampled():
    rng = stream(83, 0)
    fr = coordinate_frame(SPEC, 2)
    b = SPEC.element(
        [np.array([[2.0, 0.3], [0.0, 2.0]], dtype=complex), np.array([[2.0]], dtype=complex)]
    )
    cert = certify_kframe(fr, identity_operator(SPEC, 2), SPEC.unit() * 0.5, b, 1e-9,
                          samples=40, seed=5)
    assert cert.status == "inconclusive"


# -- optimal scalar bounds ---------------------------------------------------------------


def test_optimal_bounds_coordinate_frame():
    fr = coordinate_frame(SPEC, 2)
    lam, mu = optimal_scalar_bounds(fr)
    assert lam == pytest.approx(1.0, abs=1e-12)
    assert mu == pytest.approx(1.0, abs=1e-12)


def test_optimal_bounds_doubled_coordinate_frame():
    members = list(coordinate_frame(SPEC, 2).members) * 2
    lam, mu = optimal_scalar_bounds(FrameSeq(members))
    assert lam == pytest.approx(2.0, abs=1e-12)
    assert mu == pytest.approx(2.0, abs=1e-12)


def test_optimal_lower_bound_matches_pencil_oracle():
    rng = stream(84, 0)
    for _ in range(5):
        fr = random_frame(SPEC, 2, 4, rng)
        k = fr.synthesis_op.compose(random_operator(SPEC, 2, 4, rng))
        lam, _ = optimal_scalar_bounds(fr, k)
        want = pencil_oracle(k, fr.synthesis_op)
        assert lam == pytest.approx(want, rel=1e-8)


# -- atomic systems ------------------------------------------------------------------------


def test_atomic_coefficients_for_frame_operator():
    rng = stream(85, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    q, c, residual = atomic_coefficients(fr, fr.frame_op, 1e-9)
    assert residual <= 1e-10
    # Q recovers the analysis operator when K = S = U U*
    assert (q - fr.analysis_op).norm() <= 1e-9 * max(1.0, q.norm())
    assert c.norm() == pytest.approx(fr.analysis_op.norm(), rel=1e-12)


def test_atomic_coefficients_paper_equality():
    inst = paper_frame(6)
    fr = inst.frame()
    q, _, residual = atomic_coefficients(fr, inst.operators["K"], 1e-9)
    assert residual <= 1e-12
    c = inst.bounds["C"]
    rng = stream(86, 0)
    for _ in range(25):
        u = random_vector(inst.spec, 1, rng)
        a_u = q.apply(u)
        # coefficients are u times the conjugated member values
        for j, m in enumerate(fr.members):
            want = u.inner(m)
            assert (a_u.entries[j] - want).norm() <= 1e-12
        dev = (a_u.inner(a_u) - c * u.inner(u) * c.adjoint()).norm()
        assert dev <= 1e-12


def test_atomic_coefficients_planted_factorization():
    rng = stream(87, 0)
    for _ in range(5):
        fr = random_frame(SPEC, 2, 4, rng)
        q0 = random_operator(SPEC, 2, 4, rng)
        k = fr.synthesis_op.compose(q0)
        q, c, residual = atomic_coefficients(fr, k, 1e-9)
        assert residual <= 1e-9 * max(1.0, k.norm())
        assert q.norm() <= q0.norm() + 1e-9
        assert c.norm() == pytest.approx(q.norm(), rel=1e-12)


def test_atomic_rejects_range_violation():
    rng = stream(88, 0)
    members = [
        ModuleVector(SPEC, [random_vector(SPEC, 2, rng).entries[0], SPEC.zero()])
        for _ in range(4)
    ]
    fr = FrameSeq(members)
    with pytest.raises(AtomicSystemError):
        atomic_coefficients(fr, identity_operator(SPEC, 2), 1e-9)


def test_corollary_equivalence_atomic_iff_range_inclusion():
    # atomic system exists exactly when R(K) is inside R(U)
    rng = stream(89, 0)
    for k_iter in range(100):
        seed = 1000 + k_iter
        profile = "generic" if k_iter % 2 == 0 else "rank-deficient-K"
        inst = random_instance(seed, profile)
        fr = inst.frame()
        k = inst.operators["K"]
        inclusion = range_inclusion(k, fr.synthesis_op, 1e-9)
        try:
            atomic_coefficients(fr, k, 1e-9, samples=5, seed=seed)
            atomic_ok = True
        except AtomicSystemError:
            atomic_ok = False
        assert atomic_ok == inclusion


# -- dual atoms -------------------------------------------------------------------------------


def test_dual_atoms_for_frame_operator_are_members():
    rng = stream(90, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    atoms = dual_atoms(fr, fr.frame_op, 1e-9)
    for h, m in zip(atoms, fr.members):
        assert (h - m).norm() <= 1e-9 * max(1.0, m.norm())


def test_dual_atoms_identity_reproduce_canonical_dual():
    rng = stream(91, 0)
    fr = random_frame(SPEC, 2, 5, rng)
    atoms = dual_atoms(fr, identity_operator(SPEC, 2), 1e-9)
    s_inv = fr.frame_op.inverse()
    for h, m in zip(atoms, fr.members):
        assert (h - s_inv.apply(m)).norm() <= 1e-9 * max(1.0, h.norm())
    # canonical-dual reconstruction f = sum <f, S^-1 f_j> f_j
    f = random_vector(SPEC, 2, rng)
    coeffs = [f.inner(h) for h in atoms]
    recon = fr.synthesis(ModuleVector(SPEC, coeffs))
    assert (f - recon).norm() <= 1e-9 * max(1.0, f.norm())


def test_dual_atoms_planted_reconstruction():
    rng = stream(92, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    k = fr.synthesis_op.compose(random_operator(SPEC, 2, 4, rng))
    atoms = dual_atoms(fr, k, 1e-9)
    h_frame = FrameSeq(atoms)
    for _ in range(10):
        f = random_vector(SPEC, 2, rng)
        recon = fr.synthesis(h_frame.analysis(f))
        assert (k.apply(f) - recon).norm() <= 1e-9 * max(1.0, f.norm())


# -- local atoms --------------------------------------------------------------------------------


def test_local_atoms_full_module_canonical():
    rng = stream(93, 0)
    fr = random_frame(SPEC, 2, 5, rng)
    s_inv = fr.frame_op.inverse()
    atoms = [s_inv.apply(m) for m in fr.members]
    c = (s_inv.norm() * fr.synthesis_op.norm()) * SPEC.unit()
    cert = local_atoms_check(
        fr, identity_operator(SPEC, 2), atoms, c, 1e-9, samples=50, seed=7
    )
    assert cert.status == "certified"


def test_local_atoms_zero_projection_degenerate():
    rng = stream(94, 0)
    fr = random_frame(SPEC, 2, 3, rng)
    cert = local_atoms_check(
        fr, zero_operator(SPEC, 2, 2), list(fr.members), SPEC.unit(), 1e-9
    )
    assert cert.status == "certified"
    assert cert.witness.get("degenerate") is True


def test_local_atoms_planted_projection():
    rng = stream(95, 0)
    # members supported on the first slot only
    members = [
        ModuleVector(SPEC, [random_element(SPEC, rng), SPEC.zero()]) for _ in range(4)
    ]
    fr = FrameSeq(members)
    p_grid = [
        [SPEC.unit(), SPEC.zero()],
        [SPEC.zero(), SPEC.zero()],
    ]
    p = ModuleOperator(SPEC, p_grid)
    from cstarframes import pseudo_inverse

    s_pinv = pseudo_inverse(fr.frame_op)
    atoms = [s_pinv.apply(m) for m in fr.members]
    c = (s_pinv.norm() * fr.synthesis_op.norm() + 1.0) * SPEC.unit()
    cert = local_atoms_check(fr, p, atoms, c, 1e-9, samples=50, seed=8)
    assert cert.status == "certified"
    cert_full = local_atoms_check(
        fr, identity_operator(SPEC, 2), atoms, c, 1e-9, samples=50, seed=9
    )
    assert cert_full.status == "falsified"


def test_local_atoms_requires_projection():
    rng = stream(96, 0)
    fr = random_frame(SPEC, 2, 3, rng)
    not_proj = identity_operator(SPEC, 2).scalar_mul(2.0)
    with pytest.raises(InputError):
        local_atoms_check(fr, not_proj, list(fr.members), SPEC.unit(), 1e-9)


# -- transforms ------------------------------------------------------------------------------------


def test_transform_identity_keeps_members():
    rng = stream(97, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    same = transform_frame(fr, identity_operator(SPEC, 2))
    for a, b in zip(same.members, fr.members):
        assert (a - b).norm() == 0.0


def test_conjugation_identity_holds():
    rng = stream(98, 0)
    for _ in range(5):
        fr = random_frame(SPEC, 2, 4, rng)
        k = random_operator(SPEC, 2, 2, rng)
        cert = conjugation_audit(fr, k, tol=1e-10)
        assert cert.status == "certified"
        assert cert.witness["matched"] == "KSK*"
        assert cert.witness["residual_KSK*"] <= 1e-10


def test_coisometry_preserves_optimal_bounds():
    rng = stream(99, 0)
    fr = random_frame(SPEC, 2, 5, rng)
    k = central_mult(random_central(SPEC, rng), 2)
    t = random_unitary(SPEC, 2, rng)
    cert = coisometry_invariance_audit(fr, t, k, tol=1e-8)
    assert cert.status == "certified"


def test_transform_kframe_bounds():
    rng = stream(100, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    k = fr.synthesis_op.compose(random_operator(SPEC, 2, 4, rng))
    a, b = scalar_bounds_with_margin(fr, k)
    l_op = random_operator(SPEC, 2, 2, rng)
    cert = transform_kframe_audit(fr, l_op, k, a, b, 1e-9)
    assert cert.status == "certified"


def test_lframe_proposition_with_pencil_scaling():
    # planted R(L) inside R(K) with invertible K: the K-frame is an
    # L-frame with lower bound sqrt(lambda) A
    rng = stream(101, 0)
    fr = random_frame(SPEC, 2, 5, rng)
    k = random_operator(SPEC, 2, 2, rng)  # invertible a.s.
    a, b = scalar_bounds_with_margin(fr, k)
    base = certify_kframe(fr, k, a, b, 1e-9)
    assert base.status == "certified"
    l_op = k.compose(random_operator(SPEC, 2, 2, rng))
    lam = pencil_lower_bound(l_op, k)
    assert lam > 0
    a_l = math.sqrt(lam) * a
    cert = certify_kframe(fr, l_op, a_l, b, 1e-9)
    assert cert.status == "certified"


# -- inverse-frame constructions ----------------------------------------------------------------------


def test_ks_inverse_with_frame_operator_returns_members():
    rng = stream(102, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    new_frame, cert = ks_inverse_frame(fr, fr.frame_op, 1e-9)
    assert cert.status == "certified"
    for h, m in zip(new_frame.members, fr.members):
        assert (h - m).norm() <= 1e-9 * max(1.0, m.norm())


def test_ks_inverse_identity_gives_canonical_dual():
    rng = stream(103, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    new_frame, cert = ks_inverse_frame(fr, identity_operator(SPEC, 2), 1e-9)
    assert cert.status == "certified"
    s_inv = fr.frame_op.inverse()
    for h, m in zip(new_frame.members, fr.members):
        assert (h - s_inv.apply(m)).norm() <= 1e-10 * max(1.0, h.norm())


def test_ks_inverse_random_k_reconstruction():
    rng = stream(104, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    k = random_operator(SPEC, 2, 2, rng)
    new_frame, cert = ks_inverse_frame(fr, k, 1e-9, samples=30, seed=11)
    assert cert.status == "certified"
    assert cert.witness["max_reconstruction_residual"] <= 1e-10


def test_ks_inverse_rejects_singular_frame_operator():
    rng = stream(105, 0)
    members = [
        ModuleVector(SPEC, [random_element(SPEC, rng), SPEC.zero()]) for _ in range(4)
    ]
    fr = FrameSeq(members)
    with pytest.raises(PreconditionError, match="not invertible"):
        ks_inverse_frame(fr, identity_operator(SPEC, 2), 1e-9)


# -- invariants -------------------------------------------------------------------------------------------


def test_norm_form_equivalence():
    rng = stream(106, 0)
    fr = random_frame(SPEC, 2, 5, rng)
    k = fr.synthesis_op.compose(random_operator(SPEC, 2, 5, rng))
    a, b = scalar_bounds_with_margin(fr, k)
    assert certify_kframe(fr, k, a, b, 1e-9).status == "certified"
    k_adj = k.adjoint()
    for _ in range(100):
        f = random_vector(SPEC, 2, rng)
        mid = fr.coefficient_gram(f).norm()
        lhs = k_adj.apply(f).module_mul(a).norm() ** 2
        rhs = f.module_mul(b).norm() ** 2
        assert lhs <= mid + 1e-9 * max(1.0, mid)
        assert mid <= rhs + 1e-9 * max(1.0, rhs)


def test_bound_monotonicity_under_member_addition():
    rng = stream(107, 0)
    for _ in range(10):
        fr = random_frame(SPEC, 2, 4, rng)
        k = random_operator(SPEC, 2, 2, rng)
        lam0, mu0 = optimal_scalar_bounds(fr, k)
        bigger = FrameSeq(list(fr.members) + [random_vector(SPEC, 2, rng)])
        lam1, mu1 = optimal_scalar_bounds(bigger, k)
        assert lam1 >= lam0 - 1e-9 * max(1.0, lam0)
        assert mu1 >= mu0 - 1e-9 * max(1.0, mu0)


def test_kframe_rejects_non_square_k():
    rng = stream(108, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    k_rect = random_operator(SPEC, 2, 3, rng)
    with pytest.raises(InputError):
        certify_kframe(fr, k_rect, SPEC.unit(), SPEC.unit(), 1e-9)
    with pytest.raises(InputError):
        atomic_coefficients(fr, k_rect, 1e-9)


def test_local_atoms_rejects_wrong_coefficient_count():
    rng = stream(109, 0)
    fr = random_frame(SPEC, 2, 4, rng)
    with pytest.raises(InputError, match="one coefficient representer"):
        local_atoms_check(
            fr, identity_operator(SPEC, 2), list(fr.members)[:-1], SPEC.unit(), 1e-9
        )


def test_bessel_near_boundary_is_inconclusive():
    # an upper bound short by 5 tol lands in the near-boundary band
    fr = coordinate_frame(SPEC, 2)
    b = math.sqrt(1 - 5e-9) * SPEC.unit()
    cert = certify_star_bessel(fr, b, 1e-9)
    assert cert.status == "inconclusive"
    clearly_bad = math.sqrt(1 - 5e-8) * SPEC.unit()
    assert certify_star_bessel(fr, clearly_bad, 1e-9).status == "falsified"
