"""The free Hilbert module A^n over a block direct-sum C*-algebra.

Vectors are n-tuples of algebra elements with the algebra-valued inner
product <f, g> = sum_k f_k (g_k)*, linear over the algebra in the first
argument.  Adjointable operators are matrices of algebra elements acting
by right multiplication, (Tf)_i = sum_j f_j t[j][i]; this is exactly the
form every A-linear map between free modules takes.

All positivity and norm decisions are made in a faithful complex
representation ("flattening"): A^n viewed as a complex space of dimension
n * sum(d_i^2) with inner product (f, g) = trace<f, g>.  The flattened
matrix of an operator is permutation-similar to a direct sum over blocks
of d_b copies of a reduced block matrix, so all spectral quantities are
computed per block without assembling the big matrix.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import DEFAULT_TOL, AlgebraSpec, AlgElement
from .errors import InputError, PreconditionError


class ModuleVector:
    """Element of A^n: an ordered tuple of n algebra elements."""

    __slots__ = ("spec", "entries")

    def __init__(self, spec: AlgebraSpec, entries: Sequence[AlgElement]):
        if not entries:
            raise InputError("rank-0 module vectors are rejected")
        for e in entries:
            if e.spec != spec:
                raise InputError("all vector entries must share the algebra spec")
        self.spec = spec
        self.entries = tuple(entries)

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        self._check_compatible(other)
        return ModuleVector(self.spec, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        self._check_compatible(other)
        return ModuleVector(self.spec, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "ModuleVector":
        return ModuleVector(self.spec, [-a for a in self.entries])

    def module_mul(self, a: AlgElement) -> "ModuleVector":
        """Left module action a . f = (a f_1, ..., a f_n)."""
        if a.spec != self.spec:
            raise InputError("algebra spec mismatch in module action")
        return ModuleVector(self.spec, [a * e for e in self.entries])

    def scalar_mul(self, z: complex) -> "ModuleVector":
        return ModuleVector(self.spec, [z * e for e in self.entries])

    def inner(self, other: "ModuleVector") -> AlgElement:
        """A-valued inner product <f, g> = sum_k f_k (g_k)*."""
        self._check_compatible(other)
        acc = self.spec.zero()
        for a, b in zip(self.entries, other.entries):
            acc = acc + a * b.adjoint()
        return acc

    def norm(self) -> float:
        """Module norm ||<f, f>||^(1/2)."""
        return float(np.sqrt(self.inner(self).norm()))

    def flat(self) -> np.ndarray:
        """Coordinates in the tracial complex representation."""
        return np.concatenate(
            [np.concatenate([blk.ravel() for blk in e.blocks]) for e in self.entries]
        )

    def _check_compatible(self, other: "ModuleVector") -> None:
        if self.spec != other.spec or self.rank != other.rank:
            raise InputError("module vectors must share spec and rank")

    def __repr__(self) -> str:
        return f"ModuleVector(rank={self.rank}, spec={self.spec.block_dims})"


def coordinate_vector(spec: AlgebraSpec, rank: int, slot: int) -> ModuleVector:
    """Unit coordinate vector: 1_A at the given slot, zero elsewhere."""
    if not 0 <= slot < rank:
        raise InputError(f"slot {slot} out of range for rank {rank}")
    entries = [spec.zero() for _ in range(rank)]
    entries[slot] = spec.unit()
    return ModuleVector(spec, entries)


def unflatten_vector(spec: AlgebraSpec, rank: int, x: np.ndarray) -> ModuleVector:
    """Inverse of ModuleVector.flat."""
    d2 = spec.total_dim
    if x.shape != (rank * d2,):
        raise InputError(f"flat vector has wrong length {x.shape}")
    entries = []
    for k in range(rank):
        seg = x[k * d2 : (k + 1) * d2]
        blocks, off = [], 0
        for d in spec.block_dims:
            blocks.append(seg[off : off + d * d].reshape(d, d))
            off += d * d
        entries.append(AlgElement(spec, blocks))
    return ModuleVector(spec, entries)


class ModuleOperator:
    """Adjointable A-linear map A^n -> A^m stored as an n x m grid of
    algebra elements t[j][i] (input index first)."""

    __slots__ = ("spec", "in_rank", "out_rank", "entries", "_blockmats")

    def __init__(self, spec: AlgebraSpec, entries: Sequence[Sequence[AlgElement]]):
        if not entries or not entries[0]:
            raise InputError("empty operator matrices are rejected")
        in_rank = len(entries)
        out_rank = len(entries[0])
        rows = []
        for row in entries:
            if len(row) != out_rank:
                raise InputError("ragged operator entry grid")
            for e in row:
                if e.spec != spec:
                    raise InputError("all operator entries must share the algebra spec")
            rows.append(tuple(row))
        self.spec = spec
        self.in_rank = in_rank
        self.out_rank = out_rank
        self.entries = tuple(rows)
        self._blockmats = None

    # -- representations ----------------------------------------------------

    def block_matrices(self) -> list[np.ndarray]:
        """Reduced complex matrix per algebra block.

        Block b gives a (out_rank*d_b) x (in_rank*d_b) matrix whose (i, j)
        sub-block is t[j][i]^T; the full flattening is d_b identical copies
        of it, so norms, spectra and pseudo-inverses are computed here.
        """
        if self._blockmats is None:
            mats = []
            for b, d in enumerate(self.spec.block_dims):
                m = np.zeros((self.out_rank * d, self.in_rank * d), dtype=complex)
                for j in range(self.in_rank):
                    for i in range(self.out_rank):
                        m[i * d : (i + 1) * d, j * d : (j + 1) * d] = (
                            self.entries[j][i].blocks[b].T
                        )
                mats.append(m)
            self._blockmats = mats
        return self._blockmats

    def flatten(self) -> np.ndarray:
        """Full complex matrix of f -> Tf on the tracial representation.

        Rows/columns are indexed by (slot, block, row, col) of the vector
        coordinates; the result satisfies flatten(T) @ f.flat() = (Tf).flat().
        """
        d2 = self.spec.total_dim
        out = np.zeros((self.out_rank * d2, self.in_rank * d2), dtype=complex)
        offs = []
        off = 0
        for d in self.spec.block_dims:
            offs.append(off)
            off += d * d
        for j in range(self.in_rank):
            for i in range(self.out_rank):
                for b, d in enumerate(self.spec.block_dims):
                    blk = self.entries[j][i].blocks[b]
                    sub = np.kron(np.eye(d), blk.T)
                    r0 = i * d2 + offs[b]
                    c0 = j * d2 + offs[b]
                    out[r0 : r0 + d * d, c0 : c0 + d * d] = sub
        return out

    # -- algebra of operators -------------------------------------------------

    def apply(self, f: ModuleVector) -> ModuleVector:
        if f.spec != self.spec or f.rank != self.in_rank:
            raise InputError("operator/vector shape mismatch")
        out_entries = [[None] * self.spec.n_blocks for _ in range(self.out_rank)]
        for b, d in enumerate(self.spec.block_dims):
            fb = np.vstack([e.blocks[b].T for e in f.entries])
            gb = self.block_matrices()[b] @ fb
            for i in range(self.out_rank):
                out_entries[i][b] = gb[i * d : (i + 1) * d, :].T
        return ModuleVector(
            self.spec, [AlgElement(self.spec, blocks) for blocks in out_entries]
        )

    def adjoint(self) -> "ModuleOperator":
        grid = [
            [self.entries[j][i].adjoint() for j in range(self.in_rank)]
            for i in range(self.out_rank)
        ]
        return ModuleOperator(self.spec, grid)

    def compose(self, other: "ModuleOperator") -> "ModuleOperator":
        """self after other (matrix product of the flattenings)."""
        if other.spec != self.spec or other.out_rank != self.in_rank:
            raise InputError("operator composition shape mismatch")
        mats = [
            sm @ om for sm, om in zip(self.block_matrices(), other.block_matrices())
        ]
        return from_block_matrices(self.spec, other.in_rank, self.out_rank, mats)

    def __add__(self, other: "ModuleOperator") -> "ModuleOperator":
        self._check_same_shape(other)
        grid = [
            [self.entries[j][i] + other.entries[j][i] for i in range(self.out_rank)]
            for j in range(self.in_rank)
        ]
        return ModuleOperator(self.spec, grid)

    def __sub__(self, other: "ModuleOperator") -> "ModuleOperator":
        self._check_same_shape(other)
        grid = [
            [self.entries[j][i] - other.entries[j][i] for i in range(self.out_rank)]
            for j in range(self.in_rank)
        ]
        return ModuleOperator(self.spec, grid)

    def scalar_mul(self, z: complex) -> "ModuleOperator":
        grid = [
            [z * self.entries[j][i] for i in range(self.out_rank)]
            for j in range(self.in_rank)
        ]
        return ModuleOperator(self.spec, grid)

    def _check_same_shape(self, other: "ModuleOperator") -> None:
        if (
            other.spec != self.spec
            or other.in_rank != self.in_rank
            or other.out_rank != self.out_rank
        ):
            raise InputError("operator shape mismatch")

    # -- spectral queries -----------------------------------------------------

    def norm(self) -> float:
        """Operator norm: largest singular value of the flattening."""
        return max(
            float(np.linalg.norm(m, ord=2)) for m in self.block_matrices()
        )

    def herm_eigs(self) -> np.ndarray:
        """Eigenvalues of the Hermitian part of the reduced block matrices.

        For a Hermitian operator these are the flattening's eigenvalues with
        multiplicities divided by d_b per block.
        """
        if self.in_rank != self.out_rank:
            raise InputError("eigenvalues need a square operator")
        vals = [np.linalg.eigvalsh(0.5 * (m + m.conj().T)) for m in self.block_matrices()]
        return np.concatenate(vals)

    def min_herm_eig(self) -> float:
        return float(self.herm_eigs().min())

    def is_positive(self, tol: float = DEFAULT_TOL) -> bool:
        """Positivity as an adjointable operator, decided in the flattening.

        Equivalent to <Tf, f> >= 0 in A for all f because the tracial
        representation is a faithful *-homomorphism.
        """
        if self.in_rank != self.out_rank:
            raise InputError("positivity needs a square operator")
        scale = max(1.0, self.norm())
        if (self - self.adjoint()).norm() > tol * scale:
            return False
        return self.min_herm_eig() >= -tol * scale

    def is_projection(self, tol: float = DEFAULT_TOL) -> bool:
        if self.in_rank != self.out_rank:
            raise InputError("projections must be square")
        idem = (self.compose(self) - self).norm()
        herm = (self - self.adjoint()).norm()
        return idem <= tol and herm <= tol

    def inverse(self) -> "ModuleOperator":
        """Two-sided inverse for square invertible operators."""
        if self.in_rank != self.out_rank:
            raise InputError("inverse needs a square operator")
        try:
            mats = [np.linalg.inv(m) for m in self.block_matrices()]
        except np.linalg.LinAlgError as exc:
            raise PreconditionError(f"operator is not invertible: {exc}") from exc
        return from_block_matrices(self.spec, self.in_rank, self.out_rank, mats)

    def negative_witness(self) -> tuple[float, ModuleVector]:
        """Most negative Hermitian-part eigenvalue with a module vector
        witnessing it: trace<Tf, f> equals the returned eigenvalue."""
        best = None
        for b, (d, m) in enumerate(zip(self.spec.block_dims, self.block_matrices())):
            w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
            if best is None or w[0] < best[0]:
                best = (float(w[0]), b, v[:, 0])
        lam, b, vec = best
        d = self.spec.block_dims[b]
        entries = []
        for j in range(self.in_rank):
            blocks = [np.zeros((dd, dd), dtype=complex) for dd in self.spec.block_dims]
            sl = np.zeros((d, d), dtype=complex)
            sl[:, 0] = vec[j * d : (j + 1) * d]
            blocks[b] = sl.T
            entries.append(AlgElement(self.spec, blocks))
        return lam, ModuleVector(self.spec, entries)

    def __repr__(self) -> str:
        return (
            f"ModuleOperator({self.in_rank}->{self.out_rank}, "
            f"spec={self.spec.block_dims})"
        )


def from_block_matrices(
    spec: AlgebraSpec, in_rank: int, out_rank: int, mats: Sequence[np.ndarray]
) -> ModuleOperator:
    """Rebuild an operator from its reduced per-block matrices."""
    if len(mats) != spec.n_blocks:
        raise InputError("need one reduced matrix per algebra block")
    grid = [[None] * out_rank for _ in range(in_rank)]
    blocks_grid = [[[] for _ in range(out_rank)] for _ in range(in_rank)]
    for b, (d, m) in enumerate(zip(spec.block_dims, mats)):
        if m.shape != (out_rank * d, in_rank * d):
            raise InputError(f"reduced matrix {b} has wrong shape {m.shape}")
        for j in range(in_rank):
            for i in range(out_rank):
                blocks_grid[j][i].append(m[i * d : (i + 1) * d, j * d : (j + 1) * d].T)
    for j in range(in_rank):
        for i in range(out_rank):
            grid[j][i] = AlgElement(spec, blocks_grid[j][i])
    return ModuleOperator(spec, grid)


def identity_operator(spec: AlgebraSpec, rank: int) -> ModuleOperator:
    grid = [
        [spec.unit() if i == j else spec.zero() for i in range(rank)]
        for j in range(rank)
    ]
    return ModuleOperator(spec, grid)


def zero_operator(spec: AlgebraSpec, in_rank: int, out_rank: int) -> ModuleOperator:
    grid = [[spec.zero() for _ in range(out_rank)] for _ in range(in_rank)]
    return ModuleOperator(spec, grid)


def central_mult(a: AlgElement, rank: int, tol: float = DEFAULT_TOL) -> ModuleOperator:
    """Multiplication f -> a.f as an adjointable operator; needs central a.

    Left multiplication by a non-central element is not A-linear for the
    right-multiplication operator representation, so it is rejected.
    """
    if not a.is_central(tol):
        raise PreconditionError("central_mult needs a central element")
    grid = [
        [a if i == j else a.spec.zero() for i in range(rank)] for j in range(rank)
    ]
    return ModuleOperator(a.spec, grid)
