"""Two-qubit density-matrix toolbox: Bell criterion and separability test.

Works on 4x4 density operators over the ordered product basis

    (|e,0>, |e,1>, |g,0>, |g,1>)       atom ⊗ field

with the Pauli convention fixed once: for the atom σ_z|e> = +|e>,
σ_z|g> = -|g>; for the field σ_z|0> = +|0>, σ_z|1> = -|1>; σ₁, σ₂, σ₃ are
the standard x, y, z matrices.  The scalar criteria (Bell parameter M and
the partial-transpose spectrum) are convention-invariant, but the
intermediate correlation entries are not, and this choice makes the golden
values deterministic.

Tracing the full atom+field+translation state over the translational
variables leaves the one-parameter family

    ρ(c) = 1/2 [ |χ⁺><χ⁺| + |χ⁻><χ⁻| + ( c |χ⁺><χ⁻| + h.c. ) ],

where c = ⟨φ⁻|φ⁺⟩ is the branch overlap and χ± = (|e,0> ± |g,1>)/√2.  For
this family M(ρ) = 1 + (Im c)² and the minimum partial-transpose eigenvalue
is -|Im c|/2, so the state is separable exactly when Im c = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import eigvalsh_hermitian, eigvalsh_sym

BASIS_LABELS = ("e0", "e1", "g0", "g1")

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_IMAG_TOL = 1e-12
#: strict CHSH-violation margin: M must exceed 1 by more than this
VIOLATION_MARGIN = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

# kron(σ_n, σ_m) stacked as [n, m, 4, 4] for the correlation traces
_PAULI_KRON = np.array([[np.kron(sn, sm) for sm in _PAULIS] for sn in _PAULIS])

# Interaction "spin" operators restricted to the one-excitation sector
# (spanned by |e,0> and |g,1>): entries are 0, ±1/2, ±i/2 exactly, and the
# spin-1/2 algebra [μ_x, μ_y] = iμ_z (and cyclic) holds entrywise exactly.
MU_X = np.zeros((4, 4), dtype=complex)
MU_X[0, 3] = MU_X[3, 0] = 0.5
MU_Y = np.zeros((4, 4), dtype=complex)
MU_Y[0, 3] = -0.5j
MU_Y[3, 0] = 0.5j
MU_Z = np.zeros((4, 4), dtype=complex)
MU_Z[0, 0] = 0.5
MU_Z[3, 3] = -0.5


@dataclass(frozen=True)
class BellVerdict:
    """Horodecki criterion result: CHSH violated iff m_value > 1."""

    m_value: float
    violates_chsh: bool
    lambda1: float
    lambda2: float


@dataclass(frozen=True)
class SeparabilityVerdict:
    """Partial-transpose test result: separable iff the PT spectrum is non-negative."""

    min_pt_eigenvalue: float
    separable: bool


class TwoQubitDensity:
    """Validated 4x4 density operator over the (e0, e1, g0, g1) basis."""

    def __init__(self, matrix):
        m = np.array(matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got shape {m.shape}")
        problems = self._violations(m)
        if problems:
            raise ValueError("invalid density matrix: " + "; ".join(problems))
        self.matrix = m
        self.matrix.setflags(write=False)

    @staticmethod
    def _violations(m: np.ndarray) -> list[str]:
        problems = []
        herm = np.abs(m - m.conj().T).max()
        if herm > HERMITICITY_TOL:
            problems.append(f"not Hermitian (max |ρ - ρ†| = {herm:.3e})")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            problems.append(f"trace = {tr:.15g}, expected 1")
        if not problems:
            min_eig = eigvalsh_hermitian(0.5 * (m + m.conj().T))[0]
            if min_eig < -PSD_TOL:
                problems.append(f"not positive semidefinite (min eigenvalue = {min_eig:.3e})")
        return problems

    def __repr__(self):
        return f"TwoQubitDensity({self.matrix!r})"


def density_family(c) -> np.ndarray:
    """ρ(c) matrices for an array of branch overlaps, shape (..., 4, 4).

    Vectorized builder without the validation wrapper; the single-overlap
    entry point is :func:`reduced_density`.
    """
    c = np.asarray(c, dtype=complex)
    if np.any(np.abs(c) > 1.0 + 1e-12):
        raise ValueError("branch overlap modulus exceeds 1")
    rho = np.zeros(c.shape + (4, 4), dtype=complex)
    rho[..., 0, 0] = (1.0 + c.real) / 2.0
    rho[..., 3, 3] = (1.0 - c.real) / 2.0
    rho[..., 0, 3] = -0.5j * c.imag
    rho[..., 3, 0] = +0.5j * c.imag
    return rho


def reduced_density(overlap: complex) -> TwoQubitDensity:
    """Atom-field density operator left after tracing out the translation.

    Occupies the one-excitation block only: populations (1 ± Re c)/2 on
    |e,0> and |g,1>, coherences ∓(i/2) Im c between them.
    """
    return TwoQubitDensity(density_family(complex(overlap)))


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, TwoQubitDensity):
        return rho.matrix
    return TwoQubitDensity(rho).matrix


def pauli_correlation_matrix(rho) -> np.ndarray:
    """T with entries t[n, m] = tr(ρ σ_n ⊗ σ_m), a real 3x3 matrix."""
    m = _as_matrix(rho)
    t = np.einsum("ij,nmji->nm", m, _PAULI_KRON)
    worst = np.abs(t.imag).max()
    if worst > TRACE_IMAG_TOL:
        raise ValueError(f"correlation trace has imaginary residue {worst:.3e}")
    t = t.real
    if np.any(np.abs(t) > 1.0 + 1e-12):
        raise ValueError("correlation entry outside [-1, 1]")
    return t


def _pauli_t_batch(mats: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,nmji->...nm", mats, _PAULI_KRON).real


def horodecki_m(rho) -> BellVerdict:
    """Bell criterion: M(ρ) = sum of the two largest eigenvalues of TᵀT.

    Some CHSH inequality is violated iff M > 1 (strictly, beyond a 1e-10
    margin so that states touching M = 1 are never flagged by rounding).
    """
    t = pauli_correlation_matrix(rho)
    u = t.T @ t
    ev = eigvalsh_sym(u)
    lam1, lam2 = float(ev[-1]), float(ev[-2])
    m_value = lam1 + lam2
    return BellVerdict(
        m_value=m_value,
        violates_chsh=bool(m_value > 1.0 + VIOLATION_MARGIN),
        lambda1=lam1,
        lambda2=lam2,
    )


def horodecki_m_values(mats) -> np.ndarray:
    """Batched M(ρ) over stacked density matrices, shape (...,)."""
    t = _pauli_t_batch(np.asarray(mats, dtype=complex))
    u = np.einsum("...ji,...jk->...ik", t, t)
    ev = eigvalsh_sym(u)
    return ev[..., -1] + ev[..., -2]


def m_closed_form(overlap: complex) -> float:
    """M for the traced atom-field family: 1 + (Im c)²."""
    c = complex(overlap)
    if abs(c) > 1.0 + 1e-12:
        raise ValueError("branch overlap modulus exceeds 1")
    return 1.0 + c.imag**2


def partial_transpose(rho) -> np.ndarray:
    """Transpose the field indices: σ[a f, a' f'] = ρ[a f', a' f].

    Accepts a TwoQubitDensity or stacked (..., 4, 4) matrices; the result is
    Hermitian with unit trace but possibly indefinite.
    """
    m = rho.matrix if isinstance(rho, TwoQubitDensity) else np.asarray(rho, dtype=complex)
    r = m.reshape(m.shape[:-2] + (2, 2, 2, 2))
    perm = tuple(range(r.ndim - 4)) + tuple(i + r.ndim - 4 for i in (0, 3, 2, 1))
    return r.transpose(perm).reshape(m.shape)


def min_pt_eigenvalues(mats) -> np.ndarray:
    """Batched minimum partial-transpose eigenvalue, shape (...,)."""
    return eigvalsh_hermitian(partial_transpose(mats))[..., 0]


def separability_test(rho) -> SeparabilityVerdict:
    """Peres test: ρ is separable iff the partial transpose has no negative eigenvalue.

    For the traced atom-field family the minimum eigenvalue is -|Im c|/2
    exactly, so separability holds only where Im c vanishes.
    """
    m = _as_matrix(rho)
    min_eig = float(eigvalsh_hermitian(partial_transpose(m))[0])
    return SeparabilityVerdict(
        min_pt_eigenvalue=min_eig,
        separable=bool(min_eig >= -PSD_TOL),
    )


def write_density_csv(rho, stream) -> None:
    """Write a density matrix as 4 rows of re,im pairs (16 complex entries, row-major)."""
    m = _as_matrix(rho)
    own = isinstance(stream, (str, bytes))
    fh = open(stream, "w", encoding="utf-8") if own else stream
    try:
        for row in m:
            fh.write(",".join(f"{z.real:.17g},{z.imag:.17g}" for z in row) + "\n")
    finally:
        if own:
            fh.close()


def read_density_csv(stream) -> TwoQubitDensity:
    """Read the format produced by :func:`write_density_csv`."""
    own = isinstance(stream, (str, bytes))
    fh = open(stream, encoding="utf-8") if own else stream
    try:
        rows = []
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            parts = [float(x) for x in line.split(",")]
            if len(parts) != 8:
                raise ValueError(f"expected 8 numbers (4 re,im pairs) per row, got {len(parts)}")
            rows.append([complex(parts[2 * i], parts[2 * i + 1]) for i in range(4)])
    finally:
        if own:
            fh.close()
    if len(rows) != 4:
        raise ValueError(f"expected 4 rows, got {len(rows)}")
    return TwoQubitDensity(np.array(rows))
