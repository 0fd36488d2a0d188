"""Test states and wire-pair projectors used by the discrimination scenarios.

States are plain complex vectors in the computational basis with qubit 0 as
the leftmost factor. Operators that act on a chosen wire pair are always
built on adjacent leading wires and then moved into place with
``permute_qubits``, so there is exactly one embedding code path to get wrong.
"""

from __future__ import annotations

import numpy as np

from . import linalg

NORM_TOL = 1e-12

# Annotation aliases. A PureState is a unit-norm complex vector of length
# 2**n; a DensityMatrix is Hermitian, unit trace, eigenvalues >= -1e-10.
# check_density and assert_normalized enforce these at the boundaries.
PureState = np.ndarray
DensityMatrix = np.ndarray

_BELL = {
    "psi-": np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2.0),
    "psi+": np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2.0),
    "phi-": np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2.0),
    "phi+": np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2.0),
}


def ket(bits: str) -> np.ndarray:
    """Computational basis state from a bit string, e.g. ket("010")."""
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"expected a nonempty string of 0s and 1s, got {bits!r}")
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def density(psi: np.ndarray) -> np.ndarray:
    """Rank-one density matrix |psi><psi|."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def assert_normalized(psi: np.ndarray, tol: float = NORM_TOL) -> None:
    nrm = float(np.linalg.norm(psi))
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"state norm {nrm} deviates from 1 by more than {tol}")


def check_density(
    rho: np.ndarray,
    herm_tol: float = 1e-12,
    trace_tol: float = 1e-12,
    eig_floor: float = -1e-10,
) -> None:
    """Validate a density matrix: Hermitian, unit trace, no real negativity.

    Raises ValueError describing the first violated property.
    """
    rho = np.asarray(rho)
    herr = linalg.hermiticity_error(rho)
    if herr > herm_tol:
        raise ValueError(f"density matrix not Hermitian (deviation {herr:.3g})")
    terr = abs(complex(np.trace(rho)) - 1.0)
    if terr > trace_tol:
        raise ValueError(f"density matrix trace off by {terr:.3g}")
    lam_min = float(np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)))
    if lam_min < eig_floor:
        raise ValueError(f"density matrix has eigenvalue {lam_min:.3g} below {eig_floor}")


def bell(kind: str) -> np.ndarray:
    """One of the four Bell states: "psi-", "psi+", "phi-", "phi+"."""
    if kind not in _BELL:
        raise ValueError(f"unknown Bell state {kind!r}; expected one of {sorted(_BELL)}")
    return _BELL[kind].copy()


def bell_combination(a: complex, b: complex, c: complex, d: complex) -> np.ndarray:
    """Two-wire state a|psi-> + b|psi+> + c|phi-> + d|phi+>.

    The coefficients must already be normalized; a norm error above 1e-9 is
    rejected rather than silently rescaled.
    """
    total = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d) ** 2
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"coefficient norm squared is {total}, not 1")
    return a * _BELL["psi-"] + b * _BELL["psi+"] + c * _BELL["phi-"] + d * _BELL["phi+"]


def embed_operator(op: np.ndarray, wires, n: int) -> np.ndarray:
    """Embed an operator acting on the given wires into an n-wire register.

    Parameters
    ----------
    op : ndarray
        Operator on len(wires) qubits; its factor k acts on wires[k].
    wires : sequence of int
        Distinct target wires.
    n : int
        Total register size.
    """
    wires = tuple(int(w) for w in wires)
    k = len(wires)
    if len(set(wires)) != k or any(w < 0 or w >= n for w in wires):
        raise ValueError(f"wires {wires} are not distinct wires of a {n}-qubit register")
    op = np.asarray(op, dtype=complex)
    if op.shape != (2**k, 2**k):
        raise ValueError(f"operator shape {op.shape} does not match {k} wires")
    full = op if n == k else np.kron(op, np.eye(2 ** (n - k), dtype=complex))
    perm = [-1] * n
    for pos, w in enumerate(wires):
        perm[w] = pos
    rest = iter(range(k, n))
    perm = [p if p >= 0 else next(rest) for p in perm]
    return linalg.permute_qubits(full, perm)


def sym_antisym_projectors(pair, n: int = 2):
    """Projectors onto the symmetric/antisymmetric sectors of one wire pair.

    Returns the tuple (P_sym, P_anti) acting on the full n-wire register.
    P_anti is the embedded singlet projector, rank 2**(n-2); P_sym is its
    complement (triplet sector tensor everything else), so the two always sum
    to the identity.
    """
    i, j = (int(pair[0]), int(pair[1]))
    if i == j:
        raise ValueError("pair wires must differ")
    p_anti = embed_operator(density(_BELL["psi-"]), (i, j), n)
    p_sym = np.eye(2**n, dtype=complex) - p_anti
    return p_sym, p_anti


def _four_qubit_raw() -> np.ndarray:
    # Wires (A, B, C, D) = (0, 1, 2, 3). Branch one: singlet on AC, B=|0>,
    # D=|0>; branch two: singlet on BC, A=|0>, D=|1>. The branches share no
    # basis state, so the 1/sqrt(2) prefactor already normalizes the sum.
    b0 = np.kron(bell("psi-"), ket("00"))  # order (A, C, B, D)
    b0 = linalg.permute_qubits(b0, (0, 2, 1, 3))
    b1 = np.kron(bell("psi-"), ket("01"))  # order (B, C, A, D)
    b1 = linalg.permute_qubits(b1, (2, 0, 1, 3))
    return (b0 + b1) / np.sqrt(2.0)


def four_qubit_test_state() -> np.ndarray:
    """Four-wire input that tags which pair holds a singlet on wire D.

    Equals (|0010> - |1000> + |0011> - |0101>)/2 in the (A, B, C, D) basis.
    """
    raw = _four_qubit_raw()
    psi = raw / np.linalg.norm(raw)
    assert_normalized(psi)
    return psi


def four_qubit_norm_factor() -> float:
    """Norm of the raw two-branch superposition before rescaling.

    The branches are orthogonal, so this is exactly 1; it is recorded in run
    metadata rather than assumed.
    """
    return float(np.linalg.norm(_four_qubit_raw()))


def approx_double_singlet_3q() -> np.ndarray:
    """Three-wire state that is 3/4-close to a singlet on both AC and BC.

    Amplitudes: (|100> + |010> + |011> + |101>)/(2 sqrt 3)
    minus (|001> + |110>)/sqrt(3).
    """
    v = np.zeros(8, dtype=complex)
    s = 1.0 / (2.0 * np.sqrt(3.0))
    t = 1.0 / np.sqrt(3.0)
    for b in ("100", "010", "011", "101"):
        v[int(b, 2)] = s
    for b in ("001", "110"):
        v[int(b, 2)] = -t
    assert_normalized(v)
    return v


def double_singlet(pairs=((0, 2), (1, 3)), n: int = 4) -> np.ndarray:
    """Product of two singlets on the named wire pairs; leftover wires get |0>.

    With the default pairing ((0, 2), (1, 3)) on four wires this is the
    singlet on AC times the singlet on BD.
    """
    (i, j), (k, l) = pairs
    wires = (int(i), int(j), int(k), int(l))
    if len(set(wires)) != 4:
        raise ValueError(f"pairs {pairs} reuse a wire")
    if n < 4 or any(w < 0 or w >= n for w in wires):
        raise ValueError(f"pairs {pairs} do not fit a {n}-qubit register")
    core = np.kron(bell("psi-"), bell("psi-"))
    if n > 4:
        core = np.kron(core, ket("0" * (n - 4)))
    perm = [-1] * n
    for pos, w in enumerate(wires):
        perm[w] = pos
    rest = iter(range(4, n))
    perm = [p if p >= 0 else next(rest) for p in perm]
    return linalg.permute_qubits(core, perm)
