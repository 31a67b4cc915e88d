"""Dense statevector over the full register and its primitive updates.

Amplitudes live in one contiguous complex128 array of length
2**layout.total, indexed so that qubit q carries bit 2**(total-1-q).
Gate and projector application mutate the array in place and never touch
more memory than the affected subspace; post-selection returns a fresh
vector.  A single StateVector must only ever be written from one thread,
but distinct vectors are independent.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, EntanglementError
from .gates import MCX, Gate, Hadamard, PauliX, PhaseK
from .layout import RegisterLayout

Array = np.ndarray

DEFAULT_MAX_QUBITS = 26

_SQRT_HALF = 2.0 ** -0.5


def _spread_indices(total: int, fixed: Sequence[tuple[int, int]]) -> Array:
    """All basis indices whose fixed bit positions hold the given bits.

    ``fixed`` pairs are (bit position, bit value).  The remaining
    positions are enumerated by spreading a counter across them, so cost
    scales with the subspace size, not with 2**total.
    """
    taken = 0
    base = 0
    for pos, bit in fixed:
        taken |= 1 << pos
        base |= bit << pos
    free = [p for p in range(total) if not (taken >> p) & 1]
    out = np.full(1 << len(free), base, dtype=np.int64)
    counter = np.arange(1 << len(free), dtype=np.int64)
    for i, pos in enumerate(free):
        out |= ((counter >> i) & 1) << pos
    return out


class StateVector:
    """Dense amplitude vector over a :class:`RegisterLayout`."""

    __slots__ = ("layout", "amplitudes")

    def __init__(self, layout: RegisterLayout, amplitudes: Array):
        self.layout = layout
        self.amplitudes = amplitudes

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def ground(cls, layout: RegisterLayout, max_qubits: int | None = None) -> "StateVector":
        """All-zeros basis state.

        Raises
        ------
        CapacityError
            If the register needs more than 2**max_qubits amplitudes
            (default cap 2**26).
        """
        cap = DEFAULT_MAX_QUBITS if max_qubits is None else int(max_qubits)
        if layout.total > cap:
            raise CapacityError(
                f"register needs {layout.total} qubits (2**{layout.total} amplitudes) "
                f"but the cap is {cap} qubits; raise the cap explicitly to proceed"
            )
        amplitudes = np.zeros(1 << layout.total, dtype=np.complex128)
        amplitudes[0] = 1.0
        return cls(layout, amplitudes)

    @classmethod
    def from_amplitudes(cls, layout: RegisterLayout, values: Iterable[complex]) -> "StateVector":
        """Copy an explicit amplitude vector (length must be 2**total)."""
        amplitudes = np.asarray(values, dtype=np.complex128).copy()
        if amplitudes.shape != (1 << layout.total,):
            raise ValueError(
                f"amplitude vector must have length 2**{layout.total}, "
                f"got shape {amplitudes.shape}"
            )
        return cls(layout, amplitudes)

    def copy(self) -> "StateVector":
        return StateVector(self.layout, self.amplitudes.copy())

    # ------------------------------------------------------------------
    # inspection

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probability(self, pattern: Iterable[tuple[int, int]]) -> float:
        """Squared norm of the components matching a (qubit, bit) pattern."""
        fixed = self._fixed(pattern)
        matched = self.amplitudes[_spread_indices(self.layout.total, fixed)]
        return float(np.real(np.vdot(matched, matched)))

    # ------------------------------------------------------------------
    # unitary updates (in place)

    def apply(self, gate: Gate) -> "StateVector":
        """Apply one gate in place and return self."""
        if isinstance(gate, Hadamard):
            self._hadamard(gate.target)
        elif isinstance(gate, PhaseK):
            self._phase(gate.target, gate.k)
        elif isinstance(gate, PauliX):
            self._mcx((), gate.target)
        elif isinstance(gate, MCX):
            self._mcx(gate.controls, gate.target)
        else:
            raise TypeError(f"not a gate: {gate!r}")
        return self

    def apply_all(self, gates: Iterable[Gate]) -> "StateVector":
        for gate in gates:
            self.apply(gate)
        return self

    def apply_projector_terms(
        self, terms: Sequence[tuple[Sequence[tuple[int, int]], Sequence[int]]]
    ) -> "StateVector":
        """Apply a sum of (projector pattern, X targets) terms in place.

        Each term flips the listed target qubits on exactly the basis
        states matching its pattern; basis states matching no pattern
        pass through unchanged (the identity complement is implicit).
        Patterns must be pairwise orthogonal: every pair has to disagree
        on at least one shared qubit.  An unconditional term (empty
        pattern) is allowed only on its own.

        This is the gate-free path used to cross-check compiled circuits.
        """
        cleaned: list[tuple[dict[int, int], list[tuple[int, int]], int]] = []
        for pattern, targets in terms:
            fixed = self._fixed(pattern)
            required = dict(fixed)
            target_mask = 0
            for qubit in targets:
                pos = self.layout.total - 1 - qubit
                self._check_qubit(qubit)
                if pos in required:
                    raise ValueError(
                        f"projector term targets qubit {qubit} fixed by its own pattern"
                    )
                bit = 1 << pos
                if target_mask & bit:
                    raise ValueError(f"duplicate target qubit {qubit}")
                target_mask |= bit
            cleaned.append((required, fixed, target_mask))

        for i in range(len(cleaned)):
            for j in range(i + 1, len(cleaned)):
                a, b = cleaned[i][0], cleaned[j][0]
                if not any(pos in b and b[pos] != bit for pos, bit in a.items()):
                    raise ValueError(
                        "projector patterns overlap; terms must be mutually orthogonal"
                    )

        amps = self.amplitudes
        for _, fixed, target_mask in cleaned:
            if target_mask == 0:
                continue
            matched = _spread_indices(self.layout.total, fixed)
            partner = matched ^ target_mask
            src = matched[matched < partner]
            dst = src ^ target_mask
            swapped = amps[src]
            amps[src] = amps[dst]
            amps[dst] = swapped
        return self

    # ------------------------------------------------------------------
    # non-unitary

    def postselect(
        self, pattern: Iterable[tuple[int, int]]
    ) -> tuple["StateVector", float]:
        """Project onto a (qubit, bit) pattern and renormalize.

        Returns the renormalized projection and the pre-renormalization
        squared norm (the probability a plain measurement would have
        landed on this branch).

        Raises
        ------
        ValueError
            If the pattern is empty or the projection has no support.
        """
        fixed = self._fixed(pattern)
        if not fixed:
            raise ValueError("post-selection pattern is empty")
        matched = _spread_indices(self.layout.total, fixed)
        kept = self.amplitudes[matched]
        probability = float(np.real(np.vdot(kept, kept)))
        if probability == 0.0:
            raise ValueError("post-selection pattern has no support in the state")
        out = np.zeros_like(self.amplitudes)
        out[matched] = kept / np.sqrt(probability)
        return StateVector(self.layout, out), probability

    def extract(self, qubits: Sequence[int], tol: float = 1e-10) -> Array:
        """Read the state of a subsystem that must be unentangled.

        Parameters
        ----------
        qubits
            Ordered qubit list; the first named qubit becomes the most
            significant bit of the returned vector's index.
        tol
            Largest tolerated relative weight outside the principal
            component of the subsystem Gram matrix.

        Returns
        -------
        Normalized complex vector of length 2**len(qubits), defined up
        to a global phase.

        Raises
        ------
        EntanglementError
            If the named qubits are entangled with the rest of the
            register beyond ``tol``.
        """
        picked = [int(q) for q in qubits]
        if not picked:
            raise ValueError("need at least one qubit to extract")
        if len(set(picked)) != len(picked):
            raise ValueError(f"duplicate qubits in {qubits!r}")
        for qubit in picked:
            self._check_qubit(qubit)

        total = self.layout.total
        rest = [q for q in range(total) if q not in set(picked)]
        tensor = self.amplitudes.reshape((2,) * total)
        matrix = np.transpose(tensor, picked + rest).reshape(1 << len(picked), -1)
        if not rest:
            vec = matrix.reshape(-1)
            scale = np.linalg.norm(vec)
            if scale == 0.0:
                raise ValueError("cannot extract from the zero vector")
            return vec / scale

        gram = matrix @ matrix.conj().T
        trace = float(np.real(np.trace(gram)))
        if trace == 0.0:
            raise ValueError("cannot extract from the zero vector")
        evals, evecs = np.linalg.eigh(gram)
        residual = 1.0 - float(evals[-1]) / trace
        if residual > tol:
            raise EntanglementError(
                f"qubits {picked} are entangled with the rest of the register "
                f"(residual weight {residual:.3e} exceeds {tol:.1e})"
            )
        return np.asarray(evecs[:, -1], dtype=np.complex128)

    # ------------------------------------------------------------------
    # internals

    def _check_qubit(self, qubit: int) -> None:
        if not 0 <= qubit < self.layout.total:
            raise ValueError(
                f"qubit {qubit} outside register of {self.layout.total} qubits"
            )

    def _fixed(self, pattern: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
        fixed: list[tuple[int, int]] = []
        seen: set[int] = set()
        for qubit, bit in pattern:
            self._check_qubit(qubit)
            if bit not in (0, 1):
                raise ValueError(f"pattern bit for qubit {qubit} must be 0 or 1")
            if qubit in seen:
                raise ValueError(f"qubit {qubit} appears twice in pattern")
            seen.add(qubit)
            fixed.append((self.layout.total - 1 - qubit, bit))
        return fixed

    def _hadamard(self, target: int) -> None:
        self._check_qubit(target)
        pos = self.layout.total - 1 - target
        view = self.amplitudes.reshape(-1, 2, 1 << pos)
        low = view[:, 0, :]
        high = view[:, 1, :]
        mixed = (low + high) * _SQRT_HALF
        view[:, 1, :] = (low - high) * _SQRT_HALF
        view[:, 0, :] = mixed

    def _phase(self, target: int, k: int) -> None:
        self._check_qubit(target)
        pos = self.layout.total - 1 - target
        factor = np.exp(2j * np.pi / (1 << k))
        self.amplitudes.reshape(-1, 2, 1 << pos)[:, 1, :] *= factor

    def _mcx(self, controls: Sequence[tuple[int, int]], target: int) -> None:
        self._check_qubit(target)
        target_pos = self.layout.total - 1 - target
        fixed = self._fixed(controls)
        fixed.append((target_pos, 0))
        src = _spread_indices(self.layout.total, fixed)
        dst = src | (1 << target_pos)
        amps = self.amplitudes
        swapped = amps[src]
        amps[src] = amps[dst]
        amps[dst] = swapped


def align_phase(vector: Array, reference: Array) -> Array:
    """Rotate ``vector`` by the global phase matching ``reference``.

    The phase is fixed at the reference's largest-magnitude component.
    If the vector vanishes there, no rotation can help and a copy is
    returned unchanged.
    """
    vector = np.asarray(vector, dtype=np.complex128)
    reference = np.asarray(reference, dtype=np.complex128)
    if vector.shape != reference.shape:
        raise ValueError(f"shape mismatch: {vector.shape} vs {reference.shape}")
    pivot = int(np.argmax(np.abs(reference)))
    rotation = reference[pivot] * np.conj(vector[pivot])
    magnitude = abs(rotation)
    if magnitude == 0.0:
        return vector.copy()
    return vector * (rotation / magnitude)
