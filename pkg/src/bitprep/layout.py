"""Register bookkeeping: which global qubit plays which role.

Basis states are indexed so that qubit 0 is the most significant bit:
over t qubits, basis index b assigns qubit q the bit (b >> (t-1-q)) & 1.
Every other module routes its bit arithmetic through this table instead
of hand-rolling shifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

ControlPattern = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit index assignment for one preparation run.

    The full register holds, in global order:

    * ``system``: n qubits that carry the prepared state.  Big-endian,
      so ``system[0]`` is the most significant bit of the basis label j.
    * ``amp``: m work qubits used while selecting amplitude magnitudes.
      Little-endian: ``amp[i]`` carries the 2**i bit of the work value.
    * ``phase``: m work qubits that accumulate phase; ``phase[i]``
      receives a fixed rotation of 2**-(i+1) turns at the start.
    * ``scratch``: match qubit, raised while one basis label is active.
    * ``tag``: records that the active label passed a magnitude test.
    * ``flag``, ``meter``: the pair whose joint ``|11>`` outcome marks a
      successful preparation.

    Total width is n + 2m + 4.
    """

    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"system register needs n >= 1, got n={self.n}")
        if self.m < 1:
            raise ValueError(f"precision needs m >= 1, got m={self.m}")

    @property
    def total(self) -> int:
        return self.n + 2 * self.m + 4

    @property
    def system(self) -> tuple[int, ...]:
        return tuple(range(self.n))

    @property
    def amp(self) -> tuple[int, ...]:
        return tuple(range(self.n, self.n + self.m))

    @property
    def phase(self) -> tuple[int, ...]:
        return tuple(range(self.n + self.m, self.n + 2 * self.m))

    @property
    def scratch(self) -> int:
        return self.n + 2 * self.m

    @property
    def tag(self) -> int:
        return self.n + 2 * self.m + 1

    @property
    def flag(self) -> int:
        return self.n + 2 * self.m + 2

    @property
    def meter(self) -> int:
        return self.n + 2 * self.m + 3

    def bit_position(self, qubit: int) -> int:
        """Bit position of ``qubit`` inside a basis index (0 = least significant)."""
        if not 0 <= qubit < self.total:
            raise ValueError(f"qubit {qubit} outside register of {self.total} qubits")
        return self.total - 1 - qubit

    def system_pattern(self, label: int) -> ControlPattern:
        """Control pattern pinning the system register to basis label ``label``."""
        if not 0 <= label < 1 << self.n:
            raise ValueError(f"basis label {label} outside [0, 2**{self.n})")
        return tuple(
            (q, (label >> (self.n - 1 - i)) & 1) for i, q in enumerate(self.system)
        )

    def amp_pattern(self, value: int) -> ControlPattern:
        """Control pattern pinning the amp register to integer ``value``."""
        if not 0 <= value < 1 << self.m:
            raise ValueError(f"work value {value} outside [0, 2**{self.m})")
        return tuple((q, (value >> i) & 1) for i, q in enumerate(self.amp))

    def phase_pattern(self, bits: Sequence[int]) -> ControlPattern:
        """Control pattern pinning the phase register to a bit word.

        ``bits[i]`` is the required value of ``phase[i]`` (the qubit that
        carries phase weight 2**-(i+1)).
        """
        if len(bits) != self.m:
            raise ValueError(f"phase word needs {self.m} bits, got {len(bits)}")
        word = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in word):
            raise ValueError(f"phase word must be 0/1 bits, got {bits!r}")
        return tuple(zip(self.phase, word))

    def index_of(self, assignment: Iterable[tuple[int, int]]) -> int:
        """Basis index of a full qubit assignment (every qubit exactly once)."""
        seen: dict[int, int] = {}
        for qubit, bit in assignment:
            if bit not in (0, 1):
                raise ValueError(f"bit for qubit {qubit} must be 0 or 1, got {bit}")
            if qubit in seen:
                raise ValueError(f"qubit {qubit} assigned twice")
            self.bit_position(qubit)
            seen[qubit] = bit
        if len(seen) != self.total:
            raise ValueError(
                f"assignment covers {len(seen)} of {self.total} qubits; need all"
            )
        index = 0
        for qubit, bit in seen.items():
            index |= bit << self.bit_position(qubit)
        return index

    def register_table(self) -> tuple[tuple[str, int, int], ...]:
        """Named (first, last) qubit ranges, in global order."""
        return (
            ("sys", self.system[0], self.system[-1]),
            ("amp", self.amp[0], self.amp[-1]),
            ("phase", self.phase[0], self.phase[-1]),
            ("scratch", self.scratch, self.scratch),
            ("tag", self.tag, self.tag),
            ("flag", self.flag, self.flag),
            ("meter", self.meter, self.meter),
        )
