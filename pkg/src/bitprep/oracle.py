"""Independent verification path for compiled circuits.

Two references are computed without reusing the compiler's gate lists:

* closed-form predictions of every component of the branch that carries
  the encoding, stage by stage (the remaining "garbage" weight is only
  constrained through norm accounting and orthogonality, never predicted
  term by term);
* a projector-algebra execution that applies each stage's operator
  directly to the dense vector, one (projector, bit-flip) sum at a time,
  with the opening superposition written down analytically.

Agreement of the compiled path with both references, at every stage, is
the package's core correctness argument.

Stage indices used throughout: 1 after the superpose stage, 2 after
amplitude, 3 after phase, 4 after collapse, 5 after label, 6 after the
terminal measurement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .bitplan import BitPlan
from .errors import VerificationError
from .gates import Hadamard
from .layout import RegisterLayout
from .statevector import StateVector

Array = np.ndarray

STAGE_COUNT = 6

_SQRT_HALF = 2.0 ** -0.5


@dataclass(frozen=True)
class Component:
    """One basis component of the encoding-carrying branch.

    ``phase_word`` is either an explicit bit word for the phase register
    or None, meaning the phase register still holds its superposed
    product factor: the component then stands for all 2**m words, each
    with ``coeff`` times that word's accumulated phase factor (``coeff``
    is always the per-basis-state amplitude).
    """

    label: int
    work: int
    phase_word: tuple[int, ...] | None
    marks: tuple[int, int]
    outcome: tuple[int, int]
    coeff: complex


def phase_word_factor(word: tuple[int, ...]) -> complex:
    """Accumulated factor exp(2*pi*i * sum_i word[i] / 2**(i+1))."""
    turns = sum(bit / (1 << (i + 1)) for i, bit in enumerate(word))
    return complex(np.exp(2j * np.pi * turns))


@dataclass(frozen=True)
class StagePrediction:
    """Predicted components of the encoding branch at one stage."""

    stage: int
    layout: RegisterLayout
    components: tuple[Component, ...]

    def amplitude_entries(self) -> Iterator[tuple[int, complex]]:
        """Yield (basis index, predicted amplitude) for every component,
        expanding deferred phase words."""
        m = self.layout.m
        for comp in self.components:
            if comp.phase_word is not None:
                yield self._index(comp, comp.phase_word), comp.coeff
                continue
            for value in range(1 << m):
                word = tuple((value >> i) & 1 for i in range(m))
                yield self._index(comp, word), comp.coeff * phase_word_factor(word)

    def useful_norm_sq(self) -> float:
        """Squared norm the predicted branch should carry."""
        total = 0.0
        for comp in self.components:
            weight = abs(comp.coeff) ** 2
            if comp.phase_word is None:
                weight *= 1 << self.layout.m
            total += weight
        return total

    def max_deviation(self, state: StateVector) -> float:
        """Largest |simulated - predicted| over the predicted components."""
        if state.layout != self.layout:
            raise ValueError("state layout does not match prediction layout")
        worst = 0.0
        for index, amplitude in self.amplitude_entries():
            worst = max(worst, abs(state.amplitudes[index] - amplitude))
        return worst

    def measured_norm_sq(self, state: StateVector) -> float:
        """Squared norm the simulated state carries on the predicted components."""
        if state.layout != self.layout:
            raise ValueError("state layout does not match prediction layout")
        return float(
            sum(abs(state.amplitudes[index]) ** 2 for index, _ in self.amplitude_entries())
        )

    def _index(self, comp: Component, word: tuple[int, ...]) -> int:
        layout = self.layout
        assignment = (
            layout.system_pattern(comp.label)
            + layout.amp_pattern(comp.work)
            + layout.phase_pattern(word)
            + (
                (layout.scratch, comp.marks[0]),
                (layout.tag, comp.marks[1]),
                (layout.flag, comp.outcome[0]),
                (layout.meter, comp.outcome[1]),
            )
        )
        return layout.index_of(assignment)


def tagged_work_values(plan: BitPlan, label: int) -> tuple[int, ...]:
    """Amp-register values tagged for a basis label: the union of blocks
    [2**k, 2**(k+1)) over the label's set amplitude bits.  Exactly a_j
    values."""
    values: list[int] = []
    for k in range(plan.m):
        if plan.amp_bits[label, k]:
            values.extend(range(1 << k, 1 << (k + 1)))
    return tuple(sorted(values))


def predict_stage(plan: BitPlan, stage: int) -> StagePrediction:
    """Closed-form components of the encoding branch after ``stage``."""
    layout = RegisterLayout(plan.n, plan.m)
    n, m = plan.n, plan.m
    labels = 1 << n
    base = 2.0 ** (-(n + 2 * m) / 2.0)
    narrow = 2.0 ** (-(n + 4 * m) / 2.0)
    a = plan.amp_ints
    turns = plan.phase_turns
    zero_word = (0,) * m

    components: list[Component] = []
    if stage == 1:
        for j in range(labels):
            for r in range(1 << m):
                for value in range(1 << m):
                    word = tuple((value >> i) & 1 for i in range(m))
                    components.append(
                        Component(j, r, word, (0, 0), (0, 0), base * phase_word_factor(word))
                    )
    elif stage == 2:
        for j in range(labels):
            for r in tagged_work_values(plan, j):
                components.append(Component(j, r, None, (0, 1), (0, 0), base))
    elif stage == 3:
        for j in range(labels):
            word = tuple(int(b) for b in plan.phase_bits[j])
            factor = base * np.exp(2j * np.pi * turns[j])
            for r in tagged_work_values(plan, j):
                components.append(Component(j, r, word, (1, 1), (0, 0), factor))
    elif stage in (4, 5):
        outcome = (0, 0) if stage == 4 else (1, 1)
        for j in range(labels):
            coeff = narrow * float(a[j]) * np.exp(2j * np.pi * turns[j])
            components.append(Component(j, 0, zero_word, (1, 1), outcome, coeff))
    elif stage == 6:
        scale = plan.scale
        for j in range(labels):
            coeff = float(a[j]) / scale * np.exp(2j * np.pi * turns[j])
            components.append(Component(j, 0, zero_word, (1, 1), (1, 1), coeff))
    else:
        raise ValueError(f"stage must be 1..{STAGE_COUNT}, got {stage}")

    return StagePrediction(stage=stage, layout=layout, components=tuple(components))


# ----------------------------------------------------------------------
# projector-algebra execution


def _initial_superposition(layout: RegisterLayout, max_qubits: int | None = None) -> StateVector:
    """The post-superpose state written down directly as a tensor product."""
    state = StateVector.ground(layout, max_qubits=max_qubits)
    uniform = np.array([_SQRT_HALF, _SQRT_HALF], dtype=np.complex128)
    idle = np.array([1.0, 0.0], dtype=np.complex128)
    factors: dict[int, Array] = {q: uniform for q in (*layout.system, *layout.amp)}
    for i, q in enumerate(layout.phase):
        factors[q] = np.array(
            [_SQRT_HALF, _SQRT_HALF * np.exp(2j * np.pi / (1 << (i + 1)))],
            dtype=np.complex128,
        )
    accumulated = np.ones(1, dtype=np.complex128)
    for q in range(layout.total):
        accumulated = np.kron(accumulated, factors.get(q, idle))
    state.amplitudes[:] = accumulated
    return state


def run_projector_path(plan: BitPlan, *, max_qubits: int | None = None) -> tuple[StateVector, ...]:
    """Execute all six stages without compiling control patterns to gates.

    Returns the six stage states; the last one is post-measurement.
    """
    layout = RegisterLayout(plan.n, plan.m)
    labels = 1 << plan.n
    states: list[StateVector] = []

    state = _initial_superposition(layout, max_qubits=max_qubits)
    states.append(state.copy())

    # amplitude stage: mark, select, unwind, one amplitude bit at a time
    for k in range(plan.m):
        mark_terms = [
            (layout.system_pattern(j), (layout.scratch,))
            for j in range(labels)
            if plan.amp_bits[j, k]
        ]
        select_term = (
            (
                (layout.amp[k], 1),
                *((layout.amp[i], 0) for i in range(k + 1, plan.m)),
                (layout.scratch, 1),
            ),
            (layout.tag,),
        )
        if mark_terms:
            state.apply_projector_terms(mark_terms)
        state.apply_projector_terms([select_term])
        if mark_terms:
            state.apply_projector_terms(mark_terms)
    states.append(state.copy())

    # phase stage: one orthogonal sum over all basis labels
    state.apply_projector_terms(
        [
            (
                layout.system_pattern(j) + layout.phase_pattern(plan.phase_bits[j]),
                (layout.scratch,),
            )
            for j in range(labels)
        ]
    )
    states.append(state.copy())

    # collapse stage: plain Hadamard layer on both work registers
    for q in (*layout.amp, *layout.phase):
        state.apply(Hadamard(q))
    states.append(state.copy())

    # label stage: single projector term flipping flag and meter together
    zeros = tuple((q, 0) for q in (*layout.amp, *layout.phase))
    state.apply_projector_terms(
        [
            (
                zeros + ((layout.scratch, 1), (layout.tag, 1)),
                (layout.flag, layout.meter),
            )
        ]
    )
    states.append(state.copy())

    final, _ = state.postselect(((layout.flag, 1), (layout.meter, 1)))
    states.append(final)
    return tuple(states)


def naive_success_probability(plan: BitPlan, *, verify: bool = False, max_qubits: int | None = None) -> float:
    """Probability a plain measurement would keep the encoding branch.

    Exactly G**2 / 2**(n + 4m).  With ``verify=True`` the value is also
    checked, to 1e-12, against the squared norm of the flag=meter=1
    branch of a projector-path execution.
    """
    a = plan.amp_ints
    scale_sq = int((a * a).sum())
    formula = scale_sq / (1 << (plan.n + 4 * plan.m))
    if verify:
        layout = RegisterLayout(plan.n, plan.m)
        labeled = run_projector_path(plan, max_qubits=max_qubits)[4]
        measured = labeled.probability(((layout.flag, 1), (layout.meter, 1)))
        if abs(measured - formula) > 1e-12:
            raise VerificationError(
                f"branch norm {measured!r} disagrees with closed form {formula!r}"
            )
    return formula
