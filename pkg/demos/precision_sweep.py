# How output quality and cost move as the precision m grows.
#
# One random four-component target, swept over m = 1..8.  Two fidelities
# are tracked: against the plan's own reconstruction (should be ~1
# always; the circuit prepares the plan exactly) and against the
# original unquantized target (approaches 1 as the grid refines, but NOT
# monotonically -- watch the dips).

import numpy as np

from bitprep import (
    RegisterLayout,
    TargetState,
    analyze,
    compile_circuit,
    decompose,
    naive_success_probability,
    reconstruct,
    simulate,
)

rng = np.random.default_rng(2012)
mags = rng.random(4)
mags = mags / np.linalg.norm(mags)
turns = rng.random(4)

target = TargetState.from_polar(mags, turns)
print("target magnitudes:", np.round(target.magnitudes, 4))
print("target phase turns:", np.round(target.phase_turns, 4))
print()
print(" m | fid(plan)      | fid(target)    | P(keep)      | gates | depth")
print("---+----------------+----------------+--------------+-------+------")

layout_cache = {}
for m in range(1, 9):
    plan = decompose(target, m)
    circuit = compile_circuit(plan)
    report = analyze(circuit, plan)
    run = simulate(circuit)
    layout = layout_cache.setdefault(m, RegisterLayout(plan.n, plan.m))
    out = run.final.extract(layout.system)
    fid_plan = abs(np.vdot(reconstruct(plan).amplitudes, out)) ** 2
    fid_target = abs(np.vdot(target.amplitudes, out)) ** 2
    prob = naive_success_probability(plan)
    print(
        f" {m} | {fid_plan:.12f} | {fid_target:.12f} | {prob:.6e} "
        f"| {report.gate_count:5d} | {report.elementary_depth:4d}"
    )

print()
print("fid(plan) pins to 1: the circuit always prepares its plan exactly.")
print("fid(target) climbs overall but can dip when the rounding at m+1")
print("lands the level pair farther from the true ratio than at m.")
print("P(keep) shrinks by ~2^-4 per extra bit; this is the price the")
print("conditional measurement avoids paying in repeated trials.")
