# Gate counts and depth under the declared cost model, across a grid of
# register sizes.  Uses fully dense plans (every amplitude and phase bit
# set) so the counts hit their worst case and the identities are easy to
# eyeball:
#
#   amplitude-stage MCX count = sum over bits k of (2*c_k + 1), where
#   c_k counts the labels using bit k; dense plans have c_k = 2^n
#   phase-stage MCX count     = 2^n, one gate per basis label
#   width                     = n + 2m + 4
#
# The last column tracks depth / (2^n * n * m).  It settles as n grows,
# which is the scaling claim in testable form: depth grows like
# 2^n * n * m plus an m^2 term that the small cases expose.

import numpy as np

from bitprep import BitPlan, analyze, compile_circuit

print(" n  m | width | mcx(amp) | mcx(phase) | gates | depth | ratio")
print("------+-------+----------+------------+-------+-------+------")
for n in (1, 2, 3, 4):
    for m in (1, 2, 4):
        labels = 1 << n
        ones = np.ones((labels, m), dtype=int)
        plan = BitPlan(n, m, ones, ones)
        report = analyze(compile_circuit(plan), plan)
        ratio = report.elementary_depth / (labels * n * m)
        print(
            f" {n}  {m} |   {report.width:3d} |    {report.stage('amplitude').mcx:5d} "
            f"|      {report.stage('phase').mcx:5d} | {report.gate_count:5d} "
            f"| {report.elementary_depth:5d} | {ratio:5.2f}"
        )
    print("------+-------+----------+------------+-------+-------+------")

print()
print("cost model:", analyze(compile_circuit(plan), plan).cost_model)

# The peephole pass collapses an amplitude bit shared by every label
# into a single unconditional X on either side of the select gate.  On a
# dense plan that removes almost all the amplitude-stage control work:
plan = BitPlan(3, 3, np.ones((8, 3), dtype=int), np.ones((8, 3), dtype=int))
plain = analyze(compile_circuit(plan), plan)
tight = analyze(compile_circuit(plan, peephole=True), plan)
print()
print("dense n=3, m=3 plan, amplitude stage only:")
print("  plain:    mcx", plain.stage("amplitude").mcx, " depth", plain.stage("amplitude").depth)
print("  peephole: mcx", tight.stage("amplitude").mcx, " x", tight.stage("amplitude").x,
      " depth", tight.stage("amplitude").depth)
