"""How much of the trap survives the coupling.

The coupled system always has one negative-energy mode.  Whatever part of
the initial state overlaps it never leaves the trap, and at strong coupling
that residue saturates at a quarter of the fully filled trap.
"""

from outcoupling import dynamics, fano, traps

for kind in traps.KINDS:
    print(f"{kind} trap")
    print(f"  {'coupling':>9} {'mu^2':>14} {'completeness-1':>15} {'N_max(inf)':>11}")
    for coupling in (0.01, 0.1, 1.0, 10.0, 100.0, 1000.0):
        bs = fano.solve_bound_state(traps.TrapModel(kind, coupling))
        print(f"  {coupling:9g} {bs.mu2:14.6e} {bs.completeness() - 1:15.1e} {dynamics.n_max_infty(bs):11.6f}")
    print()

# one atom in the lowest box level: the residue falls off as the eighth power
single = dynamics.occupations_fermi(traps.BOX, 1)
print("single atom, box: total residual / delta^8")
for delta in (0.02, 0.05, 0.1, 0.2):
    bs = fano.solve_bound_state(traps.TrapModel(traps.BOX, delta))
    print(f"  delta={delta:<5g} {dynamics.total_residual(bs, single) / delta**8:.6e}")
print(f"  weak-coupling limit {dynamics.weak_residual_box_limit(1.0, single):.6e}")
