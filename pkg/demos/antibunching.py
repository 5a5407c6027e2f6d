"""Second-order coherence of the fermionic beam from a weakly coupled trap.

g2(x, x') drops to zero at x = x' for any fermionic state; its width
measures the momentum spread of the emitted atoms.
"""

import numpy as np

from outcoupling import dynamics, fano, observables, traps

trap = traps.TrapModel(traps.HARMONIC, 0.1)
bs = fano.solve_bound_state(trap)
atoms = dynamics.occupations_fermi(trap, 21)
t = trap.time_from_tau(10.0)
x = np.linspace(0.0, 10.0, 41)
res = observables.correlations(trap, bs, atoms, x, 5.0, t, exact=True)

print("   x/d     g2   intensity")
scale = res.intensity.max()
for xi, g2, inten in zip(res.x, res.g2, res.intensity):
    print(f"{xi:6.2f} {g2:6.3f} {inten / scale:10.4f}")
