"""Output spectra of 21 fermions in a box, weak to strong coupling.

Weak coupling: each trap level leaks into a narrow line at its own energy.
Strong coupling: the lines sit at the dressed wave numbers 2m*pi, between
the bare levels, and the lowest one carries most of the weight.
"""

import math

import numpy as np

from outcoupling import dynamics, fano, observables, traps

atoms = dynamics.occupations_fermi(traps.BOX, 21)

for delta in (0.1, 10.0, 100.0):
    trap = traps.TrapModel(traps.BOX, delta)
    bs = fano.solve_bound_state(trap)
    k = observables.figure_grid(trap, 1.3 * float(trap.resonance_k(10)))
    spec = observables.spectrum_infinite(trap, bs, atoms, k)
    peaks = observables.find_peaks(k, spec.values)
    print(f"delta = {delta:g}: {len(peaks)} resolvable peaks")
    top = spec.values.max()
    for i in peaks[:6]:
        print(f"  k/pi = {k[i] / math.pi:8.4f}   height/max = {spec.values[i] / top:.4f}")
    if len(peaks) > 6:
        print("  ...")
    print()

# the strong-coupling closed form against the exact spectrum at the dressed lines
trap = traps.TrapModel(traps.BOX, 100.0)
bs = fano.solve_bound_state(trap)
k = 2 * math.pi * np.arange(1, 4)
exact = observables.spectrum_infinite(trap, bs, atoms, k).values
approx = observables.spectrum_strong_box(100.0, atoms, k).values
print("strong coupling, k = 2m pi:  exact / closed form =", np.round(exact / approx, 4))
