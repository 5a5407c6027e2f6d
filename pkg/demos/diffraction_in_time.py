"""An atom escaping from the lowest box level, seen at x = 20 L.

The amplitude rises where the classical front x = 2 k t arrives, with
small fringes ahead of it and ringing behind, then decays with the
resonance.
"""

import math

import numpy as np

from outcoupling import observables

delta = math.pi * math.sqrt(0.4)  # pole offset delta^2 / (2 pi^2) = 0.2
x = 20.0
taus = np.linspace(0.05, 10.0, 400)
amp = np.abs(observables.moshinsky_packet(1, x, taus, delta))

arrival = x / (2 * math.pi)
print(f"classical arrival tau = {arrival:.3f}")
peak = amp.max()
for tau, a in zip(taus[::10], amp[::10]):
    bar = "#" * int(50 * a / peak)
    print(f"{tau:6.2f} {a:8.4f} {bar}")
