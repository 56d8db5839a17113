"""
Heating and cooling a VO2 film
==============================

The film's absorption follows a logistic insulator-metal transition with
different critical temperatures on heating and cooling. The exchange phase
rises with the metallic fraction from pi/2 towards pi, clipped to what
passivity allows. g2(0) of a degenerate symmetric pair tracks the phase
from bosonic bunching (g2 ~ 0) to fermion-like antibunching (g2 ~ 2).
"""

import numpy as np

from lossyhom import SETTINGS, Branch, HysteresisModel, ThermalHistory, g2_sweep

model = HysteresisModel()
setting = SETTINGS["symmetric_degenerate"]

print("theta   A_heat  A_cool  phi_heat  g2_heat  g2_cool")
thetas = np.arange(40.0, 96.0, 5.0)
heat = dict(g2_sweep(model, setting, thetas, Branch.HEATING))
cool = dict(g2_sweep(model, setting, thetas, Branch.COOLING))
for th in thetas:
    a_h = model.tra_at(th, Branch.HEATING)[2]
    a_c = model.tra_at(th, Branch.COOLING)[2]
    phi = model.exchange_phase_at(th, Branch.HEATING)
    print(f" {th:4.0f}   {a_h:.3f}   {a_c:.3f}   {phi:.4f}    {heat[th]:.4f}   {cool[th]:.4f}")

# A film with memory: partial reversals inside the loop change nothing,
# and a full cycle always returns to the same state.
film = ThermalHistory(model, 25.0)
for target in (66.0, 64.0, 95.0, 25.0, 95.0, 25.0):
    T, R, A, phi = film.move_to(target).state()
    print(f"at {target:4.1f} degC: A={A:.6f} phi_rt={phi:.6f}")
