"""
A film beam splitter from its optical constants
===============================================

A VO2 layer on sapphire is modelled with the characteristic-matrix method.
Across the transition the film is a Bruggeman mixture of insulating and
metallic grains. Each stack maps to a symmetric splitter that is passive
by construction.
"""

from lossyhom import LayerStack, check_physical, effective_index, splitter_from_stack, tmm_stack

# illustrative refractive indices near 810 nm
n_ins, n_met = complex(2.9, 0.45), complex(2.0, 1.9)

print("fill   n_eff            T      R      A      phi_rt  physical")
for fill in (0.0, 0.25, 0.5, 0.75, 1.0):
    n = effective_index(n_ins, n_met, fill)
    stack = LayerStack(((n, 75.0),), n_ambient=1.0, n_substrate=1.76, wavelength=810.0)
    t, r, A = tmm_stack(stack)
    bs = splitter_from_stack(stack)
    print(
        f"{fill:4.2f}   {n.real:.3f}{n.imag:+.3f}j   {bs.T:.3f}  {bs.R:.3f}  {A:.3f}  "
        f"{bs.phi_rt:+.3f}  {check_physical(bs).physical}"
    )
