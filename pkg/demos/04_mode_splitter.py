"""Pulling the matched mode out of a received field with a mode-selective beamsplitter.

Run: python demos/04_mode_splitter.py
"""
import math

from lossy_probe import apply_mode_bs, commutator, make_input

for kappa in (0.1, 0.5, 0.9):
    a_in = make_input(kappa)
    _, reflected = apply_mode_bs(a_in, math.pi / 2)
    print(f"kappa = {kappa}: [a, b_out^dag] = {commutator(a_in, reflected).real:.6f}, sqrt(kappa) = {math.sqrt(kappa):.6f}")
