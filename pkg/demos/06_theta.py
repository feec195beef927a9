"""Sampled growth of Theta(s) along the golden horosphere.

Run: python demos/06_theta.py
"""

from ffcusp.algebra import GF
from ffcusp.cf import CFSource, golden_spec
from ffcusp.experiments import theta_profile

F = GF(3)
f = CFSource(golden_spec(F))
for k, th in theta_profile(f, 8, sample_budget=32):
    print(f'  s = 3^{k}   Theta ~ {th}')
