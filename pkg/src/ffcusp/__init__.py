"""Exact arithmetic for Artin continued fractions, the Bruhat-Tits tree of
PGL_2(F_q((X^-1))) and cusp excursions of unipotent orbits."""

__version__ = '0.1.0'
