"""Spectral stability of periodic traveling waves in Hamiltonian PDEs.

Monodromy matrices of periodic spectral problems, Floquet discriminants,
multiplicity classification of imaginary-axis spectrum, bifurcation indices
for spectrum leaving the axis, and a Fourier-Floquet-Hill cross-validation
solver.
"""

__version__ = "0.1.0"
