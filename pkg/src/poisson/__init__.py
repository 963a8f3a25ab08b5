"""Polynomials on the dual of a Lie algebra, the linear Poisson bracket,
exact integrators and harmonic decomposition."""
