"""Lie algebras: structure constants, catalog, algebra files and the
BCH series in the free Lie algebra."""
