"""Core components for startrace.

Exact scalars, the identity-check framework, configuration handling and the
on-disk table cache.
"""
