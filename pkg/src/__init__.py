"""startrace - Main Package.

Exact-arithmetic deformation quantization: star products on the dual of a
Lie algebra, their traces, reduction to coadjoint orbits, GNS
representations and universal deformations induced by group actions.
"""

__version__ = "0.1.0"
__author__ = "startrace developers"
