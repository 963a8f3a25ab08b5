"""Star products on Pol(g*) and their verifiable identities.

This package contains the BCH (Gutt) product, the Weyl-Moyal product,
bidifferential extraction, trace functionals and projection deformation.
"""
