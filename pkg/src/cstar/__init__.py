"""
CStar - A proof-integrated verifier for C

This package verifies annotated C programs by interleaving symbolic
execution with proof code that manipulates the symbolic state through an
LCF-style higher-order logic kernel.
"""

__version__ = "0.1.0"
