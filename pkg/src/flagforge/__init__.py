"""Exact-arithmetic flag-algebra toolkit for clique minimization under
independence-number constraints: small-graph and flag enumeration, rational
density calculus, SDP assembly and export, bit-exact certificate
verification, extremal constructions, and certified probabilistic bounds.
"""

__version__ = "0.1.0"
