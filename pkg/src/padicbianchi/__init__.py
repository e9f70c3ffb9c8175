"""p-adic L-functions and L-invariants of Bianchi modular forms.

Pipeline: exact modular symbols over a class-number-1 imaginary quadratic
field, overconvergent lifting, the p-adic L-function with its exceptional
zeros, tree cocycles on the Bruhat-Tits tree, and the L-invariant, checked
against the classical base-change prediction.
"""

__version__ = "0.1.0"
