"""
fermiswap
Linear-connectivity circuit synthesis for fermionic simulation: swap-network
Trotter steps, Givens-rotation Slater preparation and dense verification
"""

__version__ = "0.1.0"
__author__ = "fermiswap developers"
