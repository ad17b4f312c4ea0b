"""Exact determinant moments of random two-qubit and qubit-qutrit states."""

__version__ = "0.1.0"
