"""Numerical experiments on the symplectic orbit of a Lagrangian subspace."""
