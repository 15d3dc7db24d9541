"""Exact construction of toroidal Lie superalgebra modules V (x) V(Gamma)."""
