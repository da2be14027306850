"""Stabilizer codes on planar lattices with mixed x/z boundaries."""
