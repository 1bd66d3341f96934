"""Exact local toric periods for GL2 supercuspidals."""
