"""Exact t-string functions for twisted affine Kac-Moody algebras."""
