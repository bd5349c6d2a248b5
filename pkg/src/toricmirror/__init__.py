"""Exact toric geometry and mirror-symmetry toolkit."""
