"""Equivariant cohomology and the KR spectral sequence over Z/2, in exact arithmetic."""
