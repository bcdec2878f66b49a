"""Exact-arithmetic invariants of unoriented link diagrams.

The package computes, for a combinatorial link diagram: the integral module
presented by the crossing relations 2*over - under - under', its weight and
component-parity maps, the link determinant, longitudes, the finite quandle
of arc classes inside the module, and the involutory medial quandle presented
by the diagram, together with comparison utilities for all of these.
"""

__version__ = "0.1.0"
