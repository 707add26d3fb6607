"""Exact computations for exploded and tropical geometry.

Submodules:
    semiring: the exploded semiring and its tropical and smooth parts.
    lattice_affine: lattices, rational polyhedra, polytopes, cones and fans.
    charts: smooth monomial bases and relations of exploded charts.
    troppoly: exploded polynomials, corner loci and balancing.
    geometry_ops: explosions, refinements, fiber products and degenerations.
    strata_calculus: stratum operators and seminorm estimates.
    cli: the ``tropex`` command line tool.
"""

__version__ = "0.1.0"
