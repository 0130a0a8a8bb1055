"""Rational equivariant operational Chow rings of T-skeletal varieties, computed
as rings of piecewise polynomials on their GKM graphs."""

from .gkmgraph import (Edge, GkmGraph, SurfaceRelation, WeylAction, WeylGenerator, parse,
                       product, serialize, strata_by_subtorus, validate)
from .polyalg import Polynomial, QMatrix, kernel_basis, rref, unimodular_completion, vanishing_order
from .ppmodule import (PPClass, cup, express_in_basis, freeness_certificate, generators,
                       graded_piece, hilbert, membership, mod_delta_dims, weyl_invariants)

__version__ = "0.1.0"
