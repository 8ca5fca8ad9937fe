"""Binomial ideals: orders, Buchberger, integer lattices, saturation and toric ideals."""

from .binomial import (Binomial, VariableSet, dedupe, format_monomial, parse_binomial,
                       parse_polynomial, polynomial_as_binomial)
from .groebner import (BinomialEngine, GroebnerBasis, buchberger, is_groebner, is_reduced,
                       normal_form, s_polynomial, time_budget)
from .lattice import (LatticeBasis, coordinate_section, hermite_transform, in_lattice, integer_kernel,
                      is_saturated_lattice, lattice_basis, unit_pivot_form)
from .orders import MonomialOrder, Packing, block_elimination, grevlex, lex
from .toric import (degree_histogram, eliminate, elimination_part, ideal_equal, is_lattice_prime,
                    is_saturated, lattice_ideal_groebner, markov_basis, minimalize, reduced_basis,
                    saturate, saturate_all, toric_groebner)

__all__ = [
    "Binomial", "VariableSet", "dedupe", "format_monomial", "parse_binomial", "parse_polynomial",
    "polynomial_as_binomial", "BinomialEngine", "GroebnerBasis", "buchberger", "is_groebner",
    "is_reduced", "normal_form", "s_polynomial", "time_budget", "LatticeBasis", "coordinate_section",
    "hermite_transform", "in_lattice", "integer_kernel", "is_saturated_lattice", "lattice_basis",
    "unit_pivot_form", "MonomialOrder", "Packing", "block_elimination", "grevlex", "lex",
    "degree_histogram", "eliminate", "elimination_part", "ideal_equal", "is_lattice_prime",
    "is_saturated", "lattice_ideal_groebner", "markov_basis", "minimalize", "reduced_basis",
    "saturate", "saturate_all", "toric_groebner",
]
