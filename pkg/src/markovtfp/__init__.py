"""Markov bases of graphical models, toric fibre products and the rank-one monoid."""

from .errors import MarkovTFPError, ResourceError, ValidationError
from .graphs import GlueSpec, StateGraph, glue, maximal_cliques
from .model import GroupedLayout, ModelMatrix, grouped_layout, model_matrix
from .ideal import Binomial, buchberger, ideal_equal, markov_basis, minimalize
from .tfp import GroupedIdeal, TfpResult, glue_vs_tfp, is_hadamard_stable, iterated_tfp, tfp_ideal

__version__ = "0.1.0"

__all__ = [
    "MarkovTFPError", "ResourceError", "ValidationError", "GlueSpec", "StateGraph", "glue",
    "maximal_cliques", "GroupedLayout", "ModelMatrix", "grouped_layout", "model_matrix", "Binomial",
    "buchberger", "ideal_equal", "markov_basis", "minimalize", "GroupedIdeal", "TfpResult",
    "glue_vs_tfp", "is_hadamard_stable", "iterated_tfp", "tfp_ideal", "__version__",
]
