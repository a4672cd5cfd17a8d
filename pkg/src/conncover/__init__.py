"""Connected covers of graphs, their nerves, and Helly-type consequences."""

from .covers import (
    Cover,
    GammaBounds,
    SearchBudget,
    SearchStatus,
    canonical_cover_from_minor,
    clique_sum_restriction,
    gamma_bounds,
    link_restriction_cover,
    minimal_cover_reduce,
    search_cover_with_homology,
    transport_cover,
    validate_cover,
)
from .errors import CapExceeded, InputError, PreconditionError
from .graphs import (
    Graph,
    MinorCertificate,
    find_clique_sum_split,
    hadwiger_number,
    has_minor,
    named_graph,
    verify_certificate,
)
from .helly import (
    colorful_k5_builder,
    generalized_colorful_builder,
    helly_number,
    minor_from_helly_configuration,
    piercing_number,
    pq_property,
)
from .planar import embed_planar, face_fill_pipeline, faces, thicken
from .simplicial import Chain, SimplicialComplex, betti, nerve, tchain

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
