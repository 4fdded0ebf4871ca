"""Finite geometry workbench: fields, PG(3,q), designs, quadrangles and inversive planes."""

__version__ = "0.1.0"

from .canon import CanonicalForm, canonical_form, canonical_labeling, isomorphic
from .constructions import (
    OvoidPG,
    build_inversive_from_ovoid,
    build_tangent_line_gq,
    build_wq,
    elliptic_quadric,
    pg_hyperplane_design,
    suzuki_tits,
    verify_pg_ovoid,
)
from .errors import *  # noqa: F401,F403
from .gf import Field, field_make
from .gq import (
    GQView,
    count_complete_bipartite,
    search_gq_ovoids,
    trace_span,
    verify_gq,
    verify_gq_ovoid,
    verify_line_span_star_meets,
    verify_regularity,
)
from .incfile import parse_inc, read_inc, save_inc, write_inc
from .incidence import (
    IncidenceStructure,
    check_dembowski_wagner,
    contract,
    design_lines,
    dual,
    verify_t_design,
)
from .inversive import (
    InversivePlane,
    check_common_tangents,
    common_tangent_circles,
    pencils,
    projective_closure,
    tangent_in_pencil,
    verify_inversive,
)
from .projective import PG3, enumerate_pg3, symplectic_form
from .reconstruct import PipelineReport, dembowski_pipeline, stars_design, verify_star_polarity
