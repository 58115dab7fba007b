"""Rack and quandle colorings of surface-knot diagrams."""

from .algebra import (
    KinkMap, NotARackError, RackTable, associated_quandle, build_rack_table, builtin,
    check_axioms, connected_components, enumerate_racks, iota_power, is_quandle, is_rack,
    kink_map, load_rack, verify_kink_properties,
)
from .coloring import check_coloring, count_colorings, enumerate_colorings
from .moves import MoveSchema, catalog, satoh_discrimination, verify_move
from .presentation import (
    Presentation, builtin_presentation, contract, load_presentation, parse_presentation,
    rename, serialize_presentation, validate,
)
from .transforms import (
    Inconsistent, Numbering, alexander_numbering, phi, phi_inverse, psi, psi_inverse,
    pushoff, theorem2_report,
)

__version__ = "0.1.0"
