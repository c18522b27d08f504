"""Least closed sets generated from base elements by operations.

Typical use::

    from recset import build_cyclic_group, saturate
    result = saturate(build_cyclic_group(5, 1))
    result.strata   # ((1,), (2,), (3, 4), (0,))
"""

from .descriptions import (
    Description,
    extract_description,
    pad_description,
    validate_description,
)
from .engine import (
    BASE,
    SaturationResult,
    Witness,
    order_of,
    partition_report,
    saturate,
    witness_of,
)
from .errors import *  # noqa: F401,F403
from .instances import (
    RecurrenceSpec,
    build_custom_modular,
    build_cyclic_group,
    build_identity_closure,
    build_recurrence,
    build_regular_sets,
    build_span,
    trunc_star,
)
from .model import (
    Element,
    Indexed,
    Instance,
    IntMod,
    Lang,
    Limits,
    Operation,
    Sym,
    Universe,
    VecMod,
    apply_operation,
    canonicalize_element,
    compare_elements,
)
from .verify import (
    brute_intersection_closed,
    brute_minimal_closed,
    check_base_extension,
    check_extension,
    check_op_extension,
    check_property_induction,
    is_recursively_closed,
)

__version__ = "0.1.0"
