"""Realize finite posets as atom spectra of quiver-built module categories."""
from .construct import expected_spectrum, in_ideal, nu, pi, realize
from .errors import AtomSpecError, BudgetError, CycleError, InvalidInput
from .modact import (
    ModuleElem, SpanBasis, act, cyclic_span, in_m_geq, membership, min_level, project_level,
    shift,
)
from .poset import (
    Poset, cn_realizable, find_isomorphism, from_hasse, specialization_order, upward_closed_sets,
)
from .quiver import (
    Finite, Loop, MaterializedQuiver, Sum, Tilde, is_admissible, materialize, p_v, paths_from,
    paths_to, point, to_dot,
)
from .series import ColorId, Series, add, mul, support, truncate
from .verify import compressibility_probe, decompose, divide

__version__ = "0.1.0"
