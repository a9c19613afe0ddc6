"""Exact Hom/Ext computations for the canonically oriented A~(p,q) quiver."""

from .catalog import Catalog, parse_descriptor, parse_sequence, realize, tau_desc
from .homcalc import end_dim, euler_form, ext1_dim, hom_dim, is_isomorphic
from .quiverrep import Quiver, Representation, build_quiver
from .strata import check_theorem, enumerate_Y, find_completion, is_stratifying

__version__ = "0.1.0"
