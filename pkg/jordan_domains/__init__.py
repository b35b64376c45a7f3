from ._exceptions import *
from . import jts_core
from .jts_core import tripleSystem
from . import classical_domains
from .classical_domains import boundedSymmetricDomain, makeDomain
from . import boundary_geometry
from . import automorphisms
from .automorphisms import transvection, mapChain
from . import rigidity
from ._methods import *
