# pylint: disable=invalid-name,missing-module-docstring

from .coefficients import *
from .descent import *
from .dgla import *
from .dglastacks import *
from .errors import *
from .gdgla import *
from .hochschild import *
from .input import *
from .linalg import *
from .matrixalgebras import *
from .postprocessor import *
from .selftest import *
from .simplicial import *
from .stacks import *
