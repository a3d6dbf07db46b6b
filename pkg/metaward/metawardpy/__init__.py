from .errors import *
from .dataclasses import *
from .exactalg import *
from .diffop import *
from .parser import *
from .reps import *
from .correlators import *
from .quadrature import *
from .hardy import *
