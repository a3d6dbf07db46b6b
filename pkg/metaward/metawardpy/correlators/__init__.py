"""Closed-form two-point functions and their checks"""

from .base import *
from .direct import *
from .meta import *
from .dual import *
from .ward import *
from .properties import *
