"""Init file for expansion"""

from .expansion_network import *
from .expansion_strategies import *
from .expansion_types import *
