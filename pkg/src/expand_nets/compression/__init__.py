"""Init file for compression"""

from .compression_compose import *
from .compression_matrix import *
from .compression_network import *
