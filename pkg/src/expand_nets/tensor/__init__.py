"""Init file for tensor"""

from .tensor_ops import *
from .tensor_types import *
