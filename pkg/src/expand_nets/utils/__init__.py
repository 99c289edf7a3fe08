"""Init file for utils"""

from .errors import *
from .logger import *
from .random_streams import *
