"""Init file for data"""

from .data_cifar import *
from .data_model_io import *
from .data_synthetic import *
from .data_types import *
