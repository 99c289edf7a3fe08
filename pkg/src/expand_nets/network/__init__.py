"""Init file for network"""

from .network_activation import *
from .network_batch_norm import *
from .network_conv2d import *
from .network_flatten import *
from .network_graph import *
from .network_layer import *
from .network_layer_factory import *
from .network_linear import *
from .network_max_pool import *
from .network_types import *
