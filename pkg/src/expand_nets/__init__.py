"""Init file"""

from importlib.metadata import PackageNotFoundError, version

from .utils import *
from .tensor import *
from .network import *
from .expansion import *
from .compression import *
from .data import *
from .training import *
from .zoo import *

try:
    __version__ = version("expand_nets")
    logger().info("Library version %s", __version__)
except PackageNotFoundError:
    pass
