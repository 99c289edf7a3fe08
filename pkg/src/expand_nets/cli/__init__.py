"""Command line interface"""

from .cli_commands import *
from .cli_main import *
