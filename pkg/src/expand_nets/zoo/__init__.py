"""Init file for zoo"""

from .zoo_smallnet import *
