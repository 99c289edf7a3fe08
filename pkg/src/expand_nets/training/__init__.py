"""Init file for training"""

from .training_augment import *
from .training_optimizer import *
from .training_tape import *
from .training_trainer import *
from .training_types import *
from .training_experiment import *
