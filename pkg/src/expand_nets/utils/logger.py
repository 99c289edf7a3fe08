"""Provides the package logger"""

import logging
import os


LOG_LEVEL_VARIABLE = "EXPANDNET_LOG_LEVEL"


class Logger:
    """Singleton for the expand_nets logger. A StreamHandler with a timestamped formatter is added,
    the level is INFO unless EXPANDNET_LOG_LEVEL names another one"""

    _instance = None


    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Logger, cls).__new__(cls)
            cls._logger = logging.getLogger("expand_nets")
            cls._console_handler = None
            cls._initialize(cls)
        return cls._instance


    @property
    def logger(self) -> logging.Logger:
        """Getter for logger"""
        return self._logger


    def set_verbosity(self, verbose: bool = False, quiet: bool = False):
        """DEBUG for verbose, WARNING for quiet, INFO otherwise"""
        if verbose and quiet:
            raise ValueError("Verbose and quiet are mutually exclusive")
        self._logger.setLevel(logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO)


    def _initialize(self):
        level = os.environ.get(LOG_LEVEL_VARIABLE, "INFO").upper()
        self._logger.setLevel(level if level in logging.getLevelNamesMapping() else logging.INFO)

        formatter = logging.Formatter("{asctime} - {levelname} - {name} - {message}", style="{",
                                      datefmt="%Y-%m-%d %H:%M:%S")
        self._console_handler = logging.StreamHandler()
        self._console_handler.setFormatter(formatter)
        self._logger.addHandler(self._console_handler)



def logger() -> logging.Logger:
    """Shortcut to access the package logger"""
    return Logger().logger


def set_verbosity(verbose: bool = False, quiet: bool = False):
    """Shortcut for Logger().set_verbosity"""
    Logger().set_verbosity(verbose, quiet)
