"""Runs the command line interface with python -m expand_nets"""

import sys

from expand_nets.cli.cli_main import main


sys.exit(main())
