"""Entry point for ``python -m pisudoku``."""

import sys

from .cli import main

sys.exit(main())
