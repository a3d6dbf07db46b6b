"""Run the metaward command line with ``python -m metaward``."""
import sys

from .cli import main

sys.exit(main())
