"""Allow ``python -m forumnet``."""

import sys

from .cli import main

sys.exit(main())
