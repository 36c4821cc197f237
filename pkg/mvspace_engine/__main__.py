"""Entry point for the mvspace command."""

import sys

from mvspace_engine.cli import main

if __name__ == "__main__":
    sys.exit(main())
