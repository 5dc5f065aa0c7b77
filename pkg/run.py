#!/usr/bin/env python
"""
Development runner: ``python run.py verify`` behaves like ``scaletik verify``
but defaults to debug logging unless ``SCALETIK_DEBUG`` says otherwise.
"""

import os
import sys

from scaletik.cli import main


if __name__ == "__main__":
    os.environ.setdefault("SCALETIK_DEBUG", "True")
    sys.exit(main(sys.argv[1:]))
