"""
Tikhonov regularization in Hilbert scales.

Notes on frequently disabled pylint warnings/errors:

* ``broad-except``: study cells and verification checks turn every
  exception into a recorded failure instead of aborting the run.
"""

from scaletik.version_data import VERSION as __version__
