"""Adapter between apg/1 prompt interchange files and a pretrained
promptable segmenter.

One request per process: read an image and a prompt file, decode masks,
write a single PGM mask, exit 0. Failures exit nonzero with one
machine-readable ``reason: detail`` line on stderr, where reason is one of
``schema``, ``weights``, ``dims``, ``backend``.
"""

__version__ = "0.1.0"
