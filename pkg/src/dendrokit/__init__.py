"""Tree combinatorics: faces, horns, shuffles, extension certificates,
finite coloured operads, cube-length resolutions."""

__version__ = "0.1.0"
