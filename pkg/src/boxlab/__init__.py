"""boxlab: box-set distance problems over finite fields and on dyadic grids."""

__version__ = "0.1.0"
