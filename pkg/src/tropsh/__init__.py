"""Exact combinatorics of tropicalized log Calabi-Yau surfaces.

The package models ``U^trop`` as ``n`` quadrant charts glued in a cycle,
together with the polygonal Liouville path, broken line diagrams, the
intersection pairing with the boundary and the explicitly known rings.
"""

__version__ = "0.1.0"
