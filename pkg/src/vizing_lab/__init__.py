"""Measurable-style Vizing chains on finite graphs.

Partial edge colorings, 3-step Vizing chains, bounded-cocycle reweighting,
the weight-L improvement loop and its double-counting audit.
"""

__version__ = "0.1.0"
