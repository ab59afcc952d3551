"""cyclekit: exact geometry of cycles (circles, lines, points) under
Moebius transformations, with constraint figures, statement checking and
SVG rendering in elliptic, parabolic and hyperbolic plane metrics."""

__version__ = "0.1.0"
