"""
Kakutani Stability Lab

A numerical laboratory for a weighted-shift map whose linear part is unstable
while the origin of the full nonlinear map is exponentially stable.
"""

__version__ = "1.0.0"
