"""Bracket the isotropic-state steering threshold for three mutually unbiased
measurements, using an inscribed and a circumscribed polytope for Bob's ball.

Usage: python demos/bloch_threshold.py [n_points] [tolerance_denominator]
"""
import math
import sys
import time
from fractions import Fraction

from gptlab.presets import bloch_isotropic
from gptlab.steering import assemblage, bisect_threshold, has_lhs_model

n = int(sys.argv[1]) if len(sys.argv) > 1 else 40
den = int(sys.argv[2]) if len(sys.argv) > 2 else 64


def unsteerable(bob):
    def at(gamma):
        sc = bloch_isotropic(gamma, bob, n)
        return has_lhs_model(assemblage(sc), sc.K_B).answer
    return at


t = time.time()
lo_in, hi_in = bisect_threshold(unsteerable("inner"), 0, 1, Fraction(1, den))
lo_out, hi_out = bisect_threshold(unsteerable("outer"), 0, 1, Fraction(1, den))
print(f"inner polytope: threshold in [{float(lo_in):.4f}, {float(hi_in):.4f}]")
print(f"outer polytope: threshold in [{float(lo_out):.4f}, {float(hi_out):.4f}]")
print(f"ball threshold certified in [{float(lo_in):.4f}, {float(hi_out):.4f}]; 1/sqrt(3) = {1 / math.sqrt(3):.4f}")
print(f"{time.time() - t:.0f} s")
