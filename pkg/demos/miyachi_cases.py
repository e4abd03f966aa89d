"""
The Miyachi trichotomy in practice
==================================

Pairing a growth condition on f (against e^{alpha |x|^2}) with a log+
condition on its transform (against e^{beta |y|^2}) splits at
alpha beta = 1/4:

  alpha beta > 1/4   only f = 0 satisfies both
  alpha beta = 1/4   exactly the Gaussians C e^{-alpha |x|^2} survive
  alpha beta < 1/4   polynomial times Gaussian solutions appear

One field per regime below; the boundary case also recovers its
constant C by least squares on the x grid.
"""

import math

import numpy as np

from cliffdunkl.cdt_engine import AnalyticField, build_plan
from cliffdunkl.clifford_core import MultiVector, Signature, validate_imaginary
from cliffdunkl.dunkl_rank1 import MultiplicitySplit
from cliffdunkl.miyachi import MiyachiConfig, verdict, verdict_to_json

sig = Signature(0, 2)
ms = MultiplicitySplit((0.3, 0.7), 1)
a = validate_imaginary(MultiVector.blade(sig, "e1"), "e1")
b = validate_imaginary(MultiVector.blade(sig, "e2"), "e2")
plan = build_plan(sig, ms, a, b, L_x=8.0, L_y=5.0)

gauss = lambda x1, x2: np.exp(-(x1**2 + x2**2))
cases = [
    # vanishing: alpha beta = 1, the plain Gaussian fails both conditions
    ("alpha=1, beta=1", MiyachiConfig(1.0, 1.0, 1.0),
     AnalyticField(sig, ms, {0: gauss})),
    # boundary: alpha beta = 1/4, f = 2 e^{-|x|^2} fits C = 2 within lam = 3;
    # the sup norm (exponent = inf) is the right growth gauge here
    ("alpha=1, beta=1/4", MiyachiConfig(1.0, 0.25, 3.0, exponent=math.inf),
     AnalyticField(sig, ms, {0: lambda x1, x2: 2.0 * gauss(x1, x2)})),
    # subcritical: room for a polynomial factor
    ("alpha=1, beta=1/10", MiyachiConfig(1.0, 0.1, 1.0),
     AnalyticField(sig, ms, {0: lambda x1, x2: x1 * x1 * np.exp(-1.25 * (x1**2 + x2**2))})),
]

for label, cfg, f in cases:
    v = verdict(f, cfg, plan)
    print(f"--- {label} ({v.case}) ---")
    print(verdict_to_json(v))
    print()
