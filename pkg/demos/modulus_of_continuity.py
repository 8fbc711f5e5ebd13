"""Modulus distance w for a Lipschitz function and the pointwise inequality rho <= w.

Run: python3 demos/modulus_of_continuity.py
"""
import numpy as np

from unimetric import grr, measure
from unimetric.metric_core import grid_space
from unimetric.orlicz import Phi2

space = grid_space(1, 9)
x = np.linspace(0, 1, 9)
f = np.abs(np.sin(3 * x))                      # 3-Lipschitz
mu = measure.counting_measure(space)
ctx = grr.make_context(space, f, mu, Phi2)

print("V =", ctx.V)
W, Wb = grr.w_matrix(ctx), grr.w_bar_matrix(ctx)
print("w <= w_bar everywhere:", bool((W <= Wb).all()))
rep = grr.check_arnold_imkeller(ctx)
print("|f(x1) - f(x2)| <= w(x1, x2) for all pairs:", rep.ok)
print("largest ratio |f(x1) - f(x2)| / w:", round(rep.worst_ratio, 5), "at pair", rep.worst_pair)
