#!/usr/bin/env python3
"""Brute-force reference values for the planar integrals.

Midpoint rule on a uniform grid covering the disk of radius 30 around the
destination, plus the leading far-field term 2*pi*(a+b)*R^(2-alpha)/(alpha-2)
for the integrands that decay like |x|^-alpha. Written directly from the
integrand definitions with no shared code with the C++ quadrature.

Usage: python3 riemann_oracle.py [step]
"""
import math
import sys

import numpy as np


def grid_sum(integrand, radius, step, chunk=2000):
    n = int(math.ceil(radius / step))
    centres = (np.arange(-n, n) + 0.5) * step
    total = 0.0
    for start in range(0, centres.size, chunk):
        xs = centres[start:start + chunk][:, None]
        ys = centres[None, :]
        inside = xs * xs + ys * ys <= radius * radius
        vals = integrand(np.broadcast_to(xs, inside.shape), np.broadcast_to(ys, inside.shape))
        total += float(np.sum(vals[inside]))
    return total * step * step


def main():
    step = float(sys.argv[1]) if len(sys.argv) > 1 else 0.01
    radius = 30.0
    alpha = 4.0
    a = b = 1.0  # theta_sr/P_s and theta_rd/P_r for the midpoint relay
    rx, ry = 1.0, 0.0

    def f(x, y):
        big_a = a * ((x - rx) ** 2 + (y - ry) ** 2) ** (-alpha / 2)
        big_b = b * (x * x + y * y) ** (-alpha / 2)
        return (1 + big_a) * (1 + big_b) - 1

    tail_linear = 2 * math.pi * (a + b) * radius ** (2 - alpha) / (alpha - 2)

    psi = grid_sum(lambda x, y: 1 - 1 / (1 + f(x, y)), radius, step) + tail_linear
    print(f"psi        = {psi:.8f}")
    for p in (0.3, 0.5, 0.7):
        q = 1 - p
        phi = grid_sum(lambda x, y: f(x, y) / (1 + q * f(x, y)), radius, step) + tail_linear
        dphi = grid_sum(lambda x, y: (f(x, y) / (1 + q * f(x, y))) ** 2, radius, step)
        print(f"phi(p={p})   = {phi:.8f}")
        print(f"phi_dp(p={p}) = {dphi:.8f}")


if __name__ == "__main__":
    main()
