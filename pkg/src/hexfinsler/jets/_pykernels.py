"""Pure numpy kernels; used when the compiled extension is unavailable."""

import numpy as np


def mul(a, b, ia, ib, ic, size):
    return np.bincount(ic, weights=a[ia] * b[ib], minlength=size)


def horner(coef, h, ia, ib, ic, size):
    """sum_k coef[k] * h**k for a series h with zero constant term."""
    hb = h[ib]
    acc = np.zeros(size)
    acc[0] = coef[-1]
    for c in coef[-2::-1]:
        acc = np.bincount(ic, weights=acc[ia] * hb, minlength=size)
        acc[0] += c
    return acc
