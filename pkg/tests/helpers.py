import numpy as np


def rel(a, b):
    return abs(a - b) / abs(b)


def max_abs(a):
    return float(np.max(np.abs(a)))
