"""Pure-python/numpy fallback for the compiled kernels.

Drop-in replacement for :mod:`heatvar._kernels`.  Both backends consume the
random stream in exactly the same order and apply the same per-element
arithmetic, so outputs agree bitwise except where a dot-product reduction is
involved (noted below), where they agree to a few ulp.
"""

from __future__ import annotations

import numpy as np


def neumaier_sum(values) -> float:
    """Compensated (Neumaier) sum of a 1-d float array.

    Sequential and independent of any internal chunking, unlike numpy's
    pairwise ``sum``.
    """
    s = 0.0
    comp = 0.0
    for x in values:
        t = s + x
        if abs(s) >= abs(x):
            comp += (s - t) + x
        else:
            comp += (x - t) + s
        s = t
    return s + comp


def abs_pow_sum(diffs, p: int) -> float:
    """Neumaier sum of ``|d|**p`` for integer p in {2, 4}.

    Powers are formed by explicit multiplication (d2 = d*d, d4 = d2*d2) so
    the compiled kernel produces identical bits.
    """
    if p not in (2, 4):
        raise ValueError("abs_pow_sum handles p in {2, 4} only")
    s = 0.0
    comp = 0.0
    for d in diffs:
        d2 = d * d
        x = d2 if p == 2 else d2 * d2
        t = s + x
        if s >= x:  # both nonnegative
            comp += (s - t) + x
        else:
            comp += (x - t) + s
        s = t
    return s + comp


def ou_section_fill(hk, decay, step_sd, init_sd, tail_sd, n, generator, out):
    """Fill ``out[0..n]`` with one fixed-point section of the mode sum.

    State: ``u`` (resolved modes), warm-started as ``init_sd * z`` and stepped
    by the exact OU transition ``u <- u*decay + step_sd*z``.  Each output
    point is ``sum_k u_k h_k + tail_sd * z_tail``.  Consumes ``(n+1)*(kres+1)``
    standard normals in step-major order, bit-compatible with the compiled
    kernel.  The projection uses ``numpy.dot`` here versus a plain C loop in
    the compiled kernel, so outputs may differ by a few ulp.
    """
    kres = hk.shape[0]
    width = kres + 1
    # draw in blocks of whole steps; row-major layout == step-major consumption
    block = max(1, (1 << 21) // width)
    u = np.empty(kres)
    i = 0
    first = True
    while i <= n:
        rows = min(block, n + 1 - i)
        z = generator.standard_normal((rows, width))
        for r in range(rows):
            if first:
                np.multiply(init_sd, z[r, :kres], out=u)
                first = False
            else:
                u *= decay
                u += step_sd * z[r, :kres]
            out[i] = u @ hk + tail_sd * z[r, kres]
            i += 1
    return out
