# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: compensated power-variation sums and the streaming
Ornstein-Uhlenbeck section sampler.

Bit-compatibility contract with heatvar._kernels_py: identical random-stream
consumption (numpy's standard-normal fill on the same bit generator) and
identical per-element arithmetic; only dot-product reductions may differ by
a few ulp.  Compile with -ffp-contract=off so mul+add stays two operations,
as in numpy.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport fabs
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport random_standard_normal_fill

cnp.import_array()


def neumaier_sum(const double[::1] values):
    """Compensated (Neumaier) sum, sequential and chunking-independent."""
    cdef double s = 0.0, comp = 0.0, x, t
    cdef Py_ssize_t i
    for i in range(values.shape[0]):
        x = values[i]
        t = s + x
        if fabs(s) >= fabs(x):
            comp += (s - t) + x
        else:
            comp += (x - t) + s
        s = t
    return s + comp


def abs_pow_sum(const double[::1] diffs, int p):
    """Neumaier sum of |d|**p for p in {2, 4} via explicit multiplies."""
    if p != 2 and p != 4:
        raise ValueError("abs_pow_sum handles p in {2, 4} only")
    cdef double s = 0.0, comp = 0.0, d, d2, x, t
    cdef Py_ssize_t i
    cdef bint quartic = p == 4
    for i in range(diffs.shape[0]):
        d = diffs[i]
        d2 = d * d
        x = d2 * d2 if quartic else d2
        t = s + x
        if s >= x:
            comp += (s - t) + x
        else:
            comp += (x - t) + s
        s = t
    return s + comp


def ou_section_fill(const double[::1] hk, const double[::1] decay,
                    const double[::1] step_sd, const double[::1] init_sd,
                    double tail_sd, Py_ssize_t n, object generator,
                    double[::1] out):
    """Fill out[0..n] with one fixed-point section of the mode sum.

    Same stream layout as the fallback: (n+1)*(kres+1) standard normals,
    step-major; per step the resolved-mode state advances by the exact OU
    transition and the aggregated spectral tail contributes one draw.
    """
    cdef Py_ssize_t kres = hk.shape[0]
    cdef Py_ssize_t width = kres + 1
    cdef cnp.ndarray[double, ndim=1] zbuf = np.empty(width, dtype=np.float64)
    cdef double[::1] z = zbuf
    cdef cnp.ndarray[double, ndim=1] ubuf = np.empty(kres, dtype=np.float64)
    cdef double[::1] u = ubuf
    cdef double acc
    cdef Py_ssize_t i, k
    cdef bitgen_t *bg
    capsule = generator.bit_generator.capsule
    bg = <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")
    with generator.bit_generator.lock, nogil:
        for i in range(n + 1):
            random_standard_normal_fill(bg, width, &z[0])
            if i == 0:
                for k in range(kres):
                    u[k] = init_sd[k] * z[k]
            else:
                for k in range(kres):
                    u[k] = u[k] * decay[k] + step_sd[k] * z[k]
            acc = 0.0
            for k in range(kres):
                acc += u[k] * hk[k]
            out[i] = acc + tail_sd * z[kres]
    return out
