# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Walsh-Hadamard butterflies (top-bit-first stage order)."""


def fwht_c128(double complex[:, ::1] a, int stages):
    cdef Py_ssize_t nrows = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t s, base, i, row
    cdef int st
    cdef double complex x, y
    for row in range(nrows):
        s = n >> 1
        for st in range(stages):
            base = 0
            while base < n:
                for i in range(base, base + s):
                    x = a[row, i]
                    y = a[row, i + s]
                    a[row, i] = x + y
                    a[row, i + s] = x - y
                base += 2 * s
            s >>= 1


def fwht_f64(double[:, ::1] a, int stages):
    cdef Py_ssize_t nrows = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t s, base, i, row
    cdef int st
    cdef double x, y
    for row in range(nrows):
        s = n >> 1
        for st in range(stages):
            base = 0
            while base < n:
                for i in range(base, base + s):
                    x = a[row, i]
                    y = a[row, i + s]
                    a[row, i] = x + y
                    a[row, i + s] = x - y
                base += 2 * s
            s >>= 1
