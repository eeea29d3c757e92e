# cython: language_level=3
"""Compiled visibility kernels.

Mirrors _visibility_py exactly (same squared-distance formulas in the
same operation order, compiled with -ffp-contract=off) so the two
implementations return bit-identical results.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline bint _segment_blocked(
    double px, double py, double qx, double qy,
    const double[::1] wx, const double[::1] wy,
    Py_ssize_t skip_a, Py_ssize_t skip_b, double body2,
) noexcept nogil:
    cdef double sx = qx - px
    cdef double sy = qy - py
    cdef double seg2 = sx * sx + sy * sy
    cdef double cx, cy, t, ex, ey
    cdef Py_ssize_t b
    if seg2 <= 0.0:
        seg2 = 1.0
    for b in range(wx.shape[0]):
        if b == skip_a or b == skip_b:
            continue
        cx = wx[b] - px
        cy = wy[b] - py
        t = (cx * sx + cy * sy) / seg2
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        ex = cx - t * sx
        ey = cy - t * sy
        if ex * ex + ey * ey <= body2:
            return True
    return False


def visibility_edges(xs, ys, double s_min, double s_max, double d_r, double eps):
    """See _visibility_py.visibility_edges."""
    cdef cnp.ndarray[double, ndim=1] ax = np.ascontiguousarray(xs, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ay = np.ascontiguousarray(ys, dtype=np.float64)
    cdef const double[::1] vx = ax
    cdef const double[::1] vy = ay
    cdef Py_ssize_t n = vx.shape[0]
    cdef double lo2 = s_min * s_min
    cdef double hi = s_max + eps
    cdef double hi2 = hi * hi
    cdef double body2 = (d_r * 0.5) * (d_r * 0.5)
    cdef Py_ssize_t i, j, count = 0
    cdef double dx, dy, d2

    out_i = np.empty(n * (n - 1) // 2 if n > 1 else 0, dtype=np.int32)
    out_j = np.empty_like(out_i)
    cdef int[::1] oi = out_i
    cdef int[::1] oj = out_j

    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                dx = vx[j] - vx[i]
                dy = vy[j] - vy[i]
                d2 = dx * dx + dy * dy
                if d2 <= lo2 or d2 > hi2:
                    continue
                if _segment_blocked(vx[i], vy[i], vx[j], vy[j], vx, vy, i, j, body2):
                    continue
                oi[count] = <int> i
                oj[count] = <int> j
                count += 1
    return out_i[:count], out_j[:count]


def fence_coverage(mx, my, sx, sy, wx, wy, member_world_idx,
                   double s_min, double s_max, double d_r, double eps):
    """See _visibility_py.fence_coverage."""
    cdef cnp.ndarray[double, ndim=1] amx = np.ascontiguousarray(mx, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] amy = np.ascontiguousarray(my, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] asx = np.ascontiguousarray(sx, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] asy = np.ascontiguousarray(sy, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] awx = np.ascontiguousarray(wx, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] awy = np.ascontiguousarray(wy, dtype=np.float64)
    cdef cnp.ndarray[int, ndim=1] aidx = np.ascontiguousarray(
        member_world_idx, dtype=np.int32
    )
    cdef const double[::1] vmx = amx
    cdef const double[::1] vmy = amy
    cdef const double[:, ::1] vsx = asx
    cdef const double[:, ::1] vsy = asy
    cdef const double[::1] vwx = awx
    cdef const double[::1] vwy = awy
    cdef const int[::1] vidx = aidx

    cdef Py_ssize_t n = vsx.shape[0]
    cdef Py_ssize_t k = vsx.shape[1]
    cdef double body2 = (d_r * 0.5) * (d_r * 0.5)
    cdef double lo2 = s_min * s_min
    cdef double hi = s_max + eps
    cdef double hi2 = hi * hi
    cdef Py_ssize_t i, j, s
    cdef double dx, dy, d2

    v_arr = np.zeros((n, k), dtype=np.uint8)
    c_arr = np.zeros((n, n, k), dtype=np.uint8)
    cdef unsigned char[:, ::1] v = v_arr
    cdef unsigned char[:, :, ::1] c = c_arr

    with nogil:
        for i in range(n):
            for s in range(k):
                if not _segment_blocked(
                    vmx[i], vmy[i], vsx[i, s], vsy[i, s],
                    vwx, vwy, vidx[i], -1, body2,
                ):
                    v[i, s] = 1
        for j in range(n):
            for i in range(n):
                if i == j:
                    continue
                for s in range(k):
                    dx = vsx[i, s] - vmx[j]
                    dy = vsy[i, s] - vmy[j]
                    d2 = dx * dx + dy * dy
                    if d2 <= lo2 or d2 > hi2:
                        continue
                    if not _segment_blocked(
                        vmx[j], vmy[j], vsx[i, s], vsy[i, s],
                        vwx, vwy, vidx[j], -1, body2,
                    ):
                        c[j, i, s] = 1
    return v_arr, c_arr
