"""Pure-numpy visibility kernels (fallback for the compiled extension).

Both kernel implementations use the same squared-distance formulas in
the same operation order, so their verdicts are bit-identical; callers
precompute any trigonometry (sample coordinates) and pass it in.
"""

import numpy as np

_PAIR_CHUNK = 4096
_TARGET_CHUNK = 8192


def visibility_edges(xs, ys, s_min, s_max, d_r, eps):
    """Undirected observation edges among agents at (xs, ys).

    Returns (i, j) int32 index arrays with i < j for every pair whose
    distance lies in (s_min, s_max + eps] and whose center-to-center
    segment stays clear of every other agent's body disk (radius d_r/2).
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    n = xs.shape[0]
    if n < 2:
        empty = np.empty(0, dtype=np.int32)
        return empty, empty

    dx = xs[None, :] - xs[:, None]
    dy = ys[None, :] - ys[:, None]
    d2 = dx * dx + dy * dy
    lo2 = s_min * s_min
    hi = s_max + eps
    hi2 = hi * hi
    band = (d2 > lo2) & (d2 <= hi2)
    band &= np.triu(np.ones((n, n), dtype=bool), k=1)
    ii, jj = np.nonzero(band)
    if ii.size == 0:
        empty = np.empty(0, dtype=np.int32)
        return empty, empty

    body2 = (d_r * 0.5) * (d_r * 0.5)
    keep = np.empty(ii.size, dtype=bool)
    for lo in range(0, ii.size, _PAIR_CHUNK):
        hi_idx = min(lo + _PAIR_CHUNK, ii.size)
        pi = ii[lo:hi_idx]
        pj = jj[lo:hi_idx]
        px = xs[pi]
        py = ys[pi]
        sx = xs[pj] - px
        sy = ys[pj] - py
        seg2 = sx * sx + sy * sy
        cx = xs[None, :] - px[:, None]
        cy = ys[None, :] - py[:, None]
        t = (cx * sx[:, None] + cy * sy[:, None]) / seg2[:, None]
        np.clip(t, 0.0, 1.0, out=t)
        ex = cx - t * sx[:, None]
        ey = cy - t * sy[:, None]
        blocked = ex * ex + ey * ey <= body2
        rows = np.arange(pi.size)
        blocked[rows, pi] = False
        blocked[rows, pj] = False
        keep[lo:hi_idx] = ~blocked.any(axis=1)
    return ii[keep].astype(np.int32), jj[keep].astype(np.int32)


def _segments_clear(px, py, qx, qy, wx, wy, skip, body2):
    """For each segment k: 1 iff no body (except world index skip[k])
    comes within sqrt(body2) of the closed segment (p[k], q[k])."""
    m = px.shape[0]
    out = np.empty(m, dtype=np.uint8)
    for lo in range(0, m, _TARGET_CHUNK):
        hi = min(lo + _TARGET_CHUNK, m)
        sx = qx[lo:hi] - px[lo:hi]
        sy = qy[lo:hi] - py[lo:hi]
        seg2 = sx * sx + sy * sy
        seg2 = np.where(seg2 > 0.0, seg2, 1.0)
        cx = wx[None, :] - px[lo:hi, None]
        cy = wy[None, :] - py[lo:hi, None]
        t = (cx * sx[:, None] + cy * sy[:, None]) / seg2[:, None]
        np.clip(t, 0.0, 1.0, out=t)
        ex = cx - t * sx[:, None]
        ey = cy - t * sy[:, None]
        blocked = ex * ex + ey * ey <= body2
        blocked[np.arange(hi - lo), skip[lo:hi]] = False
        out[lo:hi] = ~blocked.any(axis=1)
    return out


def fence_coverage(mx, my, sx, sy, wx, wy, member_world_idx, s_min, s_max, d_r, eps):
    """Visibility and coverage of boundary samples for fence detection.

    mx/my: member positions (n,).  sx/sy: sample coordinates (n, K),
    row i holding the samples on member i's sensing boundary.  wx/wy:
    every agent body in the world (m,).  member_world_idx maps member
    row -> world row so an agent's own body never occludes itself.

    Returns (V, C): V[i, k] = 1 iff sample k of member i is visible
    from member i; C[j, i, k] = 1 iff that sample lies inside member
    j's observation area (band plus occlusion), with C[i, i] all zero.
    """
    mx = np.asarray(mx, dtype=np.float64)
    my = np.asarray(my, dtype=np.float64)
    sx = np.asarray(sx, dtype=np.float64)
    sy = np.asarray(sy, dtype=np.float64)
    wx = np.asarray(wx, dtype=np.float64)
    wy = np.asarray(wy, dtype=np.float64)
    member_world_idx = np.asarray(member_world_idx, dtype=np.int32)

    n, k = sx.shape
    body2 = (d_r * 0.5) * (d_r * 0.5)
    lo2 = s_min * s_min
    hi = s_max + eps
    hi2 = hi * hi

    flat_sx = sx.reshape(-1)
    flat_sy = sy.reshape(-1)

    v = np.empty((n, k), dtype=np.uint8)
    for i in range(n):
        origin_x = np.full(k, mx[i])
        origin_y = np.full(k, my[i])
        skip = np.full(k, member_world_idx[i], dtype=np.int32)
        v[i] = _segments_clear(origin_x, origin_y, sx[i], sy[i], wx, wy, skip, body2)

    c = np.zeros((n, n, k), dtype=np.uint8)
    for j in range(n):
        dx = flat_sx - mx[j]
        dy = flat_sy - my[j]
        d2 = dx * dx + dy * dy
        band = (d2 > lo2) & (d2 <= hi2)
        idx = np.nonzero(band)[0]
        if idx.size == 0:
            continue
        origin_x = np.full(idx.size, mx[j])
        origin_y = np.full(idx.size, my[j])
        skip = np.full(idx.size, member_world_idx[j], dtype=np.int32)
        clear = _segments_clear(
            origin_x, origin_y, flat_sx[idx], flat_sy[idx], wx, wy, skip, body2
        )
        cj = np.zeros(n * k, dtype=np.uint8)
        cj[idx] = clear
        c[j] = cj.reshape(n, k)
        c[j, j, :] = 0
    return v, c
