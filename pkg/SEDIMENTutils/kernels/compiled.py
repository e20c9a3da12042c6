"""Compiled all-pairs sums for the Faxén and blob interactions.

One ``prange`` iteration owns one target and adds its sources in ascending
index order, so the result is the same for every thread count.  The
formulas are the scalar forms of the vectorised helpers in ``oseen`` and
``sphere``.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange

INV_EIGHT_PI = 1.0 / (8.0 * math.pi)
INV_FOUR_PI = 1.0 / (4.0 * math.pi)

STOKESLET = 0
ALGEBRAIC = 1
KERNEL_IDS = {"stokeslet": STOKESLET, "algebraic": ALGEBRAIC}


@njit(parallel=True, cache=True)
def faxen_sums(positions, force, coeffs, has_coeffs, radius, monopole_laplacian, average_radius,
               want_mean, want_gradient):
    """Sum over j != i of the sphere-j field (mean and gradient) at each centre i.

    Returns ``(mean (N, 3), gradient (N, 3, 3), overlap (N,))``; ``overlap[i]``
    flags a source closer than ``radius + average_radius``.
    """
    n = positions.shape[0]
    mean = np.zeros((n, 3))
    grad = np.zeros((n, 3, 3))
    overlap = np.zeros(n, dtype=np.bool_)
    reach = radius + average_radius
    r3 = radius**3
    r5 = radius**5
    lap_corr = -10.0 * r3 * average_radius**2 / 6.0
    f0, f1, f2 = force[0], force[1], force[2]
    for i in prange(n):
        acc = np.zeros(3)
        acc_g = np.zeros((3, 3))
        y = np.empty(3)
        ey = np.empty(3)
        wy = np.empty(3)
        fv = np.empty(3)
        fv[0] = f0
        fv[1] = f1
        fv[2] = f2
        for j in range(n):
            if j == i:
                continue
            y[0] = positions[i, 0] - positions[j, 0]
            y[1] = positions[i, 1] - positions[j, 1]
            y[2] = positions[i, 2] - positions[j, 2]
            r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2]
            r = math.sqrt(r2)
            if r < reach:
                overlap[i] = True
                continue
            inv = 1.0 / r
            inv3 = inv * inv * inv
            inv5 = inv3 * inv * inv
            inv7 = inv5 * inv * inv
            inv9 = inv7 * inv * inv
            ydf = y[0] * f0 + y[1] * f1 + y[2] * f2

            a = coeffs[j]
            t = 0.0
            s = 0.0
            if has_coeffs:
                t = (a[0, 0] + a[1, 1] + a[2, 2]) / 3.0
                for p in range(3):
                    ey[p] = 0.0
                    wy[p] = 0.0
                    for q in range(3):
                        sym = 0.5 * (a[p, q] + a[q, p])
                        if p == q:
                            sym -= t
                        ey[p] += sym * y[q]
                        wy[p] += 0.5 * (a[p, q] - a[q, p]) * y[q]
                s = y[0] * ey[0] + y[1] * ey[1] + y[2] * ey[2]

            if want_mean:
                for p in range(3):
                    value = INV_EIGHT_PI * (fv[p] * inv + y[p] * ydf * inv3)
                    value += monopole_laplacian * INV_FOUR_PI * (fv[p] * inv3 - 3.0 * y[p] * ydf * inv5)
                    if has_coeffs:
                        value += (
                            -r3 * t * y[p] * inv3
                            - r3 * wy[p] * inv3
                            - r5 * ey[p] * inv5
                            + 2.5 * r5 * y[p] * s * inv7
                            - 2.5 * r3 * y[p] * s * inv5
                        )
                        if average_radius > 0.0:
                            value += lap_corr * (ey[p] * inv5 - 2.5 * y[p] * s * inv7)
                    acc[p] += value

            if want_gradient:
                for p in range(3):
                    for k in range(3):
                        eye = 1.0 if p == k else 0.0
                        value = INV_EIGHT_PI * (
                            (-fv[p] * y[k] + eye * ydf + y[p] * fv[k]) * inv3 - 3.0 * y[p] * y[k] * ydf * inv5
                        )
                        value += monopole_laplacian * INV_FOUR_PI * (
                            -3.0 * (fv[p] * y[k] + eye * ydf + y[p] * fv[k]) * inv5
                            + 15.0 * y[p] * y[k] * ydf * inv7
                        )
                        if has_coeffs:
                            sym = 0.5 * (a[p, k] + a[k, p]) - eye * t
                            anti = 0.5 * (a[p, k] - a[k, p])
                            source = eye * inv3 - 3.0 * y[p] * y[k] * inv5
                            rotlet = anti * inv3 - 3.0 * wy[p] * y[k] * inv5
                            quad_a = sym * inv5 - 5.0 * ey[p] * y[k] * inv7
                            quad_b = (
                                eye * s * inv7 + 2.0 * y[p] * ey[k] * inv7 - 7.0 * y[p] * y[k] * s * inv9
                            )
                            stresslet = (
                                eye * s * inv5 + 2.0 * y[p] * ey[k] * inv5 - 5.0 * y[p] * y[k] * s * inv7
                            )
                            value += (
                                -r3 * t * source
                                - r3 * rotlet
                                - r5 * quad_a
                                + 2.5 * r5 * quad_b
                                - 2.5 * r3 * stresslet
                            )
                            if average_radius > 0.0:
                                value += lap_corr * (quad_a - 2.5 * quad_b)
                        acc_g[p, k] += value

        for p in range(3):
            mean[i, p] = acc[p]
            for k in range(3):
                grad[i, p, k] = acc_g[p, k]
    return mean, grad, overlap


@njit(parallel=True, cache=True)
def blob_sums(targets, sources, weights, drive, blob, kernel_id):
    """sum_j w_j K_eps(x_i - x_j) e at each target, self terms included."""
    m = targets.shape[0]
    n = sources.shape[0]
    out = np.zeros((m, 3))
    eps2 = blob * blob
    e0, e1, e2 = drive[0], drive[1], drive[2]
    for i in prange(m):
        u0 = 0.0
        u1 = 0.0
        u2 = 0.0
        for j in range(n):
            y0 = targets[i, 0] - sources[j, 0]
            y1 = targets[i, 1] - sources[j, 1]
            y2 = targets[i, 2] - sources[j, 2]
            r2 = y0 * y0 + y1 * y1 + y2 * y2
            w = weights[j]
            ydf = w * (y0 * e0 + y1 * e1 + y2 * e2)
            if kernel_id == STOKESLET:
                soft = r2 + eps2
                s3 = soft * math.sqrt(soft)
                diag = (r2 + 2.0 * eps2) * w
                u0 += INV_EIGHT_PI * (diag * e0 + y0 * ydf) / s3
                u1 += INV_EIGHT_PI * (diag * e1 + y1 * ydf) / s3
                u2 += INV_EIGHT_PI * (diag * e2 + y2 * ydf) / s3
            else:
                s = math.sqrt(r2 + eps2)
                s3 = s * s * s
                u0 += INV_EIGHT_PI * (w * e0 / s + y0 * ydf / s3)
                u1 += INV_EIGHT_PI * (w * e1 / s + y1 * ydf / s3)
                u2 += INV_EIGHT_PI * (w * e2 / s + y2 * ydf / s3)
        out[i, 0] = u0
        out[i, 1] = u1
        out[i, 2] = u2
    return out
