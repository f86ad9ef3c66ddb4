"""Pure numpy fallback for the transition-probability kernels.

Same call signatures and operation order as the compiled ``_ckernels``.
Results are written into caller-provided ``out`` arrays.
"""
import numpy as np

LIMIT_GUARD = 1e-8


def _p1(omega, det, tau):
    w2 = 4.0 * omega * omega + det * det
    with np.errstate(divide="ignore", invalid="ignore"):
        env = 4.0 * omega * omega / w2
    s = np.sin(0.5 * tau * np.sqrt(w2))
    return np.where(w2 == 0.0, 0.0, env * s * s)


def _p2(omega, det, tau):
    ad = np.abs(det)
    limit = (ad == 0.0) | ((ad * tau < LIMIT_GUARD) & (ad < LIMIT_GUARD * omega))
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(limit, omega * tau, omega * np.sin(ad * tau) / ad)
    s = np.sin(u)
    return s * s


def p1_points(omega, det, tau, out):
    out[...] = _p1(omega, det, tau)


def p2_points(omega, det, tau, out):
    out[...] = _p2(omega, det, tau)


def p1_grid(omega, taus, dets, out):
    out[...] = _p1(float(omega), np.asarray(dets)[None, :], np.asarray(taus)[:, None])


def p2_grid(omega, taus, dets, out):
    out[...] = _p2(float(omega), np.asarray(dets)[None, :], np.asarray(taus)[:, None])
