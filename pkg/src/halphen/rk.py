"""Adaptive embedded Runge-Kutta integration for complex-valued systems.

Dormand-Prince 5(4) pair with FSAL, PI step-size control and a fourth-order
continuous extension for dense output.  The state vector may be complex;
the independent variable is real (callers integrating along a complex
segment parameterise it by arc fraction).  Blow-up - a non-finite state or
a step size driven below machine resolution - raises IntegrationBlowUp
instead of silently clipping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["IntegrationBlowUp", "RkSolution", "integrate"]

# Dormand-Prince 5(4) tableau.
C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = np.array(
    [
        [0, 0, 0, 0, 0, 0],
        [1 / 5, 0, 0, 0, 0, 0],
        [3 / 40, 9 / 40, 0, 0, 0, 0],
        [44 / 45, -56 / 15, 32 / 9, 0, 0, 0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0],
    ]
)
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# Difference between the 5th- and embedded 4th-order weights.
E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
# Continuous-extension coefficients; row sums reproduce B (checked in tests).
P = np.array(
    [
        [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0, 0, 0, 0],
        [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0
BETA = 0.04  # PI stabilisation
EXPONENT = 0.2 - 0.75 * BETA
MAX_STEPS = 200_000


class IntegrationBlowUp(RuntimeError):
    """Raised when the solution leaves the resolvable regime.

    Attributes carry the last trusted point so callers can report how far
    the integration got.
    """

    def __init__(self, message: str, t_reached: float, y_reached):
        super().__init__(message)
        self.t_reached = t_reached
        self.y_reached = y_reached


@dataclass
class _Step:
    t_old: float
    h: float
    y_old: np.ndarray
    q: np.ndarray  # (n, 4) continuous-extension matrix


@dataclass
class RkSolution:
    """Accepted mesh (ts, ys), per-step max-abs local error estimates and the
    continuous extension for evaluation between mesh points."""

    ts: np.ndarray
    ys: np.ndarray
    err_ests: np.ndarray
    steps: list

    def at(self, t: float) -> np.ndarray:
        """Dense-output state at t inside the integrated interval."""
        t0, t1 = self.ts[0], self.ts[-1]
        if not (t0 - 1e-12 <= t <= t1 + 1e-12):
            raise ValueError("t=%g outside integrated interval [%g, %g]" % (t, t0, t1))
        if not self.steps:
            return self.ys[0].copy()
        idx = np.searchsorted(self.ts, t, side="right") - 1
        idx = min(max(idx, 0), len(self.steps) - 1)
        step = self.steps[idx]
        theta = (t - step.t_old) / step.h
        powers = theta ** np.arange(1, 5)
        return step.y_old + step.h * (step.q @ powers)


def _rms_scaled(e, scale):
    return float(np.sqrt(np.mean(np.abs(e / scale) ** 2)))


def _initial_step(f, t0, y0, f0, t_span, rtol, atol):
    scale = atol + rtol * np.abs(y0)
    d0 = _rms_scaled(y0, scale)
    d1 = _rms_scaled(f0, scale)
    h0 = 1e-6 * t_span if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * f0
    f1 = f(t0 + h0, y1)
    d2 = _rms_scaled(f1 - f0, scale) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6 * t_span, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, t_span)


def integrate(f, t0: float, t1: float, y0, rtol: float, atol: float,
              max_step: float = math.inf) -> RkSolution:
    """Integrate dy/dt = f(t, y) from t0 to t1 (t1 > t0), complex y allowed.

    A step is accepted when the weighted RMS of the embedded error estimate
    is at most 1 with weights atol + rtol*|y|.  err_ests records the
    max-abs component of the raw estimate for each accepted step.
    """
    if not t1 > t0:
        raise ValueError("t1 must exceed t0")
    if rtol <= 0 or atol <= 0:
        raise ValueError("tolerances must be positive")
    y = np.asarray(y0, dtype=complex)
    t = float(t0)
    span = t1 - t0
    f_cur = np.asarray(f(t, y), dtype=complex)
    if not np.all(np.isfinite(f_cur)):
        raise IntegrationBlowUp("non-finite derivative at the initial point", t, y)
    h = min(_initial_step(f, t, y, f_cur, span, rtol, atol), max_step)
    h_min = 16 * np.finfo(float).eps * max(abs(t0), abs(t1), 1.0)

    ts = [t]
    ys = [y.copy()]
    err_ests = [0.0]
    steps: list[_Step] = []
    err_prev = 1e-4
    rejected = False
    k = np.empty((7, y.size), dtype=complex)

    for _ in range(MAX_STEPS):
        # a final sliver below machine resolution counts as arrival, not underflow
        if t >= t1 or t1 - t < h_min:
            break
        h = min(h, t1 - t, max_step)
        if h < h_min:
            raise IntegrationBlowUp(
                "step size underflow at t=%g (|y|=%g): solution blow-up" % (t, float(np.max(np.abs(y)))),
                t, y,
            )
        k[0] = f_cur
        for i in range(1, 6):
            k[i] = f(t + C[i] * h, y + h * (A[i, :i] @ k[:i]))
        y_new = y + h * (B[:6] @ k[:6])
        k[6] = f(t + h, y_new)
        if not np.all(np.isfinite(k)) or not np.all(np.isfinite(y_new)):
            raise IntegrationBlowUp(
                "non-finite state at t=%g: solution blow-up" % (t + h), t, y
            )
        err_vec = h * (E @ k)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = _rms_scaled(err_vec, scale)
        if err <= 1.0:
            steps.append(_Step(t_old=t, h=h, y_old=y.copy(), q=k.T @ P))
            t = t + h
            y = y_new
            f_cur = k[6]  # FSAL
            ts.append(t)
            ys.append(y.copy())
            err_ests.append(float(np.max(np.abs(err_vec))))
            factor = MAX_FACTOR if err == 0 else SAFETY * err**-EXPONENT * err_prev**BETA
            factor = min(MAX_FACTOR, max(MIN_FACTOR, factor))
            if rejected:
                factor = min(1.0, factor)
            h *= factor
            err_prev = max(err, 1e-4)
            rejected = False
        else:
            rejected = True
            h *= min(1.0, max(MIN_FACTOR, SAFETY * err**-EXPONENT))
    else:
        raise IntegrationBlowUp("step budget exhausted at t=%g" % t, t, y)

    return RkSolution(
        ts=np.array(ts), ys=np.array(ys), err_ests=np.array(err_ests), steps=steps
    )
