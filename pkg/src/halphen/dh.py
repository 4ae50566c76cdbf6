"""The Darboux-Halphen flow.

The vector field

    t1' = t1(t2 + t3) - t2 t3,   t2' = t2(t1 + t3) - t1 t3,
    t3' = t3(t1 + t2) - t1 t2,        ' = d/dtau

together with numeric integration along upper-half-plane segments, the
closed-form solution t_i = 2 (log theta_{i+1}(tau))' and its exact series
counterpart.

Normalisation of the series form: with w = q**(1/8) one has
d/dtau = 2*pi*i q d/dq = (pi*i/4) w d/dw, so T_i = t_i/(pi*i) satisfies

    (1/4) w dT_i/dw = T_i (T_j + T_k) - T_j T_k

with purely rational coefficients.  T_i = (1/2) w d/dw log theta_{i+1}.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rk
from .qseries import PiGradedQSeries, _tau_complex, theta_numeric, theta_series

__all__ = [
    "DHState",
    "DHTrajectory",
    "dh_vector_field",
    "darboux_condition_residual",
    "dh_integrate",
    "dh_theta_solution",
    "dh_theta_solution_series",
    "dh_series_ode_residuals",
]


@dataclass(frozen=True)
class DHState:
    """A phase point (t1, t2, t3).  Components are complex in numeric work
    and exact rationals in the identity checks (all operations are plain
    field arithmetic, so both work)."""

    t1: complex
    t2: complex
    t3: complex

    def __iter__(self):
        yield self.t1
        yield self.t2
        yield self.t3

    @classmethod
    def from_seq(cls, seq) -> "DHState":
        a, b, c = seq
        return cls(a, b, c)


def dh_vector_field(state):
    """(t1', t2', t3') of the quadratic flow."""
    t1, t2, t3 = state
    return (
        t1 * (t2 + t3) - t2 * t3,
        t2 * (t1 + t3) - t1 * t3,
        t3 * (t1 + t2) - t1 * t2,
    )


@dataclass(frozen=True)
class DarbouxResidual:
    """(first, second) residuals of the equal-products condition
    t3(t1'+t2') = t2(t1'+t3') = t1(t2'+t3'), plus the common value.
    Iterating yields the residual pair."""

    first: complex
    second: complex
    common: complex

    def __iter__(self):
        yield self.first
        yield self.second


def darboux_condition_residual(state):
    """Residuals of the pairwise equalities among t3(t1'+t2'), t2(t1'+t3'),
    t1(t2'+t3') along the flow.  Both vanish identically and the common
    product equals 2 t1 t2 t3 (each pair sum t_i' + t_j' is 2 t_i t_j)."""
    t1, t2, t3 = state
    d1, d2, d3 = dh_vector_field(state)
    p12 = t3 * (d1 + d2)
    p13 = t2 * (d1 + d3)
    p23 = t1 * (d2 + d3)
    return DarbouxResidual(p12 - p13, p13 - p23, p12)


# -- numeric integration -------------------------------------------------------


@dataclass
class DHTrajectory:
    """Accepted integration mesh along a straight tau-segment."""

    taus: list
    states: list
    err_ests: list
    _tau0: complex = 0j
    _dtau: complex = 0j
    _solution: rk.RkSolution = None

    def __len__(self):
        return len(self.taus)

    def points(self):
        return list(zip(self.taus, self.states, self.err_ests))

    def at(self, tau) -> DHState:
        """Dense-output state at a point of the integrated segment."""
        if self._solution is None:
            raise ValueError("trajectory carries no dense output")
        s = (tau - self._tau0) / self._dtau
        if abs(s.imag) > 1e-9:
            raise ValueError("tau=%r is not on the integrated segment" % (tau,))
        return DHState.from_seq(self._solution.at(s.real))

    def to_csv(self, target) -> None:
        """Write tau_re,tau_im,t1_re,t1_im,...,err_est rows."""
        close = False
        if isinstance(target, (str, bytes)):
            fh = open(target, "w", newline="")
            close = True
        else:
            fh = target
        try:
            writer = csv.writer(fh)
            writer.writerow(self.csv_header())
            for row in self.csv_rows():
                writer.writerow(row)
        finally:
            if close:
                fh.close()

    @staticmethod
    def csv_header():
        return [
            "tau_re", "tau_im",
            "t1_re", "t1_im", "t2_re", "t2_im", "t3_re", "t3_im",
            "err_est",
        ]

    def csv_rows(self):
        for tau, state, err in zip(self.taus, self.states, self.err_ests):
            yield [
                repr(tau.real), repr(tau.imag),
                repr(state.t1.real), repr(state.t1.imag),
                repr(state.t2.real), repr(state.t2.imag),
                repr(state.t3.real), repr(state.t3.imag),
                repr(err),
            ]

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


def dh_integrate(initial, tau0, tau1, tol: float, max_step: float = np.inf) -> DHTrajectory:
    """Integrate the flow along the straight segment tau0 -> tau1.

    The segment is parameterised by arc fraction s in [0, 1]; tolerances
    are applied as both absolute and relative.  Blow-up (the flow has
    movable poles) raises rk.IntegrationBlowUp with the last trusted tau.
    """
    t0 = _tau_complex(tau0)
    t1 = _tau_complex(tau1)
    if tol <= 0:
        raise ValueError("tol must be positive")
    dtau = t1 - t0
    if dtau == 0:
        raise ValueError("tau0 and tau1 coincide")
    y0 = np.array([complex(c) for c in initial], dtype=complex)

    def f(s, y):
        return dtau * np.asarray(dh_vector_field(y), dtype=complex)

    s_max = max_step / abs(dtau) if np.isfinite(max_step) else np.inf
    try:
        sol = rk.integrate(f, 0.0, 1.0, y0, rtol=tol, atol=tol, max_step=s_max)
    except rk.IntegrationBlowUp as exc:
        raise rk.IntegrationBlowUp(
            "Darboux-Halphen blow-up near tau=%r: %s" % (t0 + exc.t_reached * dtau, exc),
            exc.t_reached,
            exc.y_reached,
        ) from exc
    taus = [t0 + float(s) * dtau for s in sol.ts]
    states = [DHState(*(complex(c) for c in y)) for y in sol.ys]
    return DHTrajectory(
        taus=taus,
        states=states,
        err_ests=[float(e) for e in sol.err_ests],
        _tau0=t0,
        _dtau=dtau,
        _solution=sol,
    )


# -- closed form ---------------------------------------------------------------


def dh_theta_solution(tau) -> DHState:
    """t_i = 2 theta_{i+1}'(tau)/theta_{i+1}(tau) from term-wise
    differentiated numeric theta sums."""
    t = _tau_complex(tau)
    values = []
    for which in (2, 3, 4):
        val, dval = theta_numeric(which, t)
        if val == 0:
            raise ZeroDivisionError("theta_%d vanishes at tau=%r" % (which, t))
        values.append(2 * dval / val)
    return DHState(*values)


def _euler_log_derivative(s: PiGradedQSeries) -> PiGradedQSeries:
    """w d/dw log s for a series with leading monomial c*w^m: equals
    m + (w u')/u on the unit part u."""
    m = s.valuation()
    c = s.coeff(m)
    unit = PiGradedQSeries({n - m: cc / c for n, cc in s.terms()}, s.trunc_order - m)
    out = unit.x_ddx() * unit.reciprocal()
    return out + PiGradedQSeries({0: m}, out.trunc_order)


def dh_theta_solution_series(order: int):
    """Exact expansions of the closed form, normalised by pi*i.

    Returns (s1, s2, s3) with pi_power = 1: the rational coefficient part
    of s_i is T_i = t_i/(pi*i) = (1/2) w d/dw log theta_{i+1}, so
    eval_series reproduces t_i directly.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    out = []
    for which in (2, 3, 4):
        theta = theta_series(which, order + 1)
        t = (_euler_log_derivative(theta) * Fraction(1, 2)).truncate(order)
        out.append(t.with_pi_power(1))
    return tuple(out)


def dh_series_ode_residuals(order: int):
    """Residuals (1/4) w dT_i/dw - [T_i(T_j+T_k) - T_j T_k] as grading-zero
    exact series; all three vanish identically."""
    series = [s.with_pi_power(0) for s in dh_theta_solution_series(order)]
    quarter = Fraction(1, 4)
    residuals = []
    for i in range(3):
        ti = series[i]
        tj = series[(i + 1) % 3]
        tk = series[(i + 2) % 3]
        residuals.append(ti.x_ddx() * quarter - (ti * (tj + tk) - tj * tk))
    return tuple(residuals)
