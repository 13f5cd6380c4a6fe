"""Smooth periodic functions of one variable with derivatives up to order 3.

These are the conformal factors ``u(t)`` and warp functions ``f(t)``
that the curvature code consumes.  Every class implements
``__call__(t, nu=0)`` returning the ``nu``-th derivative (``nu <= 3``),
vectorized over ``t``.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "PeriodicScalar",
    "TrigInterpolant",
    "AnalyticScalar",
    "PowerScalar",
    "constant",
    "sinusoid",
]

MAX_ORDER = 3


class PeriodicScalar:
    """Base class: a positive, ``period``-periodic C^3 function."""

    period: float

    def __call__(self, t, nu=0):
        raise NotImplementedError

    def derivatives(self, t):
        """Stack of value and the first three derivatives at ``t``."""
        return np.array([self(t, k) for k in range(MAX_ORDER + 1)])

    def check_positive(self, samples=512):
        t = np.linspace(0.0, self.period, samples, endpoint=False)
        lo = float(np.min(self(t)))
        if not lo > 0:
            raise ValueError(f"function is not positive (min {lo:.3g})")
        return lo

    def is_constant(self):
        return False

    def derivative_consistency(self, samples=16, h=1e-3):
        """Largest gap between each derivative and a fourth-order central
        difference of the order below, relative to its scale."""
        t = np.linspace(0.0, self.period, samples, endpoint=False)
        worst = 0.0
        for nu in range(1, MAX_ORDER + 1):
            fd = (np.asarray(self(t - 2 * h, nu - 1)) - 8 * np.asarray(self(t - h, nu - 1))
                  + 8 * np.asarray(self(t + h, nu - 1))
                  - np.asarray(self(t + 2 * h, nu - 1))) / (12 * h)
            exact = np.asarray(self(t, nu), dtype=float)
            scale = max(1.0, float(np.max(np.abs(exact))))
            worst = max(worst, float(np.max(np.abs(fd - exact))) / scale)
        return worst


def _real(t):
    # Keep extended-precision input; promote everything else to float64.
    t = np.asarray(t)
    return t.astype(np.result_type(t, float))


def _out(x):
    x = np.asarray(x)
    return x if x.ndim else x[()]


def _check_order(nu):
    if nu not in (0, 1, 2, 3):
        raise ValueError(f"derivative order must be 0..3, got {nu}")


class TrigInterpolant(PeriodicScalar):
    """Trigonometric interpolant of uniform samples on ``[0, period)``.

    Interpolates exactly at the nodes and has analytic derivatives of all
    orders; for smooth periodic data the accuracy is spectral.

    With ``floor > 0`` every mode from the first one whose amplitude drops
    below ``floor * max|samples|`` onward is discarded.  Sample noise at the
    round-off level otherwise fills the high modes and is amplified by
    ``k**nu`` in the derivatives.  Node values are then reproduced only to
    about ``floor``.
    """

    def __init__(self, samples, period, floor=0.0):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 1 or samples.size < 4:
            raise ValueError("need a 1-D array of at least 4 samples")
        if not period > 0:
            raise ValueError("period must be positive")
        self.period = float(period)
        self.samples = samples
        n = samples.size
        coef = np.fft.rfft(samples) / n
        self._mean = coef[0].real
        k = np.arange(1, coef.size)
        a = 2 * coef[1:].real
        b = -2 * coef[1:].imag
        if n % 2 == 0:
            # The Nyquist mode is shared between +k and -k.
            a[-1] *= 0.5
            b[-1] = 0.0
        if floor > 0:
            small = np.hypot(a, b) < floor * np.max(np.abs(samples))
            if np.any(small):
                cut = int(np.argmax(small))
                k, a, b = k[:cut], a[:cut], b[:cut]
        self.floor = float(floor)
        self._k = k
        self._a = a
        self._b = b
        self._omega = 2 * np.pi / self.period

    @property
    def coefficients(self):
        return self._mean, self._a, self._b

    def __call__(self, t, nu=0):
        _check_order(nu)
        t = _real(t)
        w = self._omega * self._k
        phase = np.multiply.outer(t, w)
        c, s = np.cos(phase), np.sin(phase)
        # d/dt (a cos + b sin) = w (b cos - a sin); the pattern cycles every
        # four orders.
        wn = w**nu
        if nu == 0:
            out = c @ self._a + s @ self._b + self._mean
        elif nu == 1:
            out = c @ (wn * self._b) - s @ (wn * self._a)
        elif nu == 2:
            out = -(c @ (wn * self._a) + s @ (wn * self._b))
        else:
            out = s @ (wn * self._a) - c @ (wn * self._b)
        return _out(out)

    def integral(self, t):
        """Exact antiderivative ``int_0^t`` of the interpolant."""
        t = _real(t)
        w = self._omega * self._k
        phase = np.multiply.outer(t, w)
        out = (self._mean * t + np.sin(phase) @ (self._a / w)
               + (1 - np.cos(phase)) @ (self._b / w))
        return _out(out)

    def is_constant(self):
        return bool(np.all(self._a == 0) and np.all(self._b == 0))


class AnalyticScalar(PeriodicScalar):
    """Periodic function given by explicit callables for ``f, f', f'', f'''``."""

    def __init__(self, period, funcs, name="analytic"):
        if len(funcs) != MAX_ORDER + 1:
            raise ValueError("need callables for orders 0..3")
        self.period = float(period)
        self._funcs = tuple(funcs)
        self.name = name

    def __call__(self, t, nu=0):
        _check_order(nu)
        t = _real(t)
        out = _real(self._funcs[nu](t))
        if out.shape != t.shape:
            out = np.broadcast_to(out, t.shape).copy()
        return _out(out)


class _Constant(AnalyticScalar):
    def __init__(self, value, period):
        zero = lambda t: np.zeros_like(t)
        super().__init__(period, [lambda t: np.full_like(t, value), zero, zero, zero],
                         name=f"constant({value!r})")
        self.value = float(value)

    def is_constant(self):
        return True


def constant(value, period):
    """The constant function ``value`` viewed as a ``period``-periodic factor."""
    return _Constant(value, period)


def sinusoid(period, offset=1.0, amplitude=0.3):
    """``offset + amplitude * sin(2 pi t / period)``."""
    w = 2 * np.pi / period
    return AnalyticScalar(period, [
        lambda t: offset + amplitude * np.sin(w * t),
        lambda t: amplitude * w * np.cos(w * t),
        lambda t: -amplitude * w**2 * np.sin(w * t),
        lambda t: -amplitude * w**3 * np.cos(w * t),
    ], name=f"{offset!r}+{amplitude!r}*sin(2pi t/{period!r})")


class PowerScalar(PeriodicScalar):
    """``scale * base(t) ** exponent`` with chain-rule derivatives."""

    def __init__(self, base, exponent, scale=1.0):
        self.base = base
        self.exponent = float(exponent)
        self.scale = float(scale)
        self.period = base.period

    def __call__(self, t, nu=0):
        _check_order(nu)
        r = self.exponent
        f0 = _real(self.base(t))
        if nu == 0:
            out = f0**r
        else:
            f1 = np.asarray(self.base(t, 1))
            if nu == 1:
                out = r * f0 ** (r - 1) * f1
            else:
                f2 = np.asarray(self.base(t, 2))
                if nu == 2:
                    out = r * (r - 1) * f0 ** (r - 2) * f1**2 + r * f0 ** (r - 1) * f2
                else:
                    f3 = np.asarray(self.base(t, 3))
                    out = (r * (r - 1) * (r - 2) * f0 ** (r - 3) * f1**3
                           + 3 * r * (r - 1) * f0 ** (r - 2) * f1 * f2
                           + r * f0 ** (r - 1) * f3)
        return _out(self.scale * out)

    def is_constant(self):
        return self.base.is_constant()
