"""Bicomplex numbers ``u + j v`` with ``u, v`` complex, ``j**2 = 1`` and ``ij = ji``.

The components may be Python scalars or numpy arrays of matching shape, in
which case every operation acts elementwise. This lets a whole space-time
grid of bicomplex values be handled as one object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

Scalar = Union[complex, float, int, np.ndarray]


@dataclass(frozen=True)
class Bicomplex:
    """Bicomplex value ``u + j*v``.

    Parameters
    ----------
    u : complex or ndarray
        Coefficient of 1 (the scalar part, written R(w)).
    v : complex or ndarray
        Coefficient of ``j`` (written I(w)).
    """

    u: Scalar = 0.0
    v: Scalar = 0.0

    @staticmethod
    def _coerce(other) -> "Bicomplex":
        if isinstance(other, Bicomplex):
            return other
        return Bicomplex(other, 0.0)

    def __add__(self, other) -> "Bicomplex":
        o = self._coerce(other)
        return Bicomplex(self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __sub__(self, other) -> "Bicomplex":
        o = self._coerce(other)
        return Bicomplex(self.u - o.u, self.v - o.v)

    def __rsub__(self, other) -> "Bicomplex":
        return self._coerce(other) - self

    def __neg__(self) -> "Bicomplex":
        return Bicomplex(-self.u, -self.v)

    def __mul__(self, other) -> "Bicomplex":
        o = self._coerce(other)
        # (a + jb)(c + jd) = (ac + bd) + j(ad + bc)
        return Bicomplex(self.u * o.u + self.v * o.v, self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Bicomplex":
        if isinstance(other, Bicomplex):
            # zero divisors P+ and P- make general division ill-defined
            raise TypeError("division by a bicomplex number is not supported")
        return Bicomplex(self.u / other, self.v / other)

    def bar(self) -> "Bicomplex":
        """Conjugation with respect to ``j``: ``u + jv -> u - jv``."""
        return Bicomplex(self.u, -self.v)

    @property
    def plus(self):
        """``R(w) + I(w)``, the coefficient of ``P+`` in ``w = P+ w+ + P- w-``."""
        return self.u + self.v

    @property
    def minus(self):
        """``R(w) - I(w)``, the coefficient of ``P-``."""
        return self.u - self.v

    @classmethod
    def from_projections(cls, plus, minus) -> "Bicomplex":
        """Return ``P+ * plus + P- * minus``."""
        return cls(0.5 * (plus + minus), 0.5 * (plus - minus))

    def allclose(self, other, rtol: float = 1e-12, atol: float = 1e-14) -> bool:
        o = self._coerce(other)
        return bool(np.allclose(self.u, o.u, rtol=rtol, atol=atol)
                    and np.allclose(self.v, o.v, rtol=rtol, atol=atol))

    def __repr__(self) -> str:
        return f"Bicomplex(u={self.u!r}, v={self.v!r})"


def mul(a: Bicomplex, b: Bicomplex) -> Bicomplex:
    return Bicomplex._coerce(a) * b


def split(w: Bicomplex):
    """Return the scalar components ``(R(w), I(w))``.

    ``R(w) = (w + bar w)/2`` and ``I(w) = (w - bar w)/(2j)``; both are complex.
    """
    w = Bicomplex._coerce(w)
    return w.u, w.v


J = Bicomplex(0.0, 1.0)
I_UNIT = Bicomplex(1j, 0.0)
P_PLUS = Bicomplex(0.5, 0.5)
P_MINUS = Bicomplex(0.5, -0.5)
