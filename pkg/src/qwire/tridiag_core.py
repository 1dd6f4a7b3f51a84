"""Determinant algebra for real symmetric Toeplitz tridiagonal matrices.

The determinant of the n x n matrix with ``alpha`` on the diagonal and
``beta`` on both off-diagonals (a continuant) obeys the three-term
recurrence

    A_k = alpha * A_{k-1} - beta**2 * A_{k-2},    A_0 = 1, A_{-1} = 0.

This module evaluates the determinant sequence in exact (arbitrary
precision) or double arithmetic, the Chebyshev closed form, the corner
cofactor, and the residual of the nonlinear continuant identity

    beta**(2n-2) = A_{n-1}**2 - A_{n-2} * A_n,

which ties the squared corner cofactor to three consecutive determinants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import DomainError, ModeError

EXACT = "exact"
FLOAT = "float"

Scalar = Union[int, float, Fraction]

# Rescaling threshold for the floating determinant sequence.  Entries are
# rescaled by 2**-_RESCALE_SHIFT (uniformly, so ratios and the identity
# residual stay at matched scale) whenever they exceed 2**_RESCALE_AT.
_RESCALE_AT = 2.0 ** 512
_RESCALE_SHIFT = 512


@dataclass(frozen=True)
class SymToeplitzTridiag:
    """Symmetric Toeplitz tridiagonal matrix: ``alpha`` diagonal, ``beta`` off-diagonal.

    ``n = 0`` denotes the empty matrix (determinant 1).
    """

    alpha: Scalar
    beta: Scalar
    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise ValueError(f"dimension must be an integer, got {self.n!r}")
        if self.n < 0:
            raise ValueError(f"dimension must be >= 0, got {self.n}")
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
                continue
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")

    def to_dense(self) -> np.ndarray:
        """Assemble the matrix explicitly (empty (0, 0) array for n = 0)."""
        m = np.zeros((self.n, self.n))
        for i in range(self.n):
            m[i, i] = self.alpha
            if i + 1 < self.n:
                m[i, i + 1] = self.beta
                m[i + 1, i] = self.beta
        return m


@dataclass(frozen=True)
class DetSequence:
    """Determinant sequence [A_0, ..., A_n], possibly rescaled by 2**-scale_exponent.

    ``values[k] * 2**scale_exponent`` approximates A_k.  In exact mode the
    exponent is always 0 and the values are ints or Fractions.
    """

    values: tuple
    scale_exponent: int = 0

    def determinant(self):
        """Last element with the scale undone (may overflow to inf in float mode)."""
        last = self.values[-1]
        if self.scale_exponent == 0:
            return last
        return math.ldexp(last, self.scale_exponent)


def _as_exact(value: Scalar, name: str) -> Union[int, Fraction]:
    if isinstance(value, bool):
        raise ModeError(f"{name} must be a number, got bool")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if float(value).is_integer():
            return int(value)
        raise ModeError(
            f"{name}={value!r} is not an integer; exact mode needs integer or Fraction inputs"
        )
    raise ModeError(f"{name}={value!r} is not usable in exact mode")


def _check_mode(mode: str) -> str:
    if mode not in (EXACT, FLOAT):
        raise ModeError(f"unknown arithmetic mode {mode!r}")
    return mode


def det_sequence(m: SymToeplitzTridiag, mode: str = FLOAT) -> DetSequence:
    """Determinant sequence [A_0, A_1, ..., A_n] via the three-term recurrence.

    In float mode the whole sequence is uniformly rescaled by a power of two
    whenever an entry exceeds 2**512, and the shared exponent is recorded in
    ``scale_exponent``; this keeps long sequences representable while
    preserving ratios between entries.

    Raises
    ------
    ModeError
        Exact mode with inputs that are not integers or Fractions.
    """
    _check_mode(mode)
    if mode == EXACT:
        alpha = _as_exact(m.alpha, "alpha")
        beta = _as_exact(m.beta, "beta")
        b2 = beta * beta
        values = [1]
        prev2, prev = 0, 1
        for _ in range(m.n):
            prev2, prev = prev, alpha * prev - b2 * prev2
            values.append(prev)
        return DetSequence(values=tuple(values), scale_exponent=0)

    alpha = float(m.alpha)
    b2 = float(m.beta) * float(m.beta)
    values = [1.0]
    prev2, prev = 0.0, 1.0
    exponent = 0
    for _ in range(m.n):
        prev2, prev = prev, alpha * prev - b2 * prev2
        if abs(prev) > _RESCALE_AT:
            values = [math.ldexp(v, -_RESCALE_SHIFT) for v in values]
            prev = math.ldexp(prev, -_RESCALE_SHIFT)
            prev2 = math.ldexp(prev2, -_RESCALE_SHIFT)
            exponent += _RESCALE_SHIFT
        values.append(prev)
    return DetSequence(values=tuple(values), scale_exponent=exponent)


def det(m: SymToeplitzTridiag, mode: str = FLOAT):
    """Determinant A_n (equals the last element of the sequence)."""
    return det_sequence(m, mode).determinant()


def det_chebyshev(m: SymToeplitzTridiag) -> float:
    """Determinant via the closed form beta**n * U_n(alpha / (2 beta)).

    U_n is the Chebyshev polynomial of the second kind, evaluated by its own
    recurrence U_k = 2x U_{k-1} - U_{k-2}; this route never touches the
    continuant recurrence and serves as an independent cross-check of det().

    Raises
    ------
    DomainError
        beta = 0 (the closed form degenerates; use det(), which gives alpha**n).
    """
    beta = float(m.beta)
    if beta == 0.0:
        raise DomainError("det_chebyshev requires beta != 0")
    x = float(m.alpha) / (2.0 * beta)
    prev2, prev = 0.0, 1.0  # U_{-1}, U_0
    for _ in range(m.n):
        prev2, prev = prev, 2.0 * x * prev - prev2
    return beta ** m.n * prev


def corner_cofactor(m: SymToeplitzTridiag):
    """Corner cofactor of the (n, 1) entry, equal to beta**(n-1).

    The defining minor is triangular with beta along its diagonal, so the
    value is independent of alpha.  Returned with the type of ``beta``
    (int in, int out).

    Raises
    ------
    DomainError
        n = 0 (no (n, 1) entry exists).
    """
    if m.n < 1:
        raise DomainError("corner cofactor needs n >= 1")
    return m.beta ** (m.n - 1)


def _dyadic_ints(alpha: float, beta: float) -> tuple[int, int, int]:
    """Represent two doubles as integers over a common power-of-two denominator."""
    na, da = float(alpha).as_integer_ratio()
    nb, db = float(beta).as_integer_ratio()
    den = max(da, db)  # both denominators are powers of two
    return na * (den // da), nb * (den // db), den


def identity_residual(m: SymToeplitzTridiag, mode: str = FLOAT):
    """Residual of the continuant identity beta**(2n-2) = A_{n-1}**2 - A_{n-2} A_n.

    Exact mode returns the raw difference (an int or Fraction, identically 0
    for a correct recurrence).  Float mode returns the residual divided by
    beta**(2n-2); because doubles are dyadic rationals the difference is
    evaluated in scaled integer arithmetic, which avoids the catastrophic
    cancellation a naive double-precision evaluation would suffer when the
    sequence entries dwarf beta**(2n-2).

    Raises
    ------
    DomainError
        n < 2 (A_{n-2} undefined below the A_0 convention).
    """
    _check_mode(mode)
    if m.n < 2:
        raise DomainError("identity residual needs n >= 2")
    if mode == EXACT:
        seq = det_sequence(m, EXACT).values
        beta = _as_exact(m.beta, "beta")
        cof_sq = beta ** (2 * m.n - 2)
        return cof_sq - (seq[m.n - 1] ** 2 - seq[m.n - 2] * seq[m.n])

    ai, bi, _ = _dyadic_ints(float(m.alpha), float(m.beta))
    b2 = bi * bi
    prev2, prev = 0, 1
    seq = [1]
    for _ in range(m.n):
        prev2, prev = prev, ai * prev - b2 * prev2
        seq.append(prev)
    residual = bi ** (2 * m.n - 2) - (seq[m.n - 1] ** 2 - seq[m.n - 2] * seq[m.n])
    denom = bi ** (2 * m.n - 2)
    if denom == 0:
        return 0.0 if residual == 0 else math.inf
    return float(Fraction(residual, denom))
