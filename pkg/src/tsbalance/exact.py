"""Integer polynomials and exact real-root isolation on a rational interval.

Rationals are :class:`fractions.Fraction`.  Nothing in this module touches
floating point; Sturm sequences are built from primitive pseudo-remainders so
every coefficient stays an integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor, gcd
from typing import Sequence

Rational = Fraction


class IdenticallyZero(ValueError):
    """The polynomial vanishes everywhere; every point of the interval is a root."""


@dataclass(frozen=True)
class IntPolynomial:
    """Integer coefficients in ascending degree, trailing zeros stripped."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def x(cls) -> IntPolynomial:
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial([-c for c in self.coeffs])

    def __add__(self, other: IntPolynomial | int) -> IntPolynomial:
        other = _lift(other)
        a, b = self.coeffs, other.coeffs
        size = max(len(a), len(b))
        return IntPolynomial([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)])

    __radd__ = __add__

    def __sub__(self, other: IntPolynomial | int) -> IntPolynomial:
        return self + (-_lift(other))

    def __rsub__(self, other: int) -> IntPolynomial:
        return _lift(other) - self

    def __mul__(self, other: IntPolynomial | int) -> IntPolynomial:
        other = _lift(other)
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> IntPolynomial:
        out = IntPolynomial((1,))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __call__(self, x: Fraction | int) -> Fraction:
        return evaluate(self, x)

    def derivative(self) -> IntPolynomial:
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> IntPolynomial:
        """Divide by the content and make the leading coefficient positive."""
        g = self.content()
        if g == 0:
            return self
        if self.lc < 0:
            g = -g
        return IntPolynomial([c // g for c in self.coeffs])

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mag = abs(c)
            body = "" if mag == 1 and i else str(mag)
            if i:
                body += "x" if i == 1 else f"x^{i}"
            terms.append(("-" if c < 0 else "+", body))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for s, body in terms[1:]:
            out += f" {s} {body}"
        return out


def _lift(p: IntPolynomial | int) -> IntPolynomial:
    return p if isinstance(p, IntPolynomial) else IntPolynomial((p,))


def poly_from_vector(weights: Sequence[int]) -> IntPolynomial:
    """Expand sum_k w_k x^k (1-x)^(n-k), n = len(weights) - 1, into monomials."""
    n = len(weights) - 1
    out = [0] * (n + 1)
    for k, w in enumerate(weights):
        if not w:
            continue
        # x^k (1-x)^(n-k) = sum_j C(n-k, j) (-1)^j x^(k+j)
        for j in range(n - k + 1):
            out[k + j] += w * comb(n - k, j) * (-1 if j & 1 else 1)
    return IntPolynomial(out)


def evaluate(p: IntPolynomial, x: Fraction | int) -> Fraction:
    """Exact Horner evaluation."""
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def sign_at(p: IntPolynomial, x: Fraction) -> int:
    """Sign of p(x) using integer arithmetic only."""
    x = Fraction(x)
    a, b = x.numerator, x.denominator
    # b^deg * p(a/b) = sum_k c_k a^k b^(deg-k), and b > 0; homogeneous Horner
    total = 0
    bpow = 1
    for c in reversed(p.coeffs):
        total = total * a + c * bpow
        bpow *= b
    return (total > 0) - (total < 0)


def pseudo_remainder(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Remainder of c*a by b for some positive integer c, made primitive."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    scale = abs(b.lc)
    sign = 1 if b.lc > 0 else -1
    r = list(a.coeffs)
    db = b.degree
    while len(r) - 1 >= db and any(r):
        shift = len(r) - 1 - db
        lead = r[-1]
        r = [scale * c for c in r]
        for i, c in enumerate(b.coeffs):
            r[i + shift] -= sign * lead * c
        while r and r[-1] == 0:
            r.pop()
    rem = IntPolynomial(r)
    g = rem.content()
    return IntPolynomial([c // g for c in rem.coeffs]) if g > 1 else rem


def exact_quotient(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial | None:
    """``a / b`` if b divides a over the rationals with an integer quotient, else None."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in a.coeffs]
    q = [Fraction(0)] * max(len(r) - b.degree, 0)
    while len(r) - 1 >= b.degree and any(r):
        shift = len(r) - 1 - b.degree
        f = r[-1] / b.lc
        q[shift] = f
        for i, c in enumerate(b.coeffs):
            r[i + shift] -= f * c
        while r and r[-1] == 0:
            r.pop()
    if r or any(c.denominator != 1 for c in q):
        return None
    return IntPolynomial([int(c) for c in q])


def divides(b: IntPolynomial, a: IntPolynomial) -> bool:
    """True iff b divides a in Q[x]."""
    if b.is_zero():
        return a.is_zero()
    r = a
    while not r.is_zero() and r.degree >= b.degree:
        r = pseudo_remainder(r, b)
    return r.is_zero()


def poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Primitive gcd with positive leading coefficient (zero if both are zero)."""
    a, b = a.primitive(), b.primitive()
    while not b.is_zero():
        a, b = b, pseudo_remainder(a, b).primitive()
    return a.primitive()


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    if p.is_zero():
        raise IdenticallyZero("zero polynomial has no square-free part")
    if p.degree <= 0:
        return IntPolynomial((1,))
    g = poly_gcd(p, p.derivative())
    q = exact_quotient(p.primitive(), g)
    if q is None:  # gcd is primitive, so the quotient is integral
        raise AssertionError("square-free division left a remainder")
    return q.primitive()


def sturm_sequence(p: IntPolynomial) -> list[IntPolynomial]:
    """Sturm sequence of a square-free polynomial, up to positive scalings."""
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        seq.append(-pseudo_remainder(seq[-2], seq[-1]))
    return [s for s in seq if not s.is_zero()]


def sign_variations(seq: Sequence[IntPolynomial], x: Fraction) -> int:
    signs = [s for s in (sign_at(p, x) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def simplest_rational(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational of smallest denominator in the closed interval [lo, hi], lo >= 0."""
    if lo > hi:
        raise ValueError("empty interval")
    fl = floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    return fl + 1 / simplest_rational(1 / (hi - fl), 1 / (lo - fl))


@dataclass(frozen=True)
class RootSet:
    """Real roots of ``poly`` in [lo, hi].

    ``exact`` lists rational roots; each interval ``(a, b)`` in ``intervals``
    is open, has rational endpoints where ``poly`` is nonzero with opposite
    signs, and contains exactly one (irrational) root.
    """

    poly: IntPolynomial
    lo: Fraction
    hi: Fraction
    exact: tuple[Fraction, ...]
    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __len__(self) -> int:
        return len(self.exact) + len(self.intervals)

    def refine(self, index: int, tol: Fraction | float = Fraction(1, 10**9)) -> Fraction:
        return refine(self.poly, self.intervals[index], tol)

    def refine_interval(self, index: int, tol: Fraction | float = Fraction(1, 10**9)) -> tuple[Fraction, Fraction]:
        return refine_interval(self.poly, self.intervals[index], tol)

    def contains_member(self, a: Fraction, b: Fraction) -> bool:
        """True iff some root lies in the closed interval [a, b]."""
        if any(a <= r <= b for r in self.exact):
            return True
        for (lo, hi) in self.intervals:
            if hi <= a or lo >= b:
                continue
            if a <= lo and hi <= b:
                return True
            # partial overlap: count roots in the intersection
            x, y = max(a, lo), min(b, hi)
            if sign_at(self.poly, x) == 0 or sign_at(self.poly, y) == 0:
                return True
            if sign_at(self.poly, x) != sign_at(self.poly, y):
                return True
        return False


def isolate_roots(p: IntPolynomial, lo: Fraction | int = 0, hi: Fraction | int = 1) -> RootSet:
    """Isolate the distinct real roots of ``p`` in the closed interval [lo, hi]."""
    if p.is_zero():
        raise IdenticallyZero("polynomial is identically zero")
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    f = squarefree_part(p)
    seq = sturm_sequence(f)

    def open_count(a: Fraction, b: Fraction) -> int:
        # Sturm counts roots in (a, b]; drop b itself if it is a root
        return sign_variations(seq, a) - sign_variations(seq, b) - (sign_at(f, b) == 0)

    exact = [x for x in sorted({lo, hi}) if sign_at(f, x) == 0]
    intervals = []
    stack = [(lo, hi)] if lo < hi else []
    while stack:
        a, b = stack.pop()
        c = open_count(a, b)
        if c == 0:
            continue
        if c == 1 and sign_at(f, a) and sign_at(f, b):
            intervals.append((a, b))
            continue
        m = (a + b) / 2
        if sign_at(f, m) == 0:
            exact.append(m)
        stack.append((m, b))
        stack.append((a, m))

    # A rational root p/q of a primitive f has q | lc(f).  Once the interval is
    # narrower than 1/lc^2 it can only be the simplest rational inside it.
    still_open = []
    for a, b in intervals:
        bound = Fraction(1, f.lc * f.lc)
        a, b = refine_interval(f, (a, b), bound / 2)
        if a == b:  # bisection landed on the root
            exact.append(a)
            continue
        if a >= 0:
            cand = simplest_rational(a, b)
        elif b <= 0:
            cand = -simplest_rational(-b, -a)
        else:
            cand = Fraction(0)
        if a < cand < b and sign_at(f, cand) == 0:
            exact.append(cand)
            continue
        still_open.append((a, b))
    return RootSet(
        poly=f,
        lo=lo,
        hi=hi,
        exact=tuple(sorted(exact)),
        intervals=tuple(sorted(still_open)),
    )


def refine_interval(
    p: IntPolynomial, interval: tuple[Fraction, Fraction], tol: Fraction | float = Fraction(1, 10**9)
) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval with a sign change down to width <= tol.

    If a midpoint is an exact root the degenerate interval (m, m) is returned.
    """
    tol = Fraction(tol)
    a, b = Fraction(interval[0]), Fraction(interval[1])
    sa = sign_at(p, a)
    sb = sign_at(p, b)
    if sa == 0:
        return a, a
    if sb == 0:
        return b, b
    if sa == sb:
        raise ValueError("interval does not bracket a sign change")
    while b - a > tol:
        m = (a + b) / 2
        sm = sign_at(p, m)
        if sm == 0:
            return m, m
        if sm == sa:
            a = m
        else:
            b = m
    return a, b


def refine(
    p: IntPolynomial, interval: tuple[Fraction, Fraction], tol: Fraction | float = Fraction(1, 10**9)
) -> Fraction:
    """Rational approximation within ``tol`` of the root isolated by ``interval``."""
    a, b = refine_interval(p, interval, tol)
    return (a + b) / 2
