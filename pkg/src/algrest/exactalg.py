"""Exact arithmetic substrate: rationals, weighted polynomials, t-series.

Every coefficient in this package is a ``fractions.Fraction`` (always in
lowest terms with positive denominator, so the two invariants we need come
for free).  Polynomials are stored sparsely as a map from dense exponent
tuples to nonzero coefficients; the zero polynomial is the empty map.  A
weight system attaches a positive integer weight to each variable and
grades monomials by weighted degree (the "quasi-degree").

Branch parametrizations R -> R^m are tuples of univariate series in a
parameter t.  A series carries an optional truncation cap: ``cap=None``
means the stored coefficients are the exact, complete polynomial, so
orders of vanishing (including infinite ones) are certified rather than
cap-limited.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Rational = Fraction
Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


class StructureError(ValueError):
    """Operands disagree structurally (variable counts, weight lengths, ...)."""


@dataclass(frozen=True)
class Infinity:
    """Infinite order of vanishing.

    ``cap_limited=False`` is a certified infinity (identically zero exact
    data); ``cap_limited=True`` only says nothing was seen below the cap.
    """

    cap_limited: bool = False

    def __repr__(self) -> str:
        return "inf(cap-limited)" if self.cap_limited else "inf"


#: Certified infinity.
INF = Infinity(False)


def is_infinite(value) -> bool:
    return isinstance(value, Infinity)


@dataclass(frozen=True)
class WeightSystem:
    """Positive integer weights, one per ambient variable."""

    weights: Tuple[int, ...]

    def __post_init__(self):
        if len(self.weights) == 0:
            raise StructureError("weight system needs at least one variable")
        for w in self.weights:
            if not isinstance(w, int) or w <= 0:
                raise StructureError(f"weights must be positive integers, got {w!r}")

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, i: int) -> int:
        return self.weights[i]

    def qdeg(self, exponent: Exponent) -> int:
        """Quasi-degree of a monomial exponent vector."""
        return sum(w * a for w, a in zip(self.weights, exponent))

    def restrict(self, kept: Sequence[int]) -> "WeightSystem":
        return WeightSystem(tuple(self.weights[i] for i in kept))

    @property
    def max_weight(self) -> int:
        return max(self.weights)

    @property
    def min_weight(self) -> int:
        return min(self.weights)


def _as_fraction(c: Scalar) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Polynomial:
    """Sparse multivariate polynomial over the rationals.

    Values are immutable by convention: no method mutates ``terms`` after
    construction, so instances may be shared freely between threads.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Scalar] | None = None):
        self.nvars = nvars
        clean: Dict[Exponent, Fraction] = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != nvars:
                    raise StructureError(
                        f"exponent {exp} has length {len(exp)}, expected {nvars}")
                if any(a < 0 or not isinstance(a, int) for a in exp):
                    raise StructureError(f"negative or fractional exponent in {exp}")
                c = _as_fraction(c)
                if c != 0:
                    acc = clean.get(exp)
                    clean[exp] = c if acc is None else acc + c
                    if clean[exp] == 0:
                        del clean[exp]
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c: Scalar) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise StructureError(f"variable index {index} out of range for {nvars} vars")
        exp = [0] * nvars
        exp[index] = 1
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def monomial(cls, nvars: int, exponent: Exponent, c: Scalar = 1) -> "Polynomial":
        return cls(nvars, {tuple(exponent): c})

    # -- ring structure ------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise StructureError(
                f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, Fraction(0)) + c
            if s == 0:
                out.pop(exp, None)
            else:
                out[exp] = s
        p = Polynomial.__new__(Polynomial)
        p.nvars, p.terms = self.nvars, out
        return p

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = {exp: -c for exp, c in self.terms.items()}
        return p

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            out: Dict[Exponent, Fraction] = {}
            for ea, ca in self.terms.items():
                for eb, cb in other.terms.items():
                    exp = tuple(x + y for x, y in zip(ea, eb))
                    s = out.get(exp, Fraction(0)) + ca * cb
                    if s == 0:
                        out.pop(exp, None)
                    else:
                        out[exp] = s
            p = Polynomial.__new__(Polynomial)
            p.nvars, p.terms = self.nvars, out
            return p
        c = _as_fraction(other)
        if c == 0:
            return Polynomial.zero(self.nvars)
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = {exp: co * c for exp, co in self.terms.items()}
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise StructureError("negative polynomial powers are not supported")
        out = Polynomial.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Standard (unweighted) total degree; 0 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=0)

    def min_total_degree(self):
        """Order of vanishing at 0, i.e. least standard degree of a term."""
        if not self.terms:
            return INF
        return min(sum(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def quasi_degree(self, ws: WeightSystem):
        """Common quasi-degree if quasi-homogeneous, else None; 0 for zero."""
        degs = {ws.qdeg(e) for e in self.terms}
        if not degs:
            return 0
        if len(degs) > 1:
            return None
        return degs.pop()

    def is_quasi_homogeneous(self, ws: WeightSystem) -> bool:
        return self.quasi_degree(ws) is not None

    def graded_parts(self, ws: WeightSystem) -> Dict[int, "Polynomial"]:
        parts: Dict[int, Dict[Exponent, Fraction]] = {}
        for exp, c in self.terms.items():
            parts.setdefault(ws.qdeg(exp), {})[exp] = c
        return {d: Polynomial(self.nvars, t) for d, t in sorted(parts.items())}

    def diff(self, index: int) -> "Polynomial":
        out: Dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            a = exp[index]
            if a == 0:
                continue
            new = list(exp)
            new[index] = a - 1
            key = tuple(new)
            s = out.get(key, Fraction(0)) + c * a
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return Polynomial(self.nvars, out)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise StructureError("point dimension mismatch")
        vals = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for exp, c in self.terms.items():
            term = c
            for v, a in zip(vals, exp):
                if a:
                    term *= v ** a
            total += term
        return total

    def substitute_zero(self, indices: Sequence[int]) -> "Polynomial":
        """Set the listed variables to 0 (keeping the variable count)."""
        idx = set(indices)
        out = {e: c for e, c in self.terms.items() if all(e[i] == 0 for i in idx)}
        return Polynomial(self.nvars, out)

    def drop_variables(self, kept: Sequence[int]) -> "Polynomial":
        """Project onto the kept variables; dropped ones must not occur."""
        kept = list(kept)
        dropped = [i for i in range(self.nvars) if i not in kept]
        for e in self.terms:
            if any(e[i] != 0 for i in dropped):
                raise StructureError("polynomial involves a dropped variable")
        return Polynomial(len(kept), {tuple(e[i] for i in kept): c
                                      for e, c in self.terms.items()})

    def lift_variables(self, nvars: int, positions: Sequence[int]) -> "Polynomial":
        """Re-embed into ``nvars`` variables, old var i -> positions[i]."""
        out: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for i, a in enumerate(e):
                new[positions[i]] = a
            out[tuple(new)] = c
        return Polynomial(nvars, out)

    def substitute_series(self, branch: Sequence["PowerSeries"],
                          cap: int | None = None) -> "PowerSeries":
        """Exact composition with a branch t -> (s_1(t), ..., s_m(t))."""
        if len(branch) != self.nvars:
            raise StructureError(
                f"branch has {len(branch)} series, expected {self.nvars}")
        if cap is None:
            caps = [s.cap for s in branch if s.cap is not None]
            cap = min(caps) if caps else None
        total = PowerSeries({}, cap)
        for exp, c in self.terms.items():
            term = PowerSeries({0: c}, cap)
            for s, a in zip(branch, exp):
                if a:
                    term = term * s.truncated(cap) ** a
            total = total + term
        return total

    def __repr__(self) -> str:
        from .parsing import render_polynomial
        return f"Polynomial({render_polynomial(self)!r})"

    def __str__(self) -> str:
        from .parsing import render_polynomial
        return render_polynomial(self)


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Ring operation dispatcher ('add' or 'mul')."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise StructureError(f"unknown polynomial operation {op!r}")


class PowerSeries:
    """Univariate series in t with Fraction coefficients.

    ``cap`` is an exclusive truncation order; ``cap=None`` marks an exact
    polynomial, for which orders of vanishing are certified.
    """

    __slots__ = ("coeffs", "cap")

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None,
                 cap: int | None = None):
        self.cap = cap
        clean: Dict[int, Fraction] = {}
        if coeffs:
            for k, c in coeffs.items():
                if k < 0 or not isinstance(k, int):
                    raise StructureError(f"series exponent {k!r} must be a non-negative int")
                if cap is not None and k >= cap:
                    continue
                c = _as_fraction(c)
                if c != 0:
                    clean[k] = c
        self.coeffs = clean

    @classmethod
    def zero(cls, cap: int | None = None) -> "PowerSeries":
        return cls({}, cap)

    @classmethod
    def t_power(cls, k: int, c: Scalar = 1, cap: int | None = None) -> "PowerSeries":
        return cls({k: c}, cap)

    @property
    def exact(self) -> bool:
        return self.cap is None

    def truncated(self, cap: int | None) -> "PowerSeries":
        if cap is None or (self.cap is not None and self.cap <= cap):
            return self if cap is None or self.cap is not None else PowerSeries(self.coeffs, cap)
        return PowerSeries(self.coeffs, cap)

    @staticmethod
    def _join_cap(a: "PowerSeries", b: "PowerSeries") -> int | None:
        if a.cap is None:
            return b.cap
        if b.cap is None:
            return a.cap
        return min(a.cap, b.cap)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        cap = self._join_cap(self, other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k, Fraction(0)) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return PowerSeries(out, cap)

    def __neg__(self) -> "PowerSeries":
        return PowerSeries({k: -c for k, c in self.coeffs.items()}, self.cap)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            cap = self._join_cap(self, other)
            out: Dict[int, Fraction] = {}
            for ka, ca in self.coeffs.items():
                for kb, cb in other.coeffs.items():
                    k = ka + kb
                    if cap is not None and k >= cap:
                        continue
                    s = out.get(k, Fraction(0)) + ca * cb
                    if s == 0:
                        out.pop(k, None)
                    else:
                        out[k] = s
            return PowerSeries(out, cap)
        c = _as_fraction(other)
        return PowerSeries({k: co * c for k, co in self.coeffs.items()}, self.cap)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PowerSeries":
        if n < 0:
            raise StructureError("negative series powers are not supported")
        out = PowerSeries({0: 1}, self.cap)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, PowerSeries) and self.coeffs == other.coeffs
                and self.cap == other.cap)

    def __hash__(self) -> int:
        return hash((self.cap, tuple(sorted(self.coeffs.items()))))

    def derivative(self) -> "PowerSeries":
        cap = None if self.cap is None else max(self.cap - 1, 0)
        return PowerSeries({k - 1: c * k for k, c in self.coeffs.items() if k > 0}, cap)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs.get(k, Fraction(0))

    def ord(self):
        """Least exponent with a nonzero coefficient; Infinity when none.

        The infinity is cap-limited unless the series is exact.
        """
        if self.coeffs:
            return min(self.coeffs)
        return INF if self.exact else Infinity(cap_limited=True)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*t^{k}" for k, c in sorted(self.coeffs.items())) or "0"
        tail = "" if self.cap is None else f" + O(t^{self.cap})"
        return f"<series {body}{tail}>"


def series_ord(s: PowerSeries):
    """Order of vanishing of a series (int, or Infinity marker)."""
    return s.ord()


def substitute_series(p: Polynomial, branch: Sequence[PowerSeries],
                      cap: int | None = None) -> PowerSeries:
    return p.substitute_series(branch, cap)


# -- exact scaled powers (moduli arising from weighted rescalings) --------

def factorint(n: int) -> Dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if n <= 0:
        raise StructureError("factorint needs a positive integer")
    out: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class ScaledPower:
    """Exact scalar ``coef * base**exp`` with rational parts, base > 0.

    These appear as moduli after normalizing a leading coefficient by a
    weighted scaling: the exponent is rational, so the value is generally
    irrational but exactly represented.  Equality goes through a canonical
    prime factorization of coef and base.
    """

    __slots__ = ("coef", "base", "exp")

    def __init__(self, coef: Scalar, base: Scalar, exp: Scalar):
        self.coef = _as_fraction(coef)
        self.base = _as_fraction(base)
        self.exp = _as_fraction(exp)
        if self.base <= 0:
            raise StructureError("ScaledPower base must be positive")

    def canonical(self):
        """(sign, {prime: rational exponent}) or a plain Fraction."""
        if self.coef == 0:
            return Fraction(0)
        sign = 1 if self.coef > 0 else -1
        powers: Dict[int, Fraction] = {}

        def fold(q: Fraction, mult: Fraction) -> None:
            for prime, e in factorint(q.numerator).items():
                powers[prime] = powers.get(prime, Fraction(0)) + mult * e
            for prime, e in factorint(q.denominator).items():
                powers[prime] = powers.get(prime, Fraction(0)) - mult * e

        fold(abs(self.coef), Fraction(1))
        if self.exp != 0 and self.base != 1:
            fold(self.base, self.exp)
        powers = {p: e for p, e in powers.items() if e != 0}
        if all(e.denominator == 1 for e in powers.values()):
            value = Fraction(sign)
            for p, e in powers.items():
                value *= Fraction(p) ** int(e)
            return value
        return (sign, tuple(sorted(powers.items())))

    def simplify(self):
        """Collapse to a Fraction when the value is rational."""
        canon = self.canonical()
        return canon if isinstance(canon, Fraction) else self

    def is_rational(self) -> bool:
        return isinstance(self.canonical(), Fraction)

    def __eq__(self, other) -> bool:
        if isinstance(other, ScaledPower):
            return self.canonical() == other.canonical()
        if isinstance(other, (int, Fraction)):
            return self.canonical() == _as_fraction(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __neg__(self) -> "ScaledPower":
        return ScaledPower(-self.coef, self.base, self.exp)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ScaledPower(self.coef * _as_fraction(other), self.base, self.exp)
        if isinstance(other, ScaledPower) and (other.base == self.base or other.coef == 0
                                               or self.coef == 0):
            if self.coef == 0 or other.coef == 0:
                return ScaledPower(0, self.base, self.exp)
            return ScaledPower(self.coef * other.coef, self.base, self.exp + other.exp)
        return NotImplemented

    __rmul__ = __mul__

    def to_float(self) -> float:
        return float(self.coef) * float(self.base) ** float(self.exp)

    def __repr__(self) -> str:
        return f"ScaledPower({self.coef}, {self.base}, {self.exp})"

    def __str__(self) -> str:
        simple = self.simplify()
        if isinstance(simple, Fraction):
            return str(simple)
        if self.coef == 1:
            return f"{self.base}^({self.exp})"
        return f"{self.coef}*{self.base}^({self.exp})"


def exact_scalar(coef: Scalar, base: Scalar = 1, exp: Scalar = 0):
    """Build a modulus value, collapsing to Fraction when possible."""
    return ScaledPower(coef, base, exp).simplify()
