"""Sparse exact linear combinations and small dense rational linear algebra.

Every vector in the package is a plain ``dict`` mapping a hashable basis key
to a nonzero exact scalar: ``int``, or a ``gmpy2.mpq`` rational (``Fraction``
inputs are accepted and mix freely).  The helpers here keep
that invariant; :class:`Vec` is a thin immutable wrapper used at API
boundaries.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

from gmpy2 import mpq as Q

Scalar = int | Fraction | type(Q())
Terms = dict


def norm(c):
    """Collapse integral fractions to ``int`` so keys and reports stay tidy."""
    if type(c) is int:
        return c
    if c.denominator == 1:
        return int(c.numerator)
    return c


def add_into(acc: dict, other: Mapping, scale=1) -> dict:
    """``acc += scale * other`` in place, dropping cancelled terms."""
    if not scale:
        return acc
    for k, c in other.items():
        v = acc.get(k, 0) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


def add_term(acc: dict, key, c) -> None:
    if not c:
        return
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        del acc[key]


def combine(*pairs) -> dict:
    """Linear combination from ``(scale, terms)`` pairs."""
    out: dict = {}
    for s, t in pairs:
        add_into(out, t, s)
    return out


def scaled(terms: Mapping, s) -> dict:
    if not s:
        return {}
    return {k: c * s for k, c in terms.items()}


def apply_linear(fn: Callable[[Hashable], Mapping], terms: Mapping) -> dict:
    """Extend ``fn`` (defined on basis keys) linearly to ``terms``."""
    out: dict = {}
    for k, c in terms.items():
        add_into(out, fn(k), c)
    return out


def fmt_scalar(c) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def parse_scalar(s: str) -> Scalar:
    return norm(Fraction(s))


class Vec:
    """Immutable sparse vector with exact coefficients.

    Keys must be mutually comparable so that ``sorted_terms`` gives the
    canonical form used for printing and deterministic reports.
    """

    __slots__ = ("_t", "_h")

    def __init__(self, terms: Mapping | Iterable = ()):
        t = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for k, c in items:
            add_term(t, k, c)
        self._t = {k: norm(c) for k, c in t.items()}
        self._h = None

    @classmethod
    def basis(cls, key) -> "Vec":
        return cls({key: 1})

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def sorted_terms(self) -> list:
        return sorted(self._t.items())

    def coefficient(self, key) -> Scalar:
        return self._t.get(key, 0)

    def support(self) -> list:
        return sorted(self._t)

    def __iter__(self):
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def __eq__(self, other) -> bool:
        if isinstance(other, Vec):
            return self._t == other._t
        if other == 0:
            return not self._t
        return NotImplemented

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    def __add__(self, other: "Vec") -> "Vec":
        return type(self)(combine((1, self._t), (1, other._t)))

    def __sub__(self, other: "Vec") -> "Vec":
        return type(self)(combine((1, self._t), (-1, other._t)))

    def __neg__(self) -> "Vec":
        return type(self)(scaled(self._t, -1))

    def __mul__(self, s) -> "Vec":
        return type(self)(scaled(self._t, s))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self._t:
            return f"{type(self).__name__}(0)"
        body = " + ".join(f"{fmt_scalar(c)}*{k!r}" for k, c in self.sorted_terms())
        return f"{type(self).__name__}({body})"


# ---------------------------------------------------------------------------
# dense rational matrices (lists of lists), used for small certificates


def row_reduce(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    m = [[Q(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: list[list]) -> int:
    return len(row_reduce(rows)[1])


def determinant(rows: list[list]) -> Scalar:
    m = [[Q(x) for x in r] for r in rows]
    n = len(m)
    det = Q(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col]), None)
        if piv is None:
            return Q(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] / p
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det


def inverse(rows: list[list]) -> list[list]:
    n = len(rows)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    red, piv = row_reduce(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [[norm(x) for x in r[n:]] for r in red]


def nullspace(rows: list[list], ncols: int) -> list[list]:
    """Basis of {x : rows @ x = 0} over Q."""
    red, piv = row_reduce(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Q(0)] * ncols
        x[f] = Q(1)
        for r, pc in zip(red, piv):
            x[pc] = -r[f]
        basis.append([norm(v) for v in x])
    return basis


def solve(rows: list[list], rhs: list) -> list | None:
    """One solution of rows @ x = rhs, or None when inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = row_reduce(aug)
    if ncols in piv:
        return None
    x = [Q(0)] * ncols
    for r, pc in zip(red, piv):
        x[pc] = r[ncols]
    return [norm(v) for v in x]
