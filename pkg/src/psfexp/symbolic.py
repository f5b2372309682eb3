"""Eventually periodic integer sequences and their shift algebra.

An external address is an eventually periodic sequence over the integers,
stored exactly as a preperiod word plus a primitive period word.  All order
decisions are made on a finite prefix whose length makes them exact, so the
whole module is free of floating point.
"""

from dataclasses import dataclass
from itertools import product
from math import gcd

from .errors import (
    AddressLimitError,
    AddressSyntaxError,
    BoundaryError,
    ConstantPivotError,
)

MAX_ENTRY = 10 ** 6
MAX_WORD = 64


def _canonical(preperiod, period):
    """Reduce the period word to its primitive root and absorb a redundant
    preperiod tail into a rotation of the period."""
    pre = list(preperiod)
    per = list(period)
    k = len(per)
    for d in range(1, k):
        if k % d == 0 and per == per[:d] * (k // d):
            per = per[:d]
            break
    while pre and pre[-1] == per[-1]:
        pre.pop()
        per = [per[-1]] + per[:-1]
    return tuple(pre), tuple(per)


@dataclass(frozen=True)
class ExternalAddress:
    """The sequence s_1 ... s_l (p_1 ... p_k)^inf in canonical form.

    Canonical means: the period word is primitive and the last preperiod
    entry differs from the last period entry.  Two addresses are equal iff
    their canonical words coincide.
    """

    preperiod: tuple
    period: tuple

    def __init__(self, preperiod=(), period=()):
        pre = tuple(int(x) for x in preperiod)
        per = tuple(int(x) for x in period)
        if not per:
            raise AddressSyntaxError("period word must be nonempty")
        if len(pre) > MAX_WORD or len(per) > MAX_WORD:
            raise AddressLimitError("word length exceeds %d" % MAX_WORD)
        for x in pre + per:
            if abs(x) > MAX_ENTRY:
                raise AddressLimitError("entry magnitude exceeds %d" % MAX_ENTRY)
        pre, per = _canonical(pre, per)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    # Canonical equality also across subclasses (itineraries compare equal
    # to plain addresses with the same words).
    def __eq__(self, other):
        if not isinstance(other, ExternalAddress):
            return NotImplemented
        return self.preperiod == other.preperiod and self.period == other.period

    def __hash__(self):
        return hash((self.preperiod, self.period))

    @property
    def preperiod_length(self):
        return len(self.preperiod)

    @property
    def period_length(self):
        return len(self.period)

    def is_periodic(self):
        return not self.preperiod

    def is_strictly_preperiodic(self):
        return bool(self.preperiod)

    def is_constant(self):
        return not self.preperiod and len(self.period) == 1

    def entry(self, n):
        """n-th entry of the expanded sequence, 1-indexed."""
        if n < 1:
            raise IndexError("entries are 1-indexed")
        l = len(self.preperiod)
        if n <= l:
            return self.preperiod[n - 1]
        return self.period[(n - l - 1) % len(self.period)]

    def expand(self, n):
        """List of the first n entries."""
        return [self.entry(i) for i in range(1, n + 1)]

    def shift(self):
        """Drop the first entry (rotate the period word in the periodic case)."""
        if self.preperiod:
            return type(self)(self.preperiod[1:], self.period)
        return type(self)((), self.period[1:] + self.period[:1])

    def shifted(self, n):
        """Apply the shift n times."""
        out = self
        for _ in range(n):
            out = out.shift()
        return out

    def prepend(self, j):
        """The concatenation j . self."""
        return type(self)((j,) + self.preperiod, self.period)

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    def __str__(self):
        return format_address(self)

    def __repr__(self):
        return "%s(%r, %r)" % (type(self).__name__, self.preperiod, self.period)


def decision_bound(a, b):
    """Number of leading entries that decides equality of two addresses:
    if the expansions agree this far, the sequences are identical."""
    ka, kb = len(a.period), len(b.period)
    return max(len(a.preperiod), len(b.preperiod)) + ka * kb // gcd(ka, kb)


def compare(a, b):
    """Lexicographic comparison of the infinite expansions: -1, 0 or +1."""
    m = decision_bound(a, b)
    for n in range(1, m + 1):
        x, y = a.entry(n), b.entry(n)
        if x != y:
            return -1 if x < y else 1
    return 0


def parse_address(text):
    """Parse "s_1 ... s_l (p_1 ... p_k)" into a canonical ExternalAddress."""
    text = text.strip()
    open_i = text.find("(")
    close_i = text.rfind(")")
    if open_i < 0 or close_i < 0 or close_i < open_i or text[close_i + 1:].strip():
        raise AddressSyntaxError("expected 'INT... ( INT... )', got %r" % text)
    head = text[:open_i].split()
    body = text[open_i + 1:close_i].split()
    if not body:
        raise AddressSyntaxError("empty period word in %r" % text)
    try:
        pre = [int(tok) for tok in head]
        per = [int(tok) for tok in body]
    except ValueError:
        raise AddressSyntaxError("non-integer entry in %r" % text) from None
    return ExternalAddress(pre, per)


def format_address(a):
    """Inverse of parse_address, single spaces: "0 (2 1)"."""
    per = "(" + " ".join(str(x) for x in a.period) + ")"
    if not a.preperiod:
        return per
    return " ".join(str(x) for x in a.preperiod) + " " + per


def entry(a, n):
    return a.entry(n)


def shift(a):
    return a.shift()


@dataclass(frozen=True)
class AddressInterval:
    """Open lexicographic interval (lower, upper) between two addresses."""

    lower: ExternalAddress
    upper: ExternalAddress

    def __post_init__(self):
        if not compare(self.lower, self.upper) < 0:
            raise AddressSyntaxError("interval endpoints out of order")

    def contains(self, x):
        return compare(self.lower, x) < 0 and compare(x, self.upper) < 0


def partition_interval(pivot, u):
    """The interval I_u of the partition induced by the shift preimages of
    the (non-constant) pivot.  I_0 is the interval between adjacent
    preimages that contains the pivot itself; I_u is its translate by u in
    the first entry."""
    if pivot.is_constant():
        raise ConstantPivotError("partition pivot must be non-constant")
    side = compare(pivot.shift(), pivot)
    # pivot in (p1.pivot, (p1+1).pivot) iff shift(pivot) > pivot
    base = pivot.entry(1) + (0 if side > 0 else -1)
    return AddressInterval(pivot.prepend(base + u), pivot.prepend(base + u + 1))


def pullback(t, s, u):
    """The unique preimage j.t of t under the shift that lies in the
    partition interval I_u of the pivot s.

    The case t == shift(s) is rejected: it would produce s itself, whose
    further preimages sit on partition boundaries.  t == s is rejected
    because every candidate j.t is itself a boundary point.
    """
    if s.is_constant():
        raise ConstantPivotError("partition pivot must be non-constant")
    if t == s.shift():
        raise BoundaryError("pullback target equals shift of the pivot")
    if t == s:
        raise BoundaryError("pullback target equals the pivot")
    interval = partition_interval(s, u)
    a = interval.lower.entry(1)
    # candidates a.t and (a+1).t; exactly one lies strictly inside
    for j in (a, a + 1):
        cand = t.prepend(j)
        if interval.contains(cand):
            return cand
    raise BoundaryError("no shift preimage of %s lies in I_%d of %s" % (t, u, s))


def enumerate_addresses(preperiod_length, period_length, entry_bound):
    """All canonical strictly preperiodic addresses with first entry 0,
    exactly the given shape, and entries bounded by entry_bound."""
    if preperiod_length < 1:
        raise AddressSyntaxError("strictly preperiodic shape needs preperiod >= 1")
    rng = range(-entry_bound, entry_bound + 1)
    seen = set()
    out = []
    for rest in product(rng, repeat=preperiod_length - 1):
        for per in product(rng, repeat=period_length):
            a = ExternalAddress((0,) + rest, per)
            if (a.preperiod_length == preperiod_length
                    and a.period_length == period_length
                    and a.entry(1) == 0 and a not in seen):
                seen.add(a)
                out.append(a)
    out.sort(key=lambda a: (a.preperiod, a.period))
    return out
