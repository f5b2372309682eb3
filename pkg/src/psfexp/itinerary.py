"""Itineraries and kneading sequences.

Two independent routes are provided and kept in production: the direct
partition-membership definition and the entrywise delta construction.  They
must agree everywhere both are defined; the test suite holds them against
each other.  The reversal algorithm reconstructs an address from its
kneading sequence and shift-orbit order data.
"""

from dataclasses import dataclass
from math import gcd

from .errors import (
    ConsistencyError,
    ConstantPivotError,
    PeriodicAddressError,
    UndefinedItineraryError,
)
from .symbolic import ExternalAddress, compare, partition_interval


class Itinerary(ExternalAddress):
    """An eventually periodic symbol sequence read off a dynamic partition.

    Same algebra as ExternalAddress; the subclass only records that the
    entries are partition labels rather than strip numbers.
    """


def _definedness_check(s, t):
    """Reject pairs whose itinerary the partition leaves undefined:
    shift^n(s) == t for some n >= 1.  Beyond the stated bound the orbit of
    s repeats, so the check is complete."""
    if t.is_constant():
        raise ConstantPivotError("itinerary pivot must be non-constant")
    ls, ks = s.preperiod_length, s.period_length
    kt = t.period_length
    bound = ls + ks * kt // gcd(ks, kt) + kt
    x = s
    for n in range(1, bound + 1):
        x = x.shift()
        if x == t:
            raise UndefinedItineraryError(
                "shift^%d of %s equals the pivot %s" % (n, s, t))


def _assemble(entries, preperiod_length):
    return Itinerary(entries[:preperiod_length], entries[preperiod_length:])


def itinerary_by_definition(s, t):
    """It(s|t) by direct interval membership: entry n is the u with
    shift^(n-1)(s) in I_u."""
    _definedness_check(s, t)
    ls, ks = s.preperiod_length, s.period_length
    side = compare(t.shift(), t)
    t1 = t.entry(1)
    offset = 0 if side > 0 else -1
    entries = []
    x = s
    for _ in range(ls + ks):
        x1 = x.entry(1)
        hit = None
        for a in (x1 - 1, x1):
            if partition_interval(t, a - t1 - offset).contains(x):
                hit = a - t1 - offset
                break
        if hit is None:
            raise UndefinedItineraryError("%s lies on a partition boundary of %s" % (x, t))
        entries.append(hit)
        x = x.shift()
    return _assemble(entries, ls)


def itinerary_by_algorithm(s, t):
    """It(s|t) by the entrywise construction u_n = s_n - t_1 + delta_n,
    delta_n in {-1, 0, 1} decided by order comparisons against the pivot."""
    _definedness_check(s, t)
    ls, ks = s.preperiod_length, s.period_length
    side = compare(t.shift(), t)
    t1 = t.entry(1)
    entries = []
    x = s
    for n in range(1, ls + ks + 1):
        x = x.shift()
        rel = compare(x, t)
        if side > 0 and rel < 0:
            delta = -1
        elif side < 0 and rel > 0:
            delta = 1
        else:
            delta = 0
        entries.append(s.entry(n) - t1 + delta)
    return _assemble(entries, ls)


def kneading(s):
    """K(s) = It(s|s), the combinatorial invariant of the singular orbit.

    Defined for every strictly preperiodic non-constant address: the shift
    orbit of such an address never returns to it.
    """
    if s.is_constant():
        raise ConstantPivotError("kneading of a constant address is undefined")
    if not s.is_strictly_preperiodic():
        raise PeriodicAddressError("kneading requires a strictly preperiodic address")
    return itinerary_by_algorithm(s, s)


def kneading_period(s):
    """Period k' of K(s); divides the address period and equals the period
    of the actual singular orbit at the located parameter."""
    return kneading(s).period_length


@dataclass(frozen=True)
class OrderData:
    """Order of shift^n(s) against s for n = 1 .. l+k, stored as -1/+1.

    Tail periodicity of the orbit makes these finitely many relations
    determine the relation for every n.
    """

    preperiod: int
    period: int
    relations: tuple

    def __post_init__(self):
        if len(self.relations) != self.preperiod + self.period:
            raise ConsistencyError("need exactly preperiod+period relations")
        if any(r not in (-1, 1) for r in self.relations):
            raise ConsistencyError("relations must be -1 (less) or +1 (greater)")

    def relation(self, n):
        if n < 1:
            raise IndexError("relations are 1-indexed")
        l, k = self.preperiod, self.period
        if n <= l + k:
            return self.relations[n - 1]
        return self.relations[l + (n - l - 1) % k]


def orbit_order(s):
    """OrderData of a strictly preperiodic address."""
    if not s.is_strictly_preperiodic():
        raise PeriodicAddressError("order data requires a strictly preperiodic address")
    l, k = s.preperiod_length, s.period_length
    rels = []
    x = s
    for _ in range(l + k):
        x = x.shift()
        rel = compare(x, s)
        if rel == 0:
            raise PeriodicAddressError("address returned to itself under the shift")
        rels.append(rel)
    return OrderData(l, k, tuple(rels))


def recover_address(u, order):
    """Invert the kneading construction: the unique address s with first
    entry 0 whose kneading sequence is u and whose shift orbit realizes the
    given order data.  Verified by recomputing both; inconsistent input
    raises."""
    l = order.preperiod
    k = order.period
    if u.preperiod_length != l:
        raise ConsistencyError(
            "kneading preperiod %d does not match order data preperiod %d"
            % (u.preperiod_length, l))
    first = order.relation(1)
    entries = []
    for n in range(1, l + k + 1):
        rel = order.relation(n)
        if first > 0 and rel < 0:
            delta = -1
        elif first < 0 and rel > 0:
            delta = 1
        else:
            delta = 0
        entries.append(u.entry(n) - delta)
    s = ExternalAddress(entries[:l], entries[l:])
    if s.entry(1) != 0 or s.preperiod_length != l or s.period_length != k:
        raise ConsistencyError("no address with first entry 0 realizes this data")
    if kneading(s) != u or orbit_order(s) != order:
        raise ConsistencyError("reconstructed address fails verification")
    return s
