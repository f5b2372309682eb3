"""Equivalence classes of preperiodic external addresses.

Two addresses describe the same postsingularly finite exponential map iff
each has the other's kneading sequence as its itinerary.  Classes are
enumerated by a bounded search: the entrywise itinerary identity forces
every candidate entry into a three-letter alphabet, so searching all
delta assignments is exhaustive.  A shift-preimage construction along the
singular orbit provides an independent route to the periodic members and
is kept as a cross-check.
"""

from dataclasses import dataclass
from itertools import product

from .errors import (
    ClassSizeViolationError,
    ConsistencyError,
    FirstEntryNonzeroError,
    PeriodicAddressError,
    SearchLimitError,
    UndefinedItineraryError,
)
from .itinerary import Itinerary, itinerary_by_algorithm, kneading
from .symbolic import ExternalAddress, compare, enumerate_addresses, partition_interval, pullback

DELTA_SEARCH_CAP = 20


def _require_class_input(s):
    if not s.is_strictly_preperiodic():
        raise PeriodicAddressError("classification requires a strictly preperiodic address")
    if s.entry(1) != 0:
        raise FirstEntryNonzeroError("classification requires first entry 0, got %s" % s)


@dataclass(frozen=True)
class AddressClass:
    """All addresses equivalent to a given one, with their shared invariants."""

    members: tuple
    kneading: Itinerary
    preperiod: int
    period: int
    kneading_period: int

    @property
    def size(self):
        return len(self.members)

    @property
    def representative(self):
        return self.members[0]

    def expected_sizes(self):
        """Sizes allowed by the counting law: k/k' when k > k', else 1 or 2."""
        if self.period > self.kneading_period:
            return (self.period // self.kneading_period,)
        return (1, 2)


def are_equivalent(s, s2):
    """Whether s and s2 describe the same postsingularly finite map:
    It(s2|s) = K(s).  The mirrored condition It(s|s2) = K(s2) is computed
    as well and must agree; disagreement indicates a bug and raises."""
    _require_class_input(s)
    _require_class_input(s2)

    def _condition(a, b):
        # It(a|b) == K(b), with an undefined itinerary counting as "no"
        try:
            return itinerary_by_algorithm(a, b) == kneading(b)
        except UndefinedItineraryError:
            return False

    forward = _condition(s2, s)
    backward = _condition(s, s2)
    if forward != backward:
        raise ConsistencyError(
            "one-sided equivalence between %s and %s" % (s, s2))
    if forward and (s.preperiod_length != s2.preperiod_length
                    or s.period_length != s2.period_length):
        raise ConsistencyError(
            "equivalent addresses %s and %s with different shapes" % (s, s2))
    return forward


def _primitive(word):
    k = len(word)
    for d in range(1, k):
        if k % d == 0 and word == word[:d] * (k // d):
            return False
    return True


def equivalence_class(s):
    """Enumerate the full equivalence class of s.

    Every candidate entry satisfies c_n = u_n - delta_n with delta_n in
    {-1, 0, 1} (and delta_1 = 0 since members start with 0), so the search
    over delta words is complete.  The resulting count is checked against
    the k/k' law; a violation means an implementation bug and raises.
    """
    _require_class_input(s)
    l, k = s.preperiod_length, s.period_length
    total = l + k
    if total > DELTA_SEARCH_CAP:
        raise SearchLimitError("class search capped at preperiod+period <= %d" % DELTA_SEARCH_CAP)
    u = kneading(s)
    ue = u.expand(total)
    side = compare(s.shift(), s)
    s_ref = s.expand(total)

    found = []
    for deltas in product((-1, 0, 1), repeat=total - 1):
        w = [0] + [ue[i] - deltas[i - 1] for i in range(1, total)]
        pre, per = w[:l], w[l:]
        if pre[-1] == per[-1] or not _primitive(per):
            continue
        # candidate expanded far enough to settle every comparison below
        ce = [w[i] if i < l else w[l + (i - l) % k] for i in range(2 * total)]
        ok = True
        for n in range(1, total + 1):
            rel = 0
            for i in range(total):
                d = ce[n + i] - s_ref[i]
                if d:
                    rel = -1 if d < 0 else 1
                    break
            if rel == 0:
                ok = False  # shift of candidate hits the pivot: undefined
                break
            if side > 0 and rel < 0:
                delta = -1
            elif side < 0 and rel > 0:
                delta = 1
            else:
                delta = 0
            if w[n - 1] + delta != ue[n - 1]:
                ok = False
                break
        if ok:
            found.append(w)

    members = sorted(
        {ExternalAddress(w[:l], w[l:]) for w in found},
        key=lambda a: (a.preperiod, a.period))
    cls = AddressClass(tuple(members), u, l, k, u.period_length)
    if cls.size not in cls.expected_sizes():
        raise ClassSizeViolationError(
            "class of %s has %d members, law allows %s"
            % (s, cls.size, cls.expected_sizes()))
    if s not in members:
        raise ConsistencyError("search lost the seed address %s" % s)
    return cls


def members_by_pullback(s):
    """Independent reconstruction of class members: start from each
    periodic shift of s whose itinerary tail matches, and pull back along
    the kneading entries u_l, ..., u_1.  Finds all members when k > k'
    (it cannot see a second member of a k = k' class)."""
    _require_class_input(s)
    l, k = s.preperiod_length, s.period_length
    u = kneading(s)
    kp = u.period_length
    out = set()
    sigma_s = s.shift()
    for m in range(0, k, kp):
        x = s.shifted(l + m)
        for n in range(l, 0, -1):
            if n == 1:
                # the final preimage in I_0 starts with 0; pullback itself
                # rejects the x == sigma(s) boundary case, which is the
                # chain that reproduces s
                cand = x.prepend(0) if x == sigma_s else pullback(x, s, u.entry(1))
                if not partition_interval(s, 0).contains(cand):
                    raise ConsistencyError("pullback chain left I_0 at %s" % cand)
                x = cand
            else:
                x = pullback(x, s, u.entry(n))
        out.add(x)
    return out


def class_invariants_report(s):
    """Machine-readable consistency report for the class of s.

    Verifies the pairwise itinerary conditions on the enumerated members
    (each member's itinerary with respect to any other equals the shared
    kneading sequence) and the counting law.  The parameter-plane
    conditions are checked numerically elsewhere.
    """
    cls = equivalence_class(s)
    u = cls.kneading
    cond_forward = True
    cond_backward = True
    cond_all_equal = True
    for a in cls.members:
        for b in cls.members:
            it_ab = itinerary_by_algorithm(a, b)
            if it_ab != kneading(b):
                cond_forward = False
            if itinerary_by_algorithm(b, a) != kneading(a):
                cond_backward = False
            if it_ab != u:
                cond_all_equal = False
    shapes_ok = all(
        m.preperiod_length == cls.preperiod and m.period_length == cls.period
        for m in cls.members)
    pullback_ok = members_by_pullback(s) <= set(cls.members)
    return {
        "address": str(s),
        "kneading": str(u),
        "l": cls.preperiod,
        "k": cls.period,
        "k_prime": cls.kneading_period,
        "members": [str(m) for m in cls.members],
        "class_size": cls.size,
        "checks": {
            "itinerary_vs_each_member": cond_forward,
            "mirrored_itinerary": cond_backward,
            "all_itineraries_equal_kneading": cond_all_equal,
            "shapes_match": shapes_ok,
            "size_law": cls.size in cls.expected_sizes(),
            "pullback_members_found_by_search": pullback_ok,
        },
    }


def sweep_classes(entry_bound, max_preperiod, max_period):
    """Yield every distinct equivalence class over the corpus of canonical
    addresses with first entry 0, preperiod <= max_preperiod, period <=
    max_period and entries bounded by entry_bound."""
    seen = set()
    for l in range(1, max_preperiod + 1):
        for k in range(1, max_period + 1):
            for s in enumerate_addresses(l, k, entry_bound):
                if s in seen:
                    continue
                cls = equivalence_class(s)
                seen.update(cls.members)
                yield cls
