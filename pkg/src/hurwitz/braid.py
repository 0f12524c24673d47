"""Hurwitz braid action on Nielsen tuples: twists, orbits, cusps.

The Hurwitz monodromy group is generated by the twist q2 and the left
rotation sh; the other twists are conjugates of q2 by powers of sh, so orbit
closures only ever apply those two moves.  Everything acts on canonical
representatives: apply a move to a representative, re-canonicalize, repeat.

Cusps are the orbits of gamma_infinity = q2 on a braid orbit; their lengths
are the cusp widths.  Labels follow the scheme O_{i,j}^w with i the braid
orbit's 1-based position (orbits sorted by size then least member), j the
cusp's position (cusps sorted by descending width then least member) and w
the width.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import BudgetError, ValidationError
from .groups import ClassVector, FiniteGroup
from .nielsen import (
    Mode,
    NielsenClassSet,
    _qi,
    _qi_inv,
    _sh,
    enumerate_nielsen,
    is_nielsen_tuple,
    random_nielsen_tuple,
)


def apply_qi(group: FiniteGroup, t: tuple, i: int) -> tuple:
    """Twist q_i, 1-based: (..., g_i, g_{i+1}, ...) -> (..., g_i g_{i+1} g_i^-1, g_i, ...)."""
    if not 1 <= i <= len(t) - 1:
        raise ValidationError(f"twist index {i} out of range 1..{len(t) - 1}")
    return _qi(group, t, i)


def apply_qi_inv(group: FiniteGroup, t: tuple, i: int) -> tuple:
    if not 1 <= i <= len(t) - 1:
        raise ValidationError(f"twist index {i} out of range 1..{len(t) - 1}")
    return _qi_inv(group, t, i)


def apply_sh(group: FiniteGroup, t: tuple) -> tuple:
    """Left rotation (g_2, ..., g_r, g_1)."""
    return _sh(group, t)


def _canonicalizer(ni: NielsenClassSet):
    if ni.mode is Mode.RAW:
        return lambda t: t
    action = ni.action
    if ni.mode.reduced:
        return action.reduced_canonical_tuple
    return action.canonical_tuple


@dataclass(frozen=True)
class CuspOrbit:
    label: str
    width: int
    members: tuple
    braid_label: str
    ni: NielsenClassSet = field(compare=False, repr=False)

    @property
    def rep(self) -> tuple:
        return self.members[0]


@dataclass(frozen=True)
class BraidOrbit:
    index: int
    label: str
    members: tuple
    ni: NielsenClassSet = field(compare=False, repr=False)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def rep(self) -> tuple:
        return self.members[0]

    def member_index(self) -> dict:
        idx = getattr(self, "_member_index", None)
        if idx is None:
            idx = {m: i for i, m in enumerate(self.members)}
            object.__setattr__(self, "_member_index", idx)
        return idx

    def cusps(self) -> tuple[CuspOrbit, ...]:
        got = getattr(self, "_cusps", None)
        if got is None:
            got = cusp_orbits(self)
            object.__setattr__(self, "_cusps", got)
        return got

    def to_dict(self, with_members: bool = False) -> dict:
        group = self.ni.group
        out = {
            "orbit_label": self.label,
            "size": self.size,
            "cusps": [
                {
                    "label": c.label,
                    "width": c.width,
                    "rep": [group.format(g) for g in c.rep],
                }
                for c in self.cusps()
            ],
        }
        if with_members:
            out["members"] = [[group.format(g) for g in t] for t in self.members]
        return out


def braid_orbits(ni: NielsenClassSet, workers: int = 1,
                 orbit_cap: int | None = None) -> tuple[BraidOrbit, ...]:
    """Partition of the Nielsen set into ⟨q2, sh⟩ orbits.

    Orbits come back sorted by (size, least canonical member) and labeled
    "O1", "O2", ...; the partition does not depend on seed order or worker
    count.
    """
    group = ni.group
    canon = _canonicalizer(ni)
    rep_set = set(ni.reps)
    unseen = set(ni.reps)
    raw_orbits: list[frozenset] = []
    for seed in ni.reps:
        if seed not in unseen:
            continue
        members = {seed}
        frontier = [seed]
        while frontier:
            images = _expand_frontier(group, canon, frontier, workers)
            frontier = []
            for v in images:
                if v not in members:
                    if v not in rep_set:
                        raise ValidationError(
                            "braid move left the enumerated Nielsen set; "
                            "canonicalization and enumeration disagree"
                        )
                    members.add(v)
                    frontier.append(v)
            if orbit_cap is not None and len(members) > orbit_cap:
                raise BudgetError(f"braid orbit exceeded cap {orbit_cap}")
        unseen -= members
        raw_orbits.append(frozenset(members))
    raw_orbits.sort(key=lambda s: (len(s), min(s)))
    return tuple(
        BraidOrbit(index=i + 1, label=f"O{i + 1}", members=tuple(sorted(s)), ni=ni)
        for i, s in enumerate(raw_orbits)
    )


def _expand_frontier(group, canon, frontier, workers):
    def expand(t):
        return (canon(_qi(group, t, 2)), canon(_sh(group, t)))

    if workers > 1 and len(frontier) > 2 * workers:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(expand, frontier))
    else:
        pairs = [expand(t) for t in frontier]
    return [v for pair in pairs for v in pair]


def cusp_orbits(orbit: BraidOrbit) -> tuple[CuspOrbit, ...]:
    """gamma_infinity = q2 orbits on the braid orbit's members."""
    ni = orbit.ni
    group = ni.group
    canon = _canonicalizer(ni)
    unseen = set(orbit.members)
    raw: list[frozenset] = []
    for seed in orbit.members:
        if seed not in unseen:
            continue
        members = {seed}
        t = seed
        while True:
            t = canon(_qi(group, t, 2))
            if t in members:
                break
            members.add(t)
        unseen -= members
        raw.append(frozenset(members))
    raw.sort(key=lambda s: (-len(s), min(s)))
    return tuple(
        CuspOrbit(
            label="O_{%d,%d}^%d" % (orbit.index, j + 1, len(s)),
            width=len(s),
            members=tuple(sorted(s)),
            braid_label=orbit.label,
            ni=ni,
        )
        for j, s in enumerate(raw)
    )


# ---------------------------------------------------------------------------
# relation checking


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    passed: bool
    details: str = ""


@dataclass(frozen=True)
class PropertyReport:
    checks: tuple[PropertyCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "details": c.details}
                for c in self.checks
            ],
        }


def _conj_tuple(group, t, a):
    ainv = group.inv(a)
    return tuple(group.mul(group.mul(ainv, g), a) for g in t)


def verify_braid_relations(group: FiniteGroup, cv: ClassVector,
                           sample_size: int = 25, seed: int = 0) -> PropertyReport:
    """Check the defining relations of the braid action on sampled tuples.

    Covers: q_i q_{i+1} q_i = q_{i+1} q_i q_{i+1}; sh-conjugation
    sh q_i sh^-1 = q_{i+1}; q_i q_i^-1 = id; sh^r = id; invariance of
    product-one/classes/generation; R_H acting by conjugation (so trivially
    on inner classes); and for r = 4 the reduced relations γ0³ = 1 and
    γ0 γ1 γ∞ = 1 on reduced canonical forms.
    """
    r = cv.r
    rng = random.Random(seed)
    sample = [random_nielsen_tuple(group, cv, rng) for _ in range(sample_size)]
    checks: list[PropertyCheck] = []

    def record(name: str, failures: list[str]):
        checks.append(PropertyCheck(name, not failures, "; ".join(failures[:3])))

    fails = []
    for t in sample:
        for i in range(1, r):
            u = _qi(group, t, i)
            if not is_nielsen_tuple(group, cv, u):
                fails.append(f"q{i} broke invariants on {t}")
        if not is_nielsen_tuple(group, cv, _sh(group, t)):
            fails.append(f"sh broke invariants on {t}")
    record("moves preserve product-one, classes, generation", fails)

    fails = []
    for t in sample:
        for i in range(1, r - 1):
            lhs = _qi(group, _qi(group, _qi(group, t, i), i + 1), i)
            rhs = _qi(group, _qi(group, _qi(group, t, i + 1), i), i + 1)
            if lhs != rhs:
                fails.append(f"braid relation failed at i={i} on {t}")
    record("q_i q_{i+1} q_i = q_{i+1} q_i q_{i+1}", fails)

    fails = []
    for t in sample:
        for i in range(1, r - 1):
            via = _sh(group, t)
            via = _qi(group, via, i)
            via = tuple(via[-1:] + via[:-1])  # sh^-1 is the right rotation
            if via != _qi(group, t, i + 1):
                fails.append(f"sh-conjugation failed at i={i} on {t}")
    record("sh q_i sh^-1 = q_{i+1}", fails)

    fails = []
    for t in sample:
        for i in range(1, r):
            if _qi_inv(group, _qi(group, t, i), i) != t:
                fails.append(f"q{i} inverse failed on {t}")
        u = t
        for _ in range(r):
            u = _sh(group, u)
        if u != t:
            fails.append(f"sh^{r} != id on {t}")
    record("q_i q_i^-1 = id and sh^r = id", fails)

    fails = []
    for t in sample:
        u = t
        for i in range(1, r):
            u = _qi(group, u, i)
        for i in range(r - 1, 0, -1):
            u = _qi(group, u, i)
        if not any(_conj_tuple(group, t, a) == u for a in group.elements):
            fails.append(f"R_H is not a conjugation on {t}")
    record("R_H = q_1..q_{r-1} q_{r-1}..q_1 acts by conjugation", fails)

    if r == 4:
        ni = enumerate_nielsen(group, cv, Mode.INNER_REDUCED)
        action = ni.action
        rc = action.reduced_canonical_tuple

        def gamma0(x):
            return rc(_qi(group, _qi(group, x, 1), 2))

        def gamma1(x):
            return rc(_qi(group, _qi(group, _qi(group, x, 1), 2), 1))

        def gammainf(x):
            return rc(_qi(group, x, 2))

        fails = []
        for x in ni.reps:
            if gamma0(gamma0(gamma0(x))) != x:
                fails.append(f"gamma0^3 != id at {x}")
        record("gamma0^3 = 1 on reduced classes", fails)

        fails = []
        for x in ni.reps:
            if gammainf(gamma1(gamma0(x))) != x:
                fails.append(f"gamma0 gamma1 gammainf != id at {x}")
        record("gamma0 gamma1 gammainf = 1 on reduced classes", fails)

        fails = []
        for x in ni.reps:
            if rc(_sh(group, _sh(group, x))) != x:
                fails.append(f"sh^2 moved reduced class {x}")
        record("sh^2 fixes reduced classes", fails)

    inner = enumerate_nielsen(group, cv, Mode.INNER)
    can = inner.action.canonical_tuple
    fails = []
    for t in sample:
        u = t
        for i in range(1, r):
            u = _qi(group, u, i)
        for i in range(r - 1, 0, -1):
            u = _qi(group, u, i)
        if can(u) != can(t):
            fails.append(f"R_H moved the inner class of {t}")
    record("R_H fixes inner classes", fails)

    return PropertyReport(tuple(checks))
