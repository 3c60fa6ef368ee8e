"""Reduced Groebner bases and the ideal-theoretic queries built on them.

The engine is plain Buchberger with the product and chain criteria and
normal (smallest-lcm-first) pair selection; instances here are tiny and
determinism matters more than raw speed.  Division is heap-driven so each
monomial of the work polynomial is visited once in descending order.

Over the rationals the internal reductions are fraction-free: work
polynomials carry integer coefficients and are rescaled instead of divided,
then stripped to primitive form.  Exact rational division happens only in
the public normal-form path, where the remainder itself must be exact.

``buchberger`` memoizes reduced bases behind a lock: the reduced basis is a
pure function of (generators, order), and the certification paths recompute
the same prefix ideals the construction already visited.
"""

from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NonHomogeneousError, RingMismatchError, UsageError
from .linalg import Matrix, rref
from .poly import (Exponents, GREVLEX, Monomial, PolyRing, Polynomial,
                   monomials_of_degree)

# compiled reducer entry: (lead exponents, lead coefficient, tail term items)
_Compiled = Tuple[Exponents, object, Tuple[Tuple[Exponents, object], ...]]


def _compile(polys: Sequence[Polynomial]) -> List[_Compiled]:
    out = []
    for g in polys:
        lead = g.lead_exps()
        tail = tuple((m, c) for m, c in g._terms.items() if m != lead)
        out.append((lead, g._terms[lead], tail))
    return out


def _reduce_terms(ring: PolyRing, terms: Dict[Exponents, object],
                  compiled: Sequence[_Compiled],
                  record: Optional[List[Dict[Exponents, object]]] = None):
    """Exact full remainder of the multivariate division algorithm."""
    heap_key = ring.order.heap_key
    pending = dict(terms)
    heap = [(heap_key(m), m) for m in pending]
    heapq.heapify(heap)
    remainder: Dict[Exponents, object] = {}
    push = heapq.heappush
    while heap:
        m = heapq.heappop(heap)[1]
        c = pending.pop(m, None)
        if c is None or not c:
            continue
        for idx, (lead, lc, tail) in enumerate(compiled):
            ok = True
            for a, b in zip(m, lead):
                if a < b:
                    ok = False
                    break
            if ok:
                break
        else:
            remainder[m] = c
            continue
        q = c / lc
        shift = tuple(a - b for a, b in zip(m, lead))
        if record is not None:
            record[idx][shift] = record[idx].get(shift, ring.field.zero()) + q
        for tm, tc in tail:
            nm = tuple(a + b for a, b in zip(tm, shift))
            prev = pending.get(nm)
            if prev is None:
                pending[nm] = -q * tc
                push(heap, (heap_key(nm), nm))
            else:
                pending[nm] = prev - q * tc
    return remainder


def _pseudo_reduce(order, terms: Dict[Exponents, int],
                   compiled: Sequence[Tuple[Exponents, int, tuple]]):
    """Integer remainder equal to a positive scalar multiple of the exact
    one; the whole work state is rescaled instead of divided.  The state is
    stripped to primitive form periodically, otherwise the accumulated
    rescalings grow geometrically."""
    heap_key = order.heap_key
    pending = dict(terms)
    heap = [(heap_key(m), m) for m in pending]
    heapq.heapify(heap)
    remainder: Dict[Exponents, int] = {}
    push = heapq.heappush
    steps = 0
    while heap:
        m = heapq.heappop(heap)[1]
        c = pending.pop(m, None)
        if c is None or not c:
            continue
        for lead, lc, tail in compiled:
            ok = True
            for a, b in zip(m, lead):
                if a < b:
                    ok = False
                    break
            if ok:
                break
        else:
            remainder[m] = c
            continue
        d = gcd(lc, c)
        scale = lc // d
        mult = c // d
        if scale < 0:
            scale, mult = -scale, -mult
        if scale != 1:
            for k in pending:
                pending[k] *= scale
            for k in remainder:
                remainder[k] *= scale
        shift = tuple(a - b for a, b in zip(m, lead))
        for tm, tc in tail:
            nm = tuple(a + b for a, b in zip(tm, shift))
            prev = pending.get(nm)
            if prev is None:
                pending[nm] = -mult * tc
                push(heap, (heap_key(nm), nm))
            else:
                pending[nm] = prev - mult * tc
        steps += 1
        if steps & 7 == 0:
            g = 0
            for v in pending.values():
                if v:
                    g = gcd(g, v)
                    if g == 1:
                        break
            if g != 1:
                for v in remainder.values():
                    if v:
                        g = gcd(g, v)
                        if g == 1:
                            break
            if g > 1:
                for k in pending:
                    pending[k] //= g
                for k in remainder:
                    remainder[k] //= g
    return remainder


def _strip_int_terms(terms: Dict[Exponents, int], order) -> Dict[Exponents, int]:
    terms = {m: c for m, c in terms.items() if c}
    if not terms:
        return terms
    g = gcd(*terms.values())
    lead = max(terms, key=order.key)
    if terms[lead] < 0:
        g = -g
    if g != 1:
        terms = {m: c // g for m, c in terms.items()}
    return terms


class GroebnerBasis:
    """Reduced Groebner basis; elements sorted by leading monomial descending."""

    __slots__ = ("ring", "elements", "source", "_reducer")

    def __init__(self, ring: PolyRing, elements: Tuple[Polynomial, ...],
                 source: Tuple[Polynomial, ...]):
        self.ring = ring
        self.elements = elements
        self.source = source
        self._reducer = None

    @property
    def order(self):
        return self.ring.order

    def compiled(self) -> List[_Compiled]:
        if self._reducer is None:
            self._reducer = _compile(self.elements)
        return self._reducer

    def leading_exponents(self) -> List[Exponents]:
        return [g.lead_exps() for g in self.elements]

    @property
    def contains_unit(self) -> bool:
        return any(g.degree() == 0 for g in self.elements)

    def is_source_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.source)

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis) and self.ring == other.ring
                and self.elements == other.elements)

    def __repr__(self):
        return f"GroebnerBasis({len(self.elements)} elements in {self.ring})"


_CACHE_LIMIT = 4096
_cache: Dict[object, Tuple[Polynomial, ...]] = {}
_cache_lock = threading.Lock()


def clear_cache():
    with _cache_lock:
        _cache.clear()


def buchberger(generators: Sequence[Polynomial]) -> GroebnerBasis:
    """The unique reduced Groebner basis of the generated ideal."""
    if not generators:
        raise UsageError("buchberger needs a nonempty generator list")
    ring = generators[0].ring
    for g in generators:
        if g.ring != ring:
            raise RingMismatchError("generators live in different rings")
    seeds = tuple(g.canonical() for g in generators if g)
    key = (ring, frozenset(seeds))
    with _cache_lock:
        hit = _cache.get(key)
    if hit is None:
        hit = _buchberger_core(ring, seeds)
        with _cache_lock:
            if len(_cache) >= _CACHE_LIMIT:
                _cache.clear()
            _cache[key] = hit
    return GroebnerBasis(ring, hit, tuple(generators))


def _buchberger_core(ring: PolyRing, seeds: Tuple[Polynomial, ...]) -> Tuple[Polynomial, ...]:
    if ring.field.is_rational:
        to_work = lambda p: {m: c.numerator for m, c in p._terms.items()}
        reduce_work = _pseudo_reduce
        strip = lambda terms: _strip_int_terms(terms, ring.order)
        from_work = lambda terms: Polynomial(
            ring, {m: ring.field.of(c) for m, c in terms.items()})
    else:
        to_work = lambda p: dict(p._terms)
        reduce_work = lambda order, terms, compiled: _reduce_terms(ring, terms, compiled)
        strip = lambda terms: _strip_modp(ring, terms)
        from_work = lambda terms: Polynomial(ring, terms)

    order = ring.order
    order_key = order.key
    basis: List[Dict[Exponents, object]] = []   # work-form term dicts
    leads: List[Exponents] = []
    compiled: List[tuple] = []
    pairs: List[Tuple[object, int, int]] = []
    done = set()

    def add(terms: Dict[Exponents, object]):
        new = len(basis)
        lead = max(terms, key=order_key)
        for i in range(new):
            li = leads[i]
            lcm_e = tuple(max(a, b) for a, b in zip(li, lead))
            heapq.heappush(pairs, (order_key(lcm_e), i, new))
        basis.append(terms)
        leads.append(lead)
        compiled.append((lead, terms[lead],
                         tuple((m, c) for m, c in terms.items() if m != lead)))

    for g in seeds:
        r = strip(reduce_work(order, to_work(g), compiled))
        if r:
            add(r)

    while pairs:
        _, i, j = heapq.heappop(pairs)
        if (i, j) in done:
            continue
        done.add((i, j))
        li, lj = leads[i], leads[j]
        lcm_e = tuple(max(a, b) for a, b in zip(li, lj))
        # product criterion: coprime leading monomials
        if all(a + b == c for a, b, c in zip(li, lj, lcm_e)):
            continue
        # chain criterion: a third element divides the lcm and both side
        # pairs were already treated
        skip = False
        for k in range(len(basis)):
            if k == i or k == j:
                continue
            lk = leads[k]
            if all(a <= b for a, b in zip(lk, lcm_e)):
                pik = (i, k) if i < k else (k, i)
                pjk = (j, k) if j < k else (k, j)
                if pik in done and pjk in done:
                    skip = True
                    break
        if skip:
            continue
        s = _work_spoly(basis[i], basis[j], li, lj, lcm_e)
        if not s:
            continue
        r = strip(reduce_work(order, s, compiled))
        if r:
            add(r)

    polys = [from_work(terms).canonical() for terms in basis]
    return _reduce_basis(ring, polys)


def _strip_modp(ring: PolyRing, terms):
    terms = {m: c for m, c in terms.items() if c}
    if not terms:
        return terms
    lead = max(terms, key=ring.order.key)
    inv = terms[lead].inverse()
    return {m: c * inv for m, c in terms.items()}


def _work_spoly(f: Dict[Exponents, object], g: Dict[Exponents, object],
                lf: Exponents, lg: Exponents, lcm_e: Exponents):
    """Cross-multiplied S-polynomial on raw term dicts."""
    cf, cg = f[lf], g[lg]
    sf = tuple(a - b for a, b in zip(lcm_e, lf))
    sg = tuple(a - b for a, b in zip(lcm_e, lg))
    out: Dict[Exponents, object] = {}
    for m, c in f.items():
        out[tuple(a + b for a, b in zip(m, sf))] = c * cg
    for m, c in g.items():
        nm = tuple(a + b for a, b in zip(m, sg))
        prev = out.get(nm)
        if prev is None:
            out[nm] = -c * cf
        else:
            s = prev - c * cf
            if s:
                out[nm] = s
            else:
                del out[nm]
    return out


def _reduce_basis(ring: PolyRing, basis: List[Polynomial]) -> Tuple[Polynomial, ...]:
    # minimalize: drop elements whose lead is divisible by another lead
    # (leads are pairwise distinct here, so no mutual drops can occur)
    keep: List[Polynomial] = []
    for i, g in enumerate(basis):
        lg = g.lead_exps()
        divisible = any(
            j != i and all(a <= b for a, b in zip(basis[j].lead_exps(), lg))
            for j in range(len(basis)))
        if not divisible:
            keep.append(g)
    # tail-reduce every survivor against the others
    reduced: List[Polynomial] = []
    for i, g in enumerate(keep):
        others = _compile([h for j, h in enumerate(keep) if j != i])
        r = _reduce_terms(ring, g._terms, others)
        reduced.append(Polynomial(ring, r).canonical())
    reduced.sort(key=lambda p: ring.order.key(p.lead_exps()), reverse=True)
    return tuple(reduced)


def normal_form(f: Polynomial, gb: GroebnerBasis,
                record: Optional[List[Dict[Exponents, object]]] = None) -> Polynomial:
    """Unique remainder of f modulo the reduced basis."""
    if f.ring != gb.ring:
        raise RingMismatchError("polynomial and basis rings differ")
    if not f or not gb.elements:
        return f
    return Polynomial(f.ring, _reduce_terms(f.ring, f._terms, gb.compiled(), record))


def division_witness(f: Polynomial, gb: GroebnerBasis):
    """(remainder, quotients) with f == sum(q_i * g_i) + remainder exactly."""
    record: List[Dict[Exponents, object]] = [{} for _ in gb.elements]
    r = normal_form(f, gb, record)
    quotients = [Polynomial(f.ring, {m: c for m, c in rec.items() if c})
                 for rec in record]
    return r, quotients


def is_member(f: Polynomial, gb: GroebnerBasis) -> bool:
    return normal_form(f, gb).is_zero


@dataclass(frozen=True)
class GradedPiece:
    """Basis of the degree-n slice of a homogeneous ideal."""

    degree: int
    basis: Tuple[Polynomial, ...]
    ambient_dimension: int

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _require_graded_homogeneous(gb: GroebnerBasis):
    if not gb.order.is_graded:
        raise UsageError("graded-piece computations need a graded (grevlex) order")
    if not gb.is_source_homogeneous():
        raise NonHomogeneousError("ideal is not homogeneous")


def graded_piece(gb: GroebnerBasis, n: int) -> GradedPiece:
    """Degree-n slice of the ideal, via normal forms of the degree-n
    monomials followed by row reduction."""
    _require_graded_homogeneous(gb)
    ring = gb.ring
    mons = monomials_of_degree(ring, n)
    col = {m.exps: i for i, m in enumerate(mons)}
    rows = []
    zero = ring.field.zero()
    for m in mons:
        mono = ring.monomial(m.exps)
        diff = mono - normal_form(mono, gb)
        if diff:
            vec = [zero] * len(mons)
            for e, c in diff._terms.items():
                vec[col[e]] = c
            rows.append(vec)
    if not rows:
        return GradedPiece(n, (), len(mons))
    red = rref(Matrix(ring.field, rows))
    basis = []
    for r in range(red.rank):
        terms = {mons[j].exps: red.matrix.entry(r, j)
                 for j in range(len(mons)) if red.matrix.entry(r, j)}
        basis.append(Polynomial(ring, terms).canonical())
    return GradedPiece(n, tuple(basis), len(mons))


def hilbert_function(gb: GroebnerBasis, n: int) -> int:
    """Number of degree-n standard monomials (monomials outside the
    leading-term ideal)."""
    _require_graded_homogeneous(gb)
    leads = gb.leading_exponents()
    count = 0
    for m in monomials_of_degree(gb.ring, n):
        e = m.exps
        if not any(all(a >= b for a, b in zip(e, lead)) for lead in leads):
            count += 1
    return count


def affine_dimension(gb: GroebnerBasis) -> int:
    """Krull dimension of the quotient ring, from the leading-term ideal:
    the largest variable subset supporting no leading monomial.  The unit
    ideal has dimension -1 by convention."""
    if gb.contains_unit:
        return -1
    nvars = gb.ring.nvars
    supports = [frozenset(i for i, e in enumerate(lead) if e)
                for lead in gb.leading_exponents()]
    for size in range(nvars, 0, -1):
        for subset in combinations(range(nvars), size):
            chosen = set(subset)
            if not any(s <= chosen for s in supports):
                return size
    return 0


def is_projectively_empty(gb: GroebnerBasis) -> bool:
    """True iff the forms have no common projective zero: the leading-term
    ideal contains a pure power of every variable."""
    if not gb.is_source_homogeneous():
        raise NonHomogeneousError("projective emptiness needs a homogeneous ideal")
    if gb.contains_unit:
        return True
    pure = set()
    for lead in gb.leading_exponents():
        support = [i for i, e in enumerate(lead) if e]
        if len(support) == 1:
            pure.add(support[0])
    return len(pure) == gb.ring.nvars


def elimination_ideal(generators: Sequence[Polynomial],
                      eliminate_first_k: int) -> List[Polynomial]:
    """Generators of the intersection with the subring in the last
    variables; requires a block elimination order of matching block size."""
    if not generators:
        raise UsageError("empty generator list")
    ring = generators[0].ring
    if eliminate_first_k == 0:
        return list(buchberger(generators).elements)
    if ring.order.kind != "block" or ring.order.first_block != eliminate_first_k:
        raise UsageError(
            "elimination needs a block_elimination order with matching block size")
    gb = buchberger(generators)
    k = eliminate_first_k
    small = PolyRing(ring.names[k:], ring.field, GREVLEX)
    out = []
    for g in gb.elements:
        if all(not any(m[:k]) for m in g._terms):
            out.append(Polynomial(small, {m[k:]: c for m, c in g._terms.items()})
                       .canonical())
    out.sort(key=lambda p: small.order.key(p.lead_exps()), reverse=True)
    return out
