"""Multivariate polynomials over QQ, Groebner bases, saturation and elimination.

Monomials are exponent tuples over a fixed ordered variable list.  Every
supported term order is given by a linear key on exponent vectors, so the key
of a product is the componentwise sum of the keys; the Buchberger loop relies
on that to avoid recomputing keys for shifted terms.
"""

from __future__ import annotations

import heapq
import itertools
import math
import re
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]


class BudgetExceeded(RuntimeError):
    """Raised when a Groebner computation exceeds one of its resource caps."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class Budget:
    max_degree: int | None = None
    max_basis: int | None = None
    max_seconds: float | None = None

    def deadline(self) -> float | None:
        return None if self.max_seconds is None else time.monotonic() + self.max_seconds


UNLIMITED = Budget()


# --------------------------------------------------------------------------
# orders


@dataclass(frozen=True)
class MonomialOrder:
    """A term order: ``lex``, ``degrevlex`` or a two-block elimination order.

    For ``block`` orders, ``first`` lists the variable indices of the block that
    is eliminated; both blocks are ordered by degrevlex internally.
    """

    kind: str = "degrevlex"
    first: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    @classmethod
    def lex(cls) -> "MonomialOrder":
        return cls("lex")

    @classmethod
    def degrevlex(cls) -> "MonomialOrder":
        return cls("degrevlex")

    @classmethod
    def elimination(cls, first: Iterable[int]) -> "MonomialOrder":
        return cls("block", tuple(sorted(set(first))))

    def key_function(self, nvars: int):
        if self.kind == "lex":
            return lambda e: e
        if self.kind == "degrevlex":
            rev = tuple(range(nvars - 1, -1, -1))
            return lambda e: (sum(e),) + tuple(-e[i] for i in rev)
        a = tuple(i for i in self.first if i < nvars)
        b = tuple(i for i in range(nvars) if i not in set(a))
        ra, rb = a[::-1], b[::-1]

        def key(e):
            return ((sum(e[i] for i in a),) + tuple(-e[i] for i in ra)
                    + (sum(e[i] for i in b),) + tuple(-e[i] for i in rb))
        return key


DEGREVLEX = MonomialOrder.degrevlex()
LEX = MonomialOrder.lex()


# --------------------------------------------------------------------------
# rings and polynomials


class PolyRing:
    """Polynomial ring QQ[vars]; rings compare equal iff their variables do."""

    def __init__(self, variables: Sequence[str]):
        names = tuple(str(v) for v in variables)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        if not names:
            raise ValueError("a ring needs at least one variable")
        self.variables = names
        self.nvars = len(names)
        self._index = {v: i for i, v in enumerate(names)}

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.variables == self.variables

    def __hash__(self):
        return hash(self.variables)

    def __repr__(self):
        return f"PolyRing({list(self.variables)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"variable {name!r} not in ring") from None

    def gen(self, name: str) -> "Poly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def gens(self) -> tuple["Poly", ...]:
        return tuple(self.gen(v) for v in self.variables)

    def const(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def extend(self, names: Sequence[str], front: bool = False) -> "PolyRing":
        new = [n for n in names if n not in self._index]
        return PolyRing(new + list(self.variables) if front else list(self.variables) + new)

    def sub(self, names: Iterable[str]) -> "PolyRing":
        keep = set(names)
        return PolyRing([v for v in self.variables if v in keep])

    def parse(self, text: str) -> "Poly":
        return _PolyParser(self, text).parse()


class Poly:
    """Immutable polynomial with Fraction coefficients and no zero terms."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, object]):
        self.ring = ring
        clean = {}
        for m, c in terms.items():
            c = c if isinstance(c, Fraction) else Fraction(c)
            if c:
                clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    # -- basic protocol
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly(self.ring, {m: c * v for m, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- queries
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self, var: str) -> int:
        i = self.ring.index(var)
        return max((m[i] for m in self.terms), default=-1)

    def variables(self) -> set[str]:
        used = set()
        for m in self.terms:
            used.update(self.ring.variables[i] for i, e in enumerate(m) if e)
        return used

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def leading_term(self, order: MonomialOrder = DEGREVLEX) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key_function(self.ring.nvars)
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def monic(self, order: MonomialOrder = DEGREVLEX) -> "Poly":
        if not self.terms:
            return self
        return self * (1 / self.leading_term(order)[1])

    def primitive(self, order: MonomialOrder = DEGREVLEX) -> "Poly":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self.terms:
            return self
        den = math.lcm(*(c.denominator for c in self.terms.values()))
        ints = {m: int(c * den) for m, c in self.terms.items()}
        g = math.gcd(*ints.values())
        sign = 1 if ints[self.leading_term(order)[0]] > 0 else -1
        return Poly(self.ring, {m: Fraction(sign * v // g) for m, v in ints.items()})

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        values = [Fraction(point[v]) for v in self.ring.variables]
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in zip(values, m):
                if e:
                    t *= v ** e
            total += t
        return total

    def to_ring(self, ring: PolyRing) -> "Poly":
        """Re-express in ``ring``; every used variable must exist there."""
        if ring == self.ring:
            return self
        used = self.variables()
        pos = [ring.index(v) if v in used else -1 for v in self.ring.variables]
        out = {}
        for m, c in self.terms.items():
            e = [0] * ring.nvars
            for i, k in enumerate(m):
                if k:
                    e[pos[i]] = k
            out[tuple(e)] = c
        return Poly(ring, out)

    # -- printing
    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return self.format()

    def format(self, order: MonomialOrder = DEGREVLEX) -> str:
        if not self.terms:
            return "0"
        key = order.key_function(self.ring.nvars)
        parts = []
        for m in sorted(self.terms, key=key, reverse=True):
            c = self.terms[m]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.ring.variables, m) if e
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


# --------------------------------------------------------------------------
# string parsing for pencil entries and generic polynomial input

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class _PolyParser:
    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse polynomial at position {pos}: {self.text!r}")
            num, name, op = m.groups()
            self.tokens.append(("num", int(num)) if num else
                               ("var", name) if name else ("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if not self.tokens:
            raise ValueError("empty polynomial")
        p = self.expr()
        if self.i != len(self.tokens):
            raise ValueError(f"trailing input in polynomial {self.text!r}")
        return p

    def expr(self) -> Poly:
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        p = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                p = p + t if val == "+" else p - t
            else:
                return p

    def term(self) -> Poly:
        p = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                q = self.power()
                if val == "*":
                    p = p * q
                else:
                    if not q.is_constant() or q.is_zero():
                        raise ValueError("division only by nonzero constants")
                    p = p * (1 / q.constant_value())
            else:
                return p

    def power(self) -> Poly:
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, e = self.take()
            if kind != "num":
                raise ValueError("exponent must be a nonnegative integer")
            return base ** e
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "var":
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            p = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return p
        if kind == "op" and val == "-":
            return -self.atom()
        raise ValueError(f"unexpected token {val!r} in {self.text!r}")


# --------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class Ideal:
    ring: PolyRing
    generators: tuple[Poly, ...]

    def __init__(self, ring: PolyRing, generators: Iterable[Poly]):
        gens = []
        for g in generators:
            g = g.to_ring(ring) if g.ring != ring else g
            if g:
                gens.append(g)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", tuple(gens))

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise ValueError("ideals live in different rings")
        return Ideal(self.ring, self.generators + other.generators)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.generators)


@dataclass(frozen=True)
class GroebnerBasis(Ideal):
    """A reduced Groebner basis, carrying the order it was computed for."""

    order: MonomialOrder = field(default=DEGREVLEX)

    def __init__(self, ring: PolyRing, generators: Iterable[Poly], order: MonomialOrder):
        super().__init__(ring, generators)
        object.__setattr__(self, "order", order)

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_term(self.order)[0] for g in self.generators]

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self).is_zero()




# --------------------------------------------------------------------------
# internal integer machinery


def _mask(m: Monomial) -> int:
    r = 0
    for i, e in enumerate(m):
        if e:
            r |= 1 << i
    return r


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _content(values) -> int:
    g = 0
    for c in values:
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def _primitive(f: dict) -> dict:
    g = _content(f.values())
    if g > 1:
        return {m: c // g for m, c in f.items()}
    return f


def _to_int_terms(p: Poly) -> dict:
    den = math.lcm(*(c.denominator for c in p.terms.values())) if p.terms else 1
    return _primitive({m: int(c * den) for m, c in p.terms.items()})


class _Element:
    __slots__ = ("lm", "lc", "terms", "mask", "key")

    def __init__(self, terms: dict, lm: Monomial, key: tuple):
        self.terms = terms
        self.lm = lm
        self.lc = terms[lm]
        self.mask = _mask(lm)
        self.key = key


class _Engine:
    """Fraction-free Buchberger over ZZ with content normalisation."""

    def __init__(self, nvars: int, order: MonomialOrder, budget: Budget):
        self.nvars = nvars
        self.order = order
        self.keyf = order.key_function(nvars)
        self.keys: dict = {}
        self.budget = budget
        self.deadline = budget.deadline()
        self.pairs_done = 0
        self.zero_reductions = 0
        self.sugar = False

    def key(self, m: Monomial) -> tuple:
        k = self.keys.get(m)
        if k is None:
            k = self.keyf(m)
            self.keys[m] = k
        return k

    def element(self, terms: dict) -> _Element:
        key = self.key
        lm = max(terms, key=key)
        return _Element(terms, lm, key(lm))

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded(f"wall clock exceeded {self.budget.max_seconds}s")

    def reduce(self, f: dict, basis: Sequence[_Element]) -> dict:
        """Primitive integer multiple of the full normal form of ``f``."""
        if not f:
            return {}
        key = self.key
        f = dict(f)
        heap = [(tuple(-x for x in key(m)), m) for m in f]
        heapq.heapify(heap)
        out: dict = {}
        # f is the true remainder times ``scale``; each output term remembers
        # the scale in force when it was emitted
        scale = Fraction(1)
        steps = 0
        while heap:
            _, m = heapq.heappop(heap)
            c = f.get(m)
            if not c:
                continue
            mmask = _mask(m)
            red = None
            for b in basis:
                if b.mask & ~mmask:
                    continue
                if _divides(b.lm, m):
                    red = b
                    break
            del f[m]
            if red is None:
                out[m] = (c, scale)
                continue
            lc = red.lc
            g = math.gcd(c, lc)
            a, coef = lc // g, c // g
            if a < 0:
                a, coef = -a, -coef
            if a != 1:
                for mm in f:
                    f[mm] *= a
                scale *= a
            lm = red.lm
            shift = tuple(y - x for x, y in zip(lm, m))
            for tm, tc in red.terms.items():
                if tm is lm or tm == lm:
                    continue
                nm = tuple(x + y for x, y in zip(tm, shift))
                old = f.get(nm)
                if old is None:
                    f[nm] = -coef * tc
                    heapq.heappush(heap, (tuple(-x for x in key(nm)), nm))
                else:
                    v = old - coef * tc
                    if v:
                        f[nm] = v
                    else:
                        del f[nm]
            steps += 1
            self.check_time()
            if steps & 63 == 0:
                g2 = _content(f.values())
                if g2 > 1:
                    for mm in f:
                        f[mm] //= g2
                    scale /= g2
        if not out:
            return {}
        ratios: dict = {}
        vals = {}
        for idx, (m, (c, sc)) in enumerate(out.items()):
            r = ratios.get(id(sc))
            if r is None:
                r = ratios[id(sc)] = (scale / sc, sc)
            vals[m] = c * r[0]
            if idx & 15 == 15:
                self.check_time()
        den = math.lcm(*(v.denominator for v in vals.values()))
        return _primitive({m: int(v * den) for m, v in vals.items()})

    def spoly(self, f: _Element, g: _Element) -> dict:
        l = _lcm(f.lm, g.lm)
        gc = math.gcd(f.lc, g.lc)
        cf, cg = g.lc // gc, f.lc // gc
        sf = tuple(x - y for x, y in zip(l, f.lm))
        sg = tuple(x - y for x, y in zip(l, g.lm))
        out: dict = {}
        for m, c in f.terms.items():
            if m == f.lm:
                continue
            nm = tuple(x + y for x, y in zip(m, sf))
            out[nm] = out.get(nm, 0) + cf * c
        for m, c in g.terms.items():
            if m == g.lm:
                continue
            nm = tuple(x + y for x, y in zip(m, sg))
            v = out.get(nm, 0) - cg * c
            if v:
                out[nm] = v
            else:
                out.pop(nm, None)
        return out

    def buchberger(self, polys: list[dict]) -> list[_Element]:
        budget = self.budget
        elems: list[_Element] = []
        sugar: list[int] = []
        active: list[int] = []
        pairs: dict = {}
        heap: list = []
        counter = itertools.count()

        def push(i, j, l):
            # sugar strategy: the degree the pair would have in the homogenised ideal
            dl = sum(l)
            sg = max(sugar[i] + dl - sum(elems[i].lm), sugar[j] + dl - sum(elems[j].lm))
            pairs[(i, j)] = (l, sg)
            rank_key = sg if self.sugar else dl
            heapq.heappush(heap, (rank_key, self.key(l), next(counter), (i, j)))

        def update(h: int):
            # Gebauer-Moeller installation of Buchberger's product and chain criteria
            nonlocal active
            lh = elems[h].lm
            cand = [(g, _lcm(lh, elems[g].lm),
                     all(x == 0 or y == 0 for x, y in zip(lh, elems[g].lm))) for g in active]
            kept = []
            for idx, (g, l, coprime) in enumerate(cand):
                if coprime or not (
                        any(_divides(l2, l) for _, l2, _ in cand[idx + 1:])
                        or any(_divides(l2, l) for _, l2, _ in kept)):
                    kept.append((g, l, coprime))
            for (i, j), (l, _) in list(pairs.items()):
                if (_divides(lh, l) and _lcm(elems[i].lm, lh) != l
                        and _lcm(elems[j].lm, lh) != l):
                    del pairs[(i, j)]
            for g, l, coprime in kept:
                if not coprime:
                    push(min(g, h), max(g, h), l)
            active = [g for g in active if not _divides(lh, elems[g].lm)] + [h]

        def add(p: dict, sg: int) -> bool:
            if len(p) == 1 and not any(next(iter(p))):
                return True
            elems.append(self.element(p))
            sugar.append(max(sg, max(sum(m) for m in p)))
            update(len(elems) - 1)
            if budget.max_basis is not None and len(active) > budget.max_basis:
                raise BudgetExceeded(f"basis size {len(active)} exceeds cap {budget.max_basis}")
            return False

        one = [self.element({(0,) * self.nvars: 1})]
        for p in sorted(polys, key=lambda q: self.key(max(q, key=self.key))):
            p = self.reduce(p, [elems[i] for i in active])
            if p and add(p, 0):
                return one

        while heap:
            _, _, _, pair = heapq.heappop(heap)
            entry = pairs.pop(pair, None)
            if entry is None:
                continue
            l, sg = entry
            if budget.max_degree is not None and sum(l) > budget.max_degree:
                raise BudgetExceeded(f"pair degree {sum(l)} exceeds cap {budget.max_degree}")
            self.check_time()
            self.pairs_done += 1
            s = self.spoly(elems[pair[0]], elems[pair[1]])
            h = self.reduce(s, [elems[i] for i in active])
            if not h:
                self.zero_reductions += 1
                continue
            if add(h, sg):
                return one
        return self.interreduce([elems[i] for i in active])

    def interreduce(self, basis: list[_Element]) -> list[_Element]:
        minimal: list[_Element] = []
        for e in sorted(basis, key=lambda e: e.key):
            if not any(_divides(o.lm, e.lm) for o in minimal):
                minimal.append(e)
        out = []
        for i, e in enumerate(minimal):
            others = minimal[:i] + minimal[i + 1:]
            out.append(self.element(self.reduce(e.terms, others)))
        return sorted(out, key=lambda e: e.key, reverse=True)

    def _nf_rational(self, f: dict, basis: Sequence[_Element]) -> dict:
        """Exact normal form with Fraction coefficients and no rescaling."""
        key = self.key
        f = {m: Fraction(c) for m, c in f.items()}
        heap = [(tuple(-x for x in key(m)), m) for m in f]
        heapq.heapify(heap)
        out = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = f.pop(m, None)
            if not c:
                continue
            mmask = _mask(m)
            red = None
            for b in basis:
                if not (b.mask & ~mmask) and _divides(b.lm, m):
                    red = b
                    break
            if red is None:
                out[m] = c
                continue
            q = c / red.lc
            shift = tuple(y - x for x, y in zip(red.lm, m))
            for tm, tc in red.terms.items():
                if tm == red.lm:
                    continue
                nm = tuple(x + y for x, y in zip(tm, shift))
                old = f.get(nm)
                if old is None:
                    f[nm] = -q * tc
                    heapq.heappush(heap, (tuple(-x for x in key(nm)), nm))
                else:
                    v = old - q * tc
                    if v:
                        f[nm] = v
                    else:
                        del f[nm]
        return out


# --------------------------------------------------------------------------
# public operations


def _from_element(ring: PolyRing, e: _Element) -> Poly:
    lc = e.lc
    return Poly(ring, {m: Fraction(c, lc) for m, c in e.terms.items()})


def groebner(ideal: Ideal, order: MonomialOrder = DEGREVLEX,
             budget: Budget = UNLIMITED) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` for ``order``; ``{1}`` for the unit ideal."""
    ring = ideal.ring
    engine = _Engine(ring.nvars, order, budget)
    polys = [_to_int_terms(g) for g in ideal.generators if g]
    if not polys:
        return GroebnerBasis(ring, [], order)
    elems = engine.buchberger(polys)
    gb = GroebnerBasis(ring, [_from_element(ring, e) for e in elems], order)
    for sink in _recorders:
        sink.append(gb)
    return gb


_recorders: list[list[GroebnerBasis]] = []


@contextmanager
def recording_bases():
    """Collect every basis computed inside the block (for self-checks)."""
    sink: list[GroebnerBasis] = []
    _recorders.append(sink)
    try:
        yield sink
    finally:
        _recorders.remove(sink)


def normal_form(f: Poly, basis: Ideal, order: MonomialOrder | None = None) -> Poly:
    """Remainder of multivariate division of ``f`` by ``basis``."""
    if order is None:
        order = basis.order if isinstance(basis, GroebnerBasis) else DEGREVLEX
    ring = basis.ring
    f = f.to_ring(ring) if f.ring != ring else f
    if not f:
        return f
    engine = _Engine(ring.nvars, order, UNLIMITED)
    elems = [engine.element({m: c for m, c in g.terms.items()}) for g in basis.generators]
    # basis elements carry Fraction coefficients here; the rational routine is exact
    out = engine._nf_rational(dict(f.terms), elems)
    return Poly(ring, out)


def s_polynomials_reduce_to_zero(basis: GroebnerBasis, limit: int = 200) -> bool:
    """Buchberger's criterion checked pair by pair (bases up to ``limit`` elements)."""
    gens = basis.generators
    if len(gens) > limit:
        raise ValueError("basis too large for an exhaustive S-pair check")
    order = basis.order
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not normal_form(s_polynomial(gens[i], gens[j], order), basis).is_zero():
                return False
    return True


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder = DEGREVLEX) -> Poly:
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    l = _lcm(mf, mg)
    uf = Poly(f.ring, {tuple(a - b for a, b in zip(l, mf)): 1 / cf})
    ug = Poly(f.ring, {tuple(a - b for a, b in zip(l, mg)): 1 / cg})
    return uf * f - ug * g


def _fresh(ring: PolyRing, stem: str) -> str:
    name, k = stem, 0
    while name in ring.variables:
        k += 1
        name = f"{stem}{k}"
    return name


def eliminate(ideal: Ideal, drop: Iterable[str], budget: Budget = UNLIMITED) -> GroebnerBasis:
    """Generators of ``ideal`` intersected with QQ[remaining variables]."""
    ring = ideal.ring
    drop = set(drop)
    for v in drop:
        ring.index(v)
    keep = [v for v in ring.variables if v not in drop]
    if not drop:
        return groebner(ideal, DEGREVLEX, budget)
    order = MonomialOrder.elimination(ring.index(v) for v in drop)
    gb = groebner(ideal, order, budget)
    if not keep:
        # everything eliminated: the answer is (0) or (1) in QQ
        raise ValueError("cannot eliminate every variable; keep at least one")
    sub = ring.sub(keep)
    kept = [g.to_ring(sub) for g in gb.generators if not (g.variables() & drop)]
    return GroebnerBasis(sub, kept, DEGREVLEX)


def saturate_by(ideal: Ideal, g: Poly, budget: Budget = UNLIMITED) -> GroebnerBasis:
    """``I : g^infinity`` via an auxiliary variable."""
    ring = ideal.ring
    w = _fresh(ring, "_w")
    big = ring.extend([w], front=True)
    gens = [p.to_ring(big) for p in ideal.generators]
    gens.append(big.one() - big.gen(w) * g.to_ring(big))
    return eliminate(Ideal(big, gens), [w], budget)


def intersect(i1: Ideal, i2: Ideal, budget: Budget = UNLIMITED) -> GroebnerBasis:
    ring = i1.ring
    t = _fresh(ring, "_t")
    big = ring.extend([t], front=True)
    tv = big.gen(t)
    gens = [tv * p.to_ring(big) for p in i1.generators]
    gens += [(big.one() - tv) * p.to_ring(big) for p in i2.generators]
    out = eliminate(Ideal(big, gens), [t], budget)
    return GroebnerBasis(ring, [p.to_ring(ring) for p in out.generators], DEGREVLEX)


def saturate(ideal: Ideal, by: Ideal, budget: Budget = UNLIMITED) -> GroebnerBasis:
    """``I : J^infinity`` as the intersection of ``I : g^infinity`` over generators g of J."""
    if by.ring != ideal.ring:
        raise ValueError("ideals live in different rings")
    gens = [g for g in by.generators if g]
    if not gens:
        return groebner(ideal, DEGREVLEX, budget)
    result = saturate_by(ideal, gens[0], budget)
    result = GroebnerBasis(ideal.ring, [p.to_ring(ideal.ring) for p in result.generators], DEGREVLEX)
    for g in gens[1:]:
        part = saturate_by(ideal, g, budget)
        part = Ideal(ideal.ring, [p.to_ring(ideal.ring) for p in part.generators])
        result = intersect(result, part, budget)
    return result


def substitute(f: Poly, bindings: Mapping[str, object], ring: PolyRing | None = None) -> Poly:
    """Replace variables by rationals or polynomials.

    Polynomial values must live in ``ring`` (default: the ring of ``f``);
    rational values are coerced.
    """
    target = ring or f.ring
    images = []
    for v in f.ring.variables:
        if v in bindings:
            val = bindings[v]
            images.append(val.to_ring(target) if isinstance(val, Poly) else target.const(val))
        else:
            images.append(target.gen(v))
    out = target.zero()
    cache: dict = {}
    for m, c in f.terms.items():
        term = target.const(c)
        for i, e in enumerate(m):
            if e:
                p = cache.get((i, e))
                if p is None:
                    p = images[i] ** e
                    cache[(i, e)] = p
                term = term * p
        out = out + term
    return out


# --------------------------------------------------------------------------
# quotient-ring dimension probe


@dataclass(frozen=True)
class DimensionReport:
    zero_dimensional: bool
    count: int | None            # standard monomials = points with multiplicity
    krull_dimension: int
    free_variables: tuple[str, ...]   # witness of a monomial cone when positive-dimensional
    unit: bool = False


def quotient_dimension(basis: GroebnerBasis, count_cap: int = 100000) -> DimensionReport:
    """Dimension data of ``QQ[x]/I`` read off the leading monomials of ``basis``."""
    ring = basis.ring
    if any(g.is_constant() for g in basis.generators):
        return DimensionReport(True, 0, -1, (), unit=True)
    lms = basis.leading_monomials()
    n = ring.nvars
    # Krull dimension: largest variable set no leading monomial lives in
    best: tuple[int, ...] = ()
    for size in range(n, 0, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if all(any(e and i not in s for i, e in enumerate(m)) for m in lms):
                best = subset
                break
        if best:
            break
    dim = len(best)
    if dim > 0:
        return DimensionReport(False, None, dim, tuple(ring.variables[i] for i in best))
    # zero-dimensional: count standard monomials
    count = 0
    stack = [(0,) * n]
    seen = {stack[0]}
    while stack:
        m = stack.pop()
        count += 1
        if count > count_cap:
            raise BudgetExceeded("standard monomial count exceeds cap")
        for i in range(n):
            nm = m[:i] + (m[i] + 1,) + m[i + 1:]
            if nm in seen or any(_divides(l, nm) for l in lms):
                continue
            seen.add(nm)
            stack.append(nm)
    return DimensionReport(True, count, 0, ())
