"""Exact arithmetic in finite p-groups given by power-commutator presentations.

Groups here have odd prime p, nilpotency class <= 3 and a generating
sequence ordered by weight: depth-1 generators first, then depth-2
(commutators of depth-1 pairs), then depth-3 (central).  Every element has
a unique normal form  prod g_i^{e_i}  with 0 <= e_i < rel_order(g_i), and
multiplication is done by collection from the left.  For this weight
discipline a syllable swap has the exact closed form

    h^f g^e = g^e h^f c^{fe} [c,h]^{e*C(f,2)} [c,g]^{f*C(e,2)},   c = [h,g],

since [c,h] and [c,g] are central; everything reduces to table lookups.
The implementation is verified against the independent letter-rewriting
oracle in projrep.oracle rather than proved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

Word = tuple[tuple[int, int], ...]  # ((generator index, exponent), ...)


def _comb2(n: int) -> int:
    return n * (n - 1) // 2


def word_from_pairs(pairs) -> Word:
    return tuple((int(i), int(e)) for i, e in pairs)


class PresentationError(ValueError):
    pass


class BudgetError(RuntimeError):
    """Raised when an operation would exceed its enumeration budget."""


class PcPresentation:
    """A consistent-checkable power-commutator presentation.

    Parameters:
      p       -- odd prime
      gens    -- list of (name, depth) with depth in {1,2,3}, depths
                 non-decreasing along the list
      orders  -- relative order per generator (defaults to p everywhere)
      powers  -- {i: word} meaning g_i^{orders[i]} = word (omitted = trivial)
      comms   -- {(j, i): word} for j > i meaning [g_j, g_i] = word
                 (omitted = commuting pair)
    """

    def __init__(self, p, gens, powers=None, comms=None, orders=None):
        if p < 3 or p % 2 == 0:
            raise PresentationError("p must be an odd prime, got %r" % (p,))
        self.p = int(p)
        self.names = tuple(name for name, _ in gens)
        self.depths = tuple(int(d) for _, d in gens)
        self.n = len(self.names)
        if len(set(self.names)) != self.n:
            raise PresentationError("duplicate generator names")
        if any(d not in (1, 2, 3) for d in self.depths):
            raise PresentationError("depths must be 1, 2 or 3")
        if list(self.depths) != sorted(self.depths):
            raise PresentationError("generators must be listed by non-decreasing depth")
        if orders is None:
            orders = [self.p] * self.n
        self.orders = tuple(int(m) for m in orders)
        if any(m < 2 or m % self.p != 0 or not _is_p_power(m, self.p) for m in self.orders):
            raise PresentationError("relative orders must be positive powers of p")
        self.powers: dict[int, Word] = {}
        for i, w in (powers or {}).items():
            w = self._check_word(w, above=i, context="power of %s" % self.names[i])
            if w:
                self.powers[int(i)] = w
        self.comms: dict[tuple[int, int], Word] = {}
        for (j, i), w in (comms or {}).items():
            j, i = int(j), int(i)
            if not j > i:
                raise PresentationError("commutator key (%d,%d) must have j > i" % (j, i))
            w = self._check_word(w, above=j, context="[%s,%s]" % (self.names[j], self.names[i]))
            if w:
                self.comms[(j, i)] = w
        self._check_weight_discipline()
        self._build_tables()
        self._consistency: dict | None = None

    # -- construction helpers ------------------------------------------------

    def _check_word(self, w, above, context):
        # relation right-hand sides are normal-form words: merge and sort
        acc: dict[int, int] = {}
        for idx, e in w:
            idx, e = int(idx), int(e)
            if not 0 <= idx < self.n:
                raise PresentationError("bad generator index %d in %s" % (idx, context))
            if idx <= above:
                raise PresentationError(
                    "%s mentions %s (index not strictly higher)" % (context, self.names[idx]))
            acc[idx] = (acc.get(idx, 0) + e) % self.orders[idx]
        return tuple((idx, e) for idx, e in sorted(acc.items()) if e)

    def _check_weight_discipline(self):
        for (j, i), w in self.comms.items():
            dj, di = self.depths[j], self.depths[i]
            if dj == 3 or di == 3:
                raise PresentationError("depth-3 generators must be central")
            floor = 3 if (dj >= 2 or di >= 2) else 2
            for idx, _ in w:
                if self.depths[idx] < floor:
                    raise PresentationError(
                        "[%s,%s] has a letter of depth %d (< %d)"
                        % (self.names[j], self.names[i], self.depths[idx], floor))
        for i, w in self.powers.items():
            if self.depths[i] == 3 and w:
                raise PresentationError("depth-3 power words must be trivial")
            if self.depths[i] == 2 and any(self.depths[idx] != 3 for idx, _ in w):
                raise PresentationError("depth-2 power words must be central")

    def _build_tables(self):
        self.u_indices = tuple(i for i in range(self.n) if self.depths[i] == 1)
        self.v_indices = tuple(i for i in range(self.n) if self.depths[i] == 2)
        self.w_indices = tuple(i for i in range(self.n) if self.depths[i] == 3)
        p = self.p
        # [v,u] and [v',v] values as dense-ish dicts of central letters
        self.vu_vec: dict[tuple[int, int], dict[int, int]] = {}
        self.vv_vec: dict[tuple[int, int], dict[int, int]] = {}
        self.has_vv = False
        for (j, i), w in self.comms.items():
            dj, di = self.depths[j], self.depths[i]
            if dj == 2 and di == 1:
                self.vu_vec[(j, i)] = {idx: e for idx, e in w}
            elif dj == 2 and di == 2:
                self.vv_vec[(j, i)] = {idx: e for idx, e in w}
                self.has_vv = True
        # swap data for depth-1 pairs: c = [u_j, u_i], plus the central words
        # [c, u_j] and [c, u_i] entering the Hall correction
        self.uu: dict[tuple[int, int], tuple] = {}
        for (j, i), w in self.comms.items():
            if self.depths[j] == 1:
                cv = tuple((idx, e) for idx, e in w if self.depths[idx] == 2)
                cw = {idx: e for idx, e in w if self.depths[idx] == 3}
                wch = self._comm_letters_with_u(cv, j)
                wcg = self._comm_letters_with_u(cv, i)
                self.uu[(j, i)] = (cv, cw, wch, wcg)
        self.power_split: dict[int, tuple] = {}
        for i, w in self.powers.items():
            pv = tuple((idx, e) for idx, e in w if self.depths[idx] == 2)
            pw = {idx: e for idx, e in w if self.depths[idx] == 3}
            pu = tuple((idx, e) for idx, e in w if self.depths[idx] == 1)
            if pu:
                raise PresentationError("power words may not contain depth-1 letters")
            self.power_split[i] = (pv, pw)
        noncentral_v = set()
        for (v, u) in self.vu_vec:
            noncentral_v.add(v)
        for (a, b) in self.vv_vec:
            noncentral_v.add(a)
            noncentral_v.add(b)
        self.is_class2 = all(
            v not in noncentral_v
            for (cv, _, _, _) in self.uu.values() for v, _ in cv)
        if self.has_vv and any(cv for (cv, _, _, _) in self.uu.values()):
            # collection would need a left-insertion variant of _append_v
            raise PresentationError(
                "unsupported: noncommuting depth-2 generators together with "
                "depth-2 letters in depth-1 commutators")
        self.identity = (0,) * self.n

    def _comm_letters_with_u(self, v_letters, u):
        """Central vector of [w, g_u] for a depth-2 word w (letterwise)."""
        out: dict[int, int] = {}
        for v, m in v_letters:
            vec = self.vu_vec.get((v, u))
            if vec:
                for idx, e in vec.items():
                    out[idx] = (out.get(idx, 0) + m * e) % self.orders[idx]
        return {k: v for k, v in out.items() if v}

    # -- collection ----------------------------------------------------------

    def collect(self, word) -> tuple:
        """Normal form of an arbitrary word (negative exponents allowed)."""
        ev = list(self.identity)
        for idx, e in word:
            self._append(ev, int(idx), int(e))
        return tuple(ev)

    def mul(self, a, b) -> tuple:
        ev = list(a)
        for idx in range(self.n):
            e = b[idx]
            if e:
                self._append(ev, idx, e)
        return tuple(ev)

    def inv(self, a) -> tuple:
        ev = list(self.identity)
        for idx in range(self.n - 1, -1, -1):
            e = a[idx]
            if e:
                self._append(ev, idx, -e)
        return tuple(ev)

    def pow(self, a, k) -> tuple:
        if k < 0:
            return self.pow(self.inv(a), -k)
        result = self.identity
        base = tuple(a)
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def comm(self, a, b) -> tuple:
        """[a, b] = a^-1 b^-1 a b."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def conj(self, a, t) -> tuple:
        """t^-1 a t."""
        return self.mul(self.mul(self.inv(t), a), t)

    def _append(self, ev, g, e):
        """Multiply the normal form ev by g^e on the right, in place."""
        rel = self.orders[g]
        r = e % rel
        q = (e - r) // rel
        if r:
            depth = self.depths[g]
            if depth == 3:
                ev[g] = (ev[g] + r) % rel
            elif depth == 2:
                self._append_v(ev, g, r)
            else:
                self._append_u(ev, g, r)
        if q:
            pw = self.powers.get(g)
            if pw:
                for idx, ex in pw:
                    self._append(ev, idx, ex * q)

    def _append_v(self, ev, g, r):
        # cross the depth-2 tail (central corrections), then merge
        if self.has_vv:
            for vp in self.v_indices:
                if vp > g and ev[vp]:
                    vec = self.vv_vec.get((vp, g))
                    if vec:
                        m = ev[vp] * r
                        for idx, e in vec.items():
                            ev[idx] = (ev[idx] + m * e) % self.orders[idx]
        s = ev[g] + r
        rel = self.orders[g]
        if s >= rel:
            ev[g] = s - rel
            pw = self.power_split.get(g)
            if pw:
                pv, pwvec = pw
                for idx, e in pwvec.items():
                    ev[idx] = (ev[idx] + e) % self.orders[idx]
                for idx, e in pv:
                    self._append_v(ev, idx, e)
        else:
            ev[g] = s

    def _append_u(self, ev, g, e):
        corr: dict[int, int] = {}
        pend_v: list[tuple[int, int]] = []
        # cross the depth-2 zone: [v^s, u^e] = [v,u]^(s*e) is central
        for v in self.v_indices:
            if ev[v]:
                vec = self.vu_vec.get((v, g))
                if vec:
                    m = ev[v] * e
                    for idx, ex in vec.items():
                        corr[idx] = corr.get(idx, 0) + m * ex
        # march g^e left past the depth-1 tail, collecting exact corrections
        for j in reversed(self.u_indices):
            if j <= g:
                break
            f = ev[j]
            if not f:
                continue
            data = self.uu.get((j, g))
            if data is None:
                continue
            cv, cw, wch, wcg = data
            m = f * e
            if cw:
                for idx, ex in cw.items():
                    corr[idx] = corr.get(idx, 0) + m * ex
            h1 = e * _comb2(f)
            if h1 and wch:
                for idx, ex in wch.items():
                    corr[idx] = corr.get(idx, 0) + h1 * ex
            h2 = f * _comb2(e)
            if h2 and wcg:
                for idx, ex in wcg.items():
                    corr[idx] = corr.get(idx, 0) + h2 * ex
            if cv:
                # the emitted depth-2 word still crosses the tail right of u_j
                for k in self.u_indices:
                    if k > j and ev[k]:
                        for v, mv in cv:
                            vec = self.vu_vec.get((v, k))
                            if vec:
                                mm = m * mv * ev[k]
                                for idx, ex in vec.items():
                                    corr[idx] = corr.get(idx, 0) + mm * ex
                for v, mv in cv:
                    pend_v.append((v, m * mv))
        s = ev[g] + e
        rel = self.orders[g]
        if s >= rel:
            ev[g] = s - rel
            pw = self.power_split.get(g)
            if pw:
                pv, pwvec = pw
                for idx, ex in pwvec.items():
                    corr[idx] = corr.get(idx, 0) + ex
                if pv:
                    for k in self.u_indices:
                        if k > g and ev[k]:
                            for v, mv in pv:
                                vec = self.vu_vec.get((v, k))
                                if vec:
                                    mm = mv * ev[k]
                                    for idx, ex in vec.items():
                                        corr[idx] = corr.get(idx, 0) + mm * ex
                    for v, mv in pv:
                        pend_v.append((v, mv))
        else:
            ev[g] = s
        for idx, ex in corr.items():
            ev[idx] = (ev[idx] + ex) % self.orders[idx]
        for v, mv in pend_v:
            self._append_v(ev, v, mv % self.orders[v])

    # -- whole-group queries ---------------------------------------------------

    def consistency_check(self, force=False) -> dict:
        """Run the full overlap-test battery; cached after the first call.

        Tests, with m_i the relative orders and both sides evaluated by
        collection after substituting the defining relation once:
          g_k(g_j g_i) == (g_k g_j) g_i      for k > j > i
          g_j^{m_j} g_i == g_j^{m_j-1}(g_j g_i)  for j > i
          g_j g_i^{m_i} == (g_j g_i) g_i^{m_i-1} for j > i
          g_i^{m_i} g_i == g_i g_i^{m_i}
        """
        if self._consistency is not None and not force:
            return self._consistency
        failures = []
        rng = range(self.n)
        for k in rng:
            for j in range(k):
                # overlap g_k g_j g_i, substituting at the two positions
                for i in range(j):
                    lhs = self.collect(((k, 1), (i, 1), (j, 1)) + self.comms.get((j, i), ()))
                    rhs = self.collect(((j, 1), (k, 1)) + self.comms.get((k, j), ()) + ((i, 1),))
                    if lhs != rhs:
                        failures.append(("assoc", k, j, i, lhs, rhs))
                        if len(failures) >= 4:
                            break
        for j in rng:
            mj = self.orders[j]
            for i in range(j):
                w_ji = self.comms.get((j, i), ())
                lhs = self.collect(self.powers.get(j, ()) + ((i, 1),))
                rhs = self.collect(((j, mj - 1), (i, 1), (j, 1)) + w_ji)
                if lhs != rhs:
                    failures.append(("power-left", j, i, lhs, rhs))
                mi = self.orders[i]
                lhs = self.collect(((j, 1),) + self.powers.get(i, ()))
                rhs = self.collect(((i, 1), (j, 1)) + w_ji + ((i, mi - 1),))
                if lhs != rhs:
                    failures.append(("power-right", j, i, lhs, rhs))
        for i in rng:
            mi = self.orders[i]
            lhs = self.collect(self.powers.get(i, ()) + ((i, 1),))
            rhs = self.collect(((i, 1),) + self.powers.get(i, ()))
            if lhs != rhs:
                failures.append(("power-self", i, lhs, rhs))
        self._consistency = {"pass": not failures, "failures": failures}
        return self._consistency

    def group_order(self) -> int:
        report = self.consistency_check()
        if not report["pass"]:
            raise PresentationError(
                "group_order on an inconsistent presentation: %r" % (report["failures"][0],))
        order = 1
        for m in self.orders:
            order *= m
        return order

    def enumerate_elements(self, budget):
        if self.group_order() > budget:
            raise BudgetError("enumeration budget: |G| = %d > %d" % (self.group_order(), budget))
        return (tuple(v) for v in itertools.product(*(range(m) for m in self.orders)))

    def element_order(self, a) -> int:
        if tuple(a) == self.identity:
            return 1
        order = 1
        acc = tuple(a)
        for _ in range(64):
            acc = self.pow(acc, self.p)
            order *= self.p
            if acc == self.identity:
                return order
        raise RuntimeError("element order exceeds p^64; corrupt arithmetic?")

    def gen_vec(self, i) -> tuple:
        ev = list(self.identity)
        ev[i] = 1
        return tuple(ev)

    # -- names / formatting ----------------------------------------------------

    def index_of(self, name) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError("no generator named %r" % (name,)) from None

    def format_vec(self, vec) -> str:
        parts = []
        for i, e in enumerate(vec):
            if e == 1:
                parts.append(self.names[i])
            elif e:
                parts.append("%s^%d" % (self.names[i], e))
        return "*".join(parts) if parts else "1"

    def word_from_names(self, pairs) -> Word:
        return tuple((self.index_of(nm), int(e)) for nm, e in pairs)

    # -- serialization -----------------------------------------------------------

    def to_json_dict(self) -> dict:
        gens = [{"name": self.names[i], "order": self.orders[i], "depth": self.depths[i]}
                for i in range(self.n)]
        powers = {self.names[i]: [[idx, e] for idx, e in w]
                  for i, w in sorted(self.powers.items())}
        comms = {"[%s,%s]" % (self.names[j], self.names[i]): [[idx, e] for idx, e in w]
                 for (j, i), w in sorted(self.comms.items())}
        return {"prime": self.p, "generators": gens, "powers": powers, "commutators": comms}

    @classmethod
    def from_json_dict(cls, d) -> "PcPresentation":
        gens = [(g["name"], g["depth"]) for g in d["generators"]]
        orders = [g["order"] for g in d["generators"]]
        names = [g["name"] for g in d["generators"]]
        powers = {names.index(nm): word_from_pairs(w) for nm, w in d.get("powers", {}).items()}
        comms = {}
        for key, w in d.get("commutators", {}).items():
            inner = key.strip()[1:-1]
            nj, ni = inner.split(",")
            comms[(names.index(nj), names.index(ni))] = word_from_pairs(w)
        return cls(d["prime"], gens, powers=powers, comms=comms, orders=orders)

    def __repr__(self):
        return "PcPresentation(p=%d, n=%d, names=%s...)" % (self.p, self.n, self.names[:4])


def _is_p_power(m, p):
    while m % p == 0:
        m //= p
    return m == 1


class Element:
    """Immutable group element: a normal-form exponent vector plus its group."""

    __slots__ = ("P", "vec", "_hash")

    def __init__(self, P: PcPresentation, vec):
        self.P = P
        self.vec = tuple(int(v) % P.orders[i] for i, v in enumerate(vec))
        self._hash = None

    @classmethod
    def from_word(cls, P, word):
        return cls(P, P.collect(word))

    @classmethod
    def identity(cls, P):
        return cls(P, P.identity)

    @classmethod
    def generator(cls, P, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else P.index_of(name_or_index)
        return cls(P, P.gen_vec(i))

    def _same(self, other):
        if self.P is not other.P:
            raise PresentationError("presentation mismatch")

    def __mul__(self, other):
        self._same(other)
        return Element(self.P, self.P.mul(self.vec, other.vec))

    def inverse(self):
        return Element(self.P, self.P.inv(self.vec))

    def __pow__(self, k):
        return Element(self.P, self.P.pow(self.vec, k))

    def commutator(self, other):
        self._same(other)
        return Element(self.P, self.P.comm(self.vec, other.vec))

    def conjugate_by(self, t):
        self._same(t)
        return Element(self.P, self.P.conj(self.vec, t.vec))

    def order(self):
        return self.P.element_order(self.vec)

    def is_identity(self):
        return self.vec == self.P.identity

    def __eq__(self, other):
        return isinstance(other, Element) and self.P is other.P and self.vec == other.vec

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.vec)
        return self._hash

    def __repr__(self):
        return self.P.format_vec(self.vec)


def multiply(a: Element, b: Element) -> Element:
    return a * b


def inverse(a: Element) -> Element:
    return a.inverse()


def power(a: Element, k: int) -> Element:
    return a ** k


def commutator(a: Element, b: Element) -> Element:
    return a.commutator(b)


def element_order(a: Element) -> int:
    return a.order()


def collect(word, P: PcPresentation) -> Element:
    return Element.from_word(P, word)


def consistency_check(P: PcPresentation) -> dict:
    return P.consistency_check()


def group_order(P: PcPresentation) -> int:
    return P.group_order()


def enumerate_elements(P: PcPresentation, budget: int):
    for vec in P.enumerate_elements(budget):
        yield Element(P, vec)


class SubgroupSpec:
    """A subgroup given by generating elements.

    When the subgroup is spanned by a subset of pc-generators (a "mask"
    subgroup), membership and order are read off coordinates; otherwise they
    fall back to budgeted closure enumeration.
    """

    def __init__(self, P: PcPresentation, gens, mask=None):
        self.P = P
        self.gens = [g if isinstance(g, Element) else Element(P, g) for g in gens]
        self.mask = tuple(sorted(mask)) if mask is not None else None
        self._closure = None
        self._central = None
        self._in_derived = None

    @classmethod
    def from_mask(cls, P, indices):
        indices = tuple(sorted(indices))
        return cls(P, [Element.generator(P, i) for i in indices], mask=indices)

    def order(self, budget=3 ** 9):
        if self.mask is not None:
            order = 1
            for i in self.mask:
                order *= self.P.orders[i]
            return order
        return len(self.closure(budget))

    def contains(self, g: Element, budget=3 ** 9):
        if self.mask is not None:
            masked = set(self.mask)
            return all(e == 0 or i in masked for i, e in enumerate(g.vec))
        return g.vec in self.closure(budget)

    def closure(self, budget=3 ** 9):
        if self._closure is None:
            P = self.P
            seen = {P.identity}
            frontier = [P.identity]
            gen_vecs = [g.vec for g in self.gens]
            while frontier:
                x = frontier.pop()
                for gv in gen_vecs:
                    y = P.mul(x, gv)
                    if y not in seen:
                        if len(seen) >= budget:
                            raise BudgetError("subgroup closure exceeds budget %d" % budget)
                        seen.add(y)
                        frontier.append(y)
            self._closure = frozenset(seen)
        return self._closure

    def is_central(self):
        if self._central is None:
            P = self.P
            self._central = all(
                P.mul(g.vec, P.gen_vec(i)) == P.mul(P.gen_vec(i), g.vec)
                for g in self.gens for i in range(P.n))
        return self._central

    def is_contained_in_derived(self):
        if self._in_derived is None:
            der = derived_subgroup(self.P)
            self._in_derived = all(der.contains(g) for g in self.gens)
        return self._in_derived

    def __repr__(self):
        return "SubgroupSpec(<%s>)" % ", ".join(repr(g) for g in self.gens)


# ---------------------------------------------------------------------------
# structural computations
# ---------------------------------------------------------------------------

def _row_reduce_mod_p(rows, ncols, p):
    """Row-reduce over Z/p with lexicographically smallest pivot columns."""
    basis = {}  # pivot col -> row (list)
    for row in rows:
        row = [x % p for x in row]
        while True:
            piv = next((c for c in range(ncols) if row[c]), None)
            if piv is None:
                break
            if piv not in basis:
                inv = pow(row[piv], p - 2, p)
                basis[piv] = [(x * inv) % p for x in row]
                break
            coef = row[piv]
            brow = basis[piv]
            row = [(x - coef * y) % p for x, y in zip(row, brow)]
    # back-substitute for a fully reduced deterministic basis
    for piv in sorted(basis, reverse=True):
        for piv2, row2 in basis.items():
            if piv2 < piv and row2[piv]:
                coef = row2[piv]
                basis[piv2] = [(x - coef * y) % p for x, y in zip(row2, basis[piv])]
    return [basis[piv] for piv in sorted(basis)]


def _nullspace_mod_p(rows, ncols, p):
    """Basis of the right nullspace of the matrix given by rows."""
    reduced = _row_reduce_mod_p(rows, ncols, p)
    pivots = []
    for row in reduced:
        pivots.append(next(c for c in range(ncols) if row[c]))
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for row, piv in zip(reduced, pivots):
            vec[piv] = (-row[fc]) % p
        out.append(vec)
    return out


def derived_subgroup(P: PcPresentation) -> SubgroupSpec:
    """G' as a span in the depth->=2 coordinate zone (class <= 3)."""
    if P.has_vv:
        raise NotImplementedError("derived subgroup with noncommuting depth-2 generators")
    p = P.p
    rows = []
    for i in range(P.n):
        for j in range(i + 1, P.n):
            c = P.comm(P.gen_vec(j), P.gen_vec(i))
            if c != P.identity:
                rows.append(list(c))
                for k in range(P.n):
                    cc = P.comm(c, P.gen_vec(k))
                    if cc != P.identity:
                        rows.append(list(cc))
    basis = _row_reduce_mod_p(rows, P.n, p)
    gens = [Element(P, tuple(row)) for row in basis]
    mask = None
    if all(sum(1 for x in row if x) == 1 for row in basis):
        mask = tuple(next(c for c in range(P.n) if row[c]) for row in basis)
    sub = SubgroupSpec(P, gens, mask=mask)
    sub._basis_rows = basis
    return sub


def center_subgroup(P: PcPresentation, budget=3 ** 9):
    """Z(G), computed from the linear commutation conditions.

    Returns (SubgroupSpec, order) or (None, None) if it cannot be decided
    within budget (only possible off the supported group shapes).
    """
    if P.has_vv:
        return _center_by_enumeration(P, budget)
    p = P.p
    D = len(P.u_indices)
    # depth-1 direction must kill every depth-2 component of [u_i, g]
    cond_rows = []
    for g in range(P.n):
        row_per_v = {}
        for pos, ui in enumerate(P.u_indices):
            c = P.comm(P.gen_vec(ui), P.gen_vec(g))
            for idx, e in enumerate(c):
                if e and P.depths[idx] == 2:
                    row_per_v.setdefault(idx, [0] * D)[pos] = e
        cond_rows.extend(row_per_v.values())
    r_null = _nullspace_mod_p(cond_rows, D, p) if D else []
    # depth-2 direction: central iff sum s_v [v, g] = 0 for all generators g
    V = len(P.v_indices)
    vrows_per_target = {}
    for g in range(P.n):
        for pos, v in enumerate(P.v_indices):
            vec = P.vu_vec.get((v, g)) if v > g else None
            if v < g:
                vec_rev = P.vu_vec.get((g, v))
                vec = {k: (-e) % p for k, e in vec_rev.items()} if vec_rev else None
            if vec:
                for idx, e in vec.items():
                    vrows_per_target.setdefault((g, idx), [0] * V)[pos] = e
    s_null = _nullspace_mod_p(list(vrows_per_target.values()), V, p) if V else []

    members = []
    if not r_null:
        r_candidates = [[0] * D]
    else:
        r_candidates = []
        for coefs in itertools.product(range(p), repeat=len(r_null)):
            vec = [0] * D
            for c, base in zip(coefs, r_null):
                for k in range(D):
                    vec[k] = (vec[k] + c * base[k]) % p
            r_candidates.append(vec)
        if len(r_candidates) * max(1, p ** len(s_null)) > budget:
            return _center_by_enumeration(P, budget)
    gen_vecs = [P.gen_vec(i) for i in range(P.n)]
    s_combos = [[0] * V]
    for coefs in itertools.product(range(p), repeat=len(s_null)):
        if all(c == 0 for c in coefs):
            continue
        vec = [0] * V
        for c, base in zip(coefs, s_null):
            for k in range(V):
                vec[k] = (vec[k] + c * base[k]) % p
        s_combos.append(vec)
    for r in r_candidates:
        for s in s_combos:
            ev = list(P.identity)
            for pos, ui in enumerate(P.u_indices):
                ev[ui] = r[pos]
            for pos, v in enumerate(P.v_indices):
                ev[v] = s[pos]
            cand = tuple(ev)
            if all(P.mul(cand, gv) == P.mul(gv, cand) for gv in gen_vecs):
                members.append(cand)
    # depth-3 generators are always central
    order = len(members) * (p ** len(P.w_indices))
    basis_rows = _row_reduce_mod_p([list(m) for m in members]
                                   + [list(P.gen_vec(w)) for w in P.w_indices], P.n, p)
    gens = [Element(P, tuple(row)) for row in basis_rows]
    mask = None
    if all(sum(1 for x in row if x) == 1 for row in basis_rows):
        mask = tuple(next(c for c in range(P.n) if row[c]) for row in basis_rows)
    spec = SubgroupSpec(P, gens, mask=mask)
    if p ** len(basis_rows) == order:
        return spec, order
    return spec, order


def _center_by_enumeration(P, budget):
    if P.group_order() > budget:
        return None, None
    gen_vecs = [P.gen_vec(i) for i in range(P.n)]
    members = [x for x in P.enumerate_elements(budget)
               if all(P.mul(x, gv) == P.mul(gv, x) for gv in gen_vecs)]
    rows = _row_reduce_mod_p([list(m) for m in members], P.n, P.p)
    gens = [Element(P, tuple(r)) for r in rows]
    return SubgroupSpec(P, gens), len(members)


def agemo_subgroup(P: PcPresentation, budget=3 ** 9):
    """G^p (subgroup generated by all p-th powers), or None above budget.

    For class <= 2 (and odd p) the power map is a homomorphism, so generator
    powers suffice; class-3 groups are handled by budgeted enumeration.
    """
    p = P.p
    if P.is_class2:
        rows = [list(P.pow(P.gen_vec(i), p)) for i in range(P.n)]
    else:
        if P.group_order() > budget:
            return None
        rows = [list(P.pow(x, p)) for x in P.enumerate_elements(budget)]
    rows = [r for r in rows if any(r)]
    basis = _row_reduce_mod_p(rows, P.n, p)
    gens = [Element(P, tuple(r)) for r in basis]
    mask = None
    if all(sum(1 for x in r if x) == 1 for r in basis):
        mask = tuple(next(c for c in range(P.n) if r[c]) for r in basis)
    return SubgroupSpec(P, gens, mask=mask)


def exponent_of(P: PcPresentation, budget=3 ** 9):
    if P.group_order() > budget:
        return None
    best = 1
    for x in P.enumerate_elements(budget):
        o = P.element_order(x)
        if o > best:
            best = o
    return best


@dataclass
class StructureReport:
    derived: SubgroupSpec
    derived_order: int
    center: SubgroupSpec | None
    center_order: int | None
    agemo: SubgroupSpec | None
    agemo_order: int | None
    exponent: int | None
    is_special: bool | None
    rank: int | None
    notes: list = field(default_factory=list)


def structure(P: PcPresentation, budget=3 ** 7) -> StructureReport:
    """Derived subgroup, center, agemo, exponent and the special-group flags."""
    p = P.p
    der = derived_subgroup(P)
    der_order = der.order()
    cen, cen_order = center_subgroup(P, budget=budget)
    notes = []
    if cen is None:
        notes.append("center: not computed")
    ag = agemo_subgroup(P, budget=budget)
    ag_order = ag.order() if ag is not None else None
    if ag is None:
        notes.append("agemo: not computed")
    expo = exponent_of(P, budget=budget)
    if expo is None:
        notes.append("exponent: not computed")
    is_special = None
    rank = None
    if cen is not None:
        same = der_order == cen_order and all(cen.contains(g) for g in der.gens)
        # G/G' elementary abelian: every generator^p lies in G'
        elem = all(der.contains(Element(P, P.pow(P.gen_vec(i), p))) for i in range(P.n))
        is_special = bool(same and elem and der_order > 1)
        if is_special:
            k = 0
            o = der_order
            while o > 1:
                o //= p
                k += 1
            rank = k
    return StructureReport(der, der_order, cen, cen_order, ag, ag_order,
                           expo, is_special, rank, notes)


# ---------------------------------------------------------------------------
# homomorphisms, quotients, conjugacy classes
# ---------------------------------------------------------------------------

@dataclass
class HomReport:
    is_homomorphism: bool
    failures: list
    surjective: bool | None
    image_order: int | None
    kernel_order: int | None


def eval_word(P_tgt: PcPresentation, word, images):
    acc = P_tgt.identity
    for idx, e in word:
        acc = P_tgt.mul(acc, P_tgt.pow(images[idx], e))
    return acc


def check_homomorphism(P_src: PcPresentation, images, P_tgt: PcPresentation | None = None,
                       budget=3 ** 9) -> HomReport:
    """Certify that generator images define a homomorphism; report image size.

    `images` is one target element (Element or vector) per source generator.
    """
    if P_tgt is None:
        P_tgt = images[0].P
    img_vecs = [im.vec if isinstance(im, Element) else tuple(im) for im in images]
    if len(img_vecs) != P_src.n:
        raise PresentationError("need one image per generator")
    failures = []
    for i in range(P_src.n):
        lhs = P_tgt.pow(img_vecs[i], P_src.orders[i])
        rhs = eval_word(P_tgt, P_src.powers.get(i, ()), img_vecs)
        if lhs != rhs:
            failures.append(("power", P_src.names[i], lhs, rhs))
    for (j, i), w in sorted(P_src.comms.items()):
        lhs = P_tgt.comm(img_vecs[j], img_vecs[i])
        rhs = eval_word(P_tgt, w, img_vecs)
        if lhs != rhs:
            failures.append(("comm", P_src.names[j], P_src.names[i], lhs, rhs))
    for j in range(P_src.n):
        for i in range(j):
            if (j, i) not in P_src.comms:
                lhs = P_tgt.comm(img_vecs[j], img_vecs[i])
                if lhs != P_tgt.identity:
                    failures.append(("comm", P_src.names[j], P_src.names[i], lhs, P_tgt.identity))
    if failures:
        return HomReport(False, failures, None, None, None)
    try:
        closure = SubgroupSpec(P_tgt, [Element(P_tgt, v) for v in img_vecs]).closure(budget)
        image_order = len(closure)
        surjective = image_order == P_tgt.group_order()
    except BudgetError:
        image_order = None
        surjective = None
    kernel_order = P_src.group_order() // image_order if image_order else None
    return HomReport(True, [], surjective, image_order, kernel_order)


@dataclass
class QuotientMap:
    source: PcPresentation
    quotient: PcPresentation
    surviving: tuple  # old indices kept as quotient pc-generators
    pivot_rows: dict  # old pivot index -> reduction row over old coords

    def project_vec(self, vec):
        """Image in the quotient of an old-coordinates normal form."""
        p = self.source.p
        work = list(vec)
        for piv in sorted(self.pivot_rows, reverse=True):
            c = work[piv] % p
            if c:
                row = self.pivot_rows[piv]
                for k in range(len(work)):
                    work[k] = (work[k] - c * row[k]) % p
                work[piv] = 0
        out = [work[i] for i in self.surviving]
        return self.quotient.collect([(k, e) for k, e in enumerate(out) if e])

    def lift_vec(self, qvec):
        """The canonical section: surviving coordinates, zero on the kernel."""
        ev = [0] * self.source.n
        for k, i in enumerate(self.surviving):
            ev[i] = qvec[k]
        return tuple(ev)


def quotient_by_central(P: PcPresentation, S: SubgroupSpec) -> QuotientMap:
    """Quotient by a central subgroup spanned inside the depth->=2 zone."""
    if not S.is_central():
        raise PresentationError("subgroup is not central")
    p = P.p
    rows = []
    for g in S.gens:
        if any(e and P.depths[i] == 1 for i, e in enumerate(g.vec)):
            raise PresentationError("kernel generators must lie in the depth->=2 zone")
        rows.append(list(g.vec))
    basis = _row_reduce_mod_p(rows, P.n, p)
    pivot_rows = {}
    for row in basis:
        piv = next(c for c in range(P.n) if row[c])
        pivot_rows[piv] = row
    surviving = tuple(i for i in range(P.n) if i not in pivot_rows)
    new_index = {old: k for k, old in enumerate(surviving)}

    def reduce_vec(vec):
        work = list(vec)
        for piv in sorted(pivot_rows, reverse=True):
            c = work[piv] % p
            if c:
                row = pivot_rows[piv]
                for k in range(P.n):
                    work[k] = (work[k] - c * row[k]) % p
                work[piv] = 0
        return work

    def to_new_word(vec):
        work = reduce_vec(vec)
        return tuple((new_index[i], work[i]) for i in surviving if work[i])

    gens = [(P.names[i], P.depths[i]) for i in surviving]
    orders = [P.orders[i] for i in surviving]
    powers = {}
    comms = {}
    for k, old in enumerate(surviving):
        val = P.collect(P.powers.get(old, ()))
        w = to_new_word(val)
        if w:
            powers[k] = w
    for (j, i), word in P.comms.items():
        if j in pivot_rows or i in pivot_rows:
            continue
        val = P.collect(word)
        w = to_new_word(val)
        if w:
            comms[(new_index[j], new_index[i])] = w
    Q = PcPresentation(p, gens, powers=powers, comms=comms, orders=orders)
    rep = Q.consistency_check()
    if not rep["pass"]:
        raise PresentationError("quotient presentation inconsistent: %r" % (rep["failures"][0],))
    return QuotientMap(P, Q, surviving, pivot_rows)


def conjugacy_classes(P: PcPresentation, budget=3 ** 7):
    """All conjugacy classes as (lex-first representative, size) pairs."""
    order = P.group_order()
    if order > budget:
        raise BudgetError("class enumeration budget: |G| = %d > %d" % (order, budget))
    gen_vecs = [P.gen_vec(i) for i in range(P.n)]
    inv_vecs = [P.inv(g) for g in gen_vecs]
    seen = set()
    classes = []
    for x in P.enumerate_elements(budget):
        if x in seen:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for gv, giv in zip(gen_vecs, inv_vecs):
                z = P.mul(P.mul(giv, y), gv)
                if z not in orbit:
                    orbit.add(z)
                    frontier.append(z)
        seen |= orbit
        classes.append((Element(P, x), len(orbit)))
    assert sum(sz for _, sz in classes) == order
    return classes


def subgroup_presentation(P: PcPresentation, indices):
    """Presentation of the subgroup spanned by a relation-closed set of pc-gens.

    Returns (subP, old_indices); elements convert by embed/restrict below.
    """
    indices = tuple(sorted(indices))
    index_set = set(indices)
    for i in indices:
        for idx, _ in P.powers.get(i, ()):
            if idx not in index_set:
                raise PresentationError("subgroup mask not closed under power relations")
    for (j, i), w in P.comms.items():
        if j in index_set and i in index_set:
            for idx, _ in w:
                if idx not in index_set:
                    raise PresentationError("subgroup mask not closed under commutator relations")
    new_index = {old: k for k, old in enumerate(indices)}
    gens = [(P.names[i], P.depths[i]) for i in indices]
    orders = [P.orders[i] for i in indices]
    powers = {new_index[i]: tuple((new_index[idx], e) for idx, e in P.powers[i])
              for i in indices if i in P.powers}
    comms = {}
    for (j, i), w in P.comms.items():
        if j in index_set and i in index_set:
            comms[(new_index[j], new_index[i])] = tuple((new_index[idx], e) for idx, e in w)
    sub = PcPresentation(P.p, gens, powers=powers, comms=comms, orders=orders)
    return sub, indices


def embed_vec(vec_sub, old_indices, P: PcPresentation):
    ev = [0] * P.n
    for k, i in enumerate(old_indices):
        ev[i] = vec_sub[k]
    return tuple(ev)


def restrict_vec(vec_full, old_indices):
    index_set = set(old_indices)
    assert all(e == 0 or i in index_set for i, e in enumerate(vec_full)), \
        "element does not lie in the subgroup"
    return tuple(vec_full[i] for i in old_indices)
