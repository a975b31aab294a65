"""Exact irreducible representations via the index-p inertia ladder.

Everything is monomial end to end: matrices are generalized permutations
whose entries are p^e-th roots of unity stored as exponents, and traces
live in Z[zeta] reduced modulo the cyclotomic polynomial, so every verdict
(equivalence, inertia, relation checks) is an exact integer computation.

The ladder walks a normal chain N_0 < N_1 < ... < G with abelian N_0 and
index-p steps.  At each step an irreducible theta of N either extends (its
x-conjugate is equivalent; the intertwiner is found exactly by chasing the
position graph of the monomial constraint T theta(g) = theta^x(g) T, then
scaled so that T^p = theta(x^p)) or induces (free orbit of size p).  Reps
are kept in ambient coordinates: a representation of a mask subgroup
stores one matrix per ambient pc-generator in the mask.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .pcgroup import BudgetError, PcPresentation, PresentationError, SubgroupSpec
from . import cohomology as coh
from .oracle import HowellBasis

MAX_ROOT_EXPONENT = 4  # moduli capped at p^4; the ladder never needs more


# ---------------------------------------------------------------------------
# exact cyclotomic arithmetic
# ---------------------------------------------------------------------------

def _phi(modulus, p):
    return modulus - modulus // p


class CycInt:
    """Element of Z[zeta_M], M = p^e, reduced mod the cyclotomic polynomial.

    Coefficients form a tuple of length phi(M) = M - M/p; reduction uses
    zeta^j = -(zeta^(j - M/p) + ... + zeta^(j - (p-1)M/p)) for j >= phi(M).
    """

    __slots__ = ("p", "modulus", "coeffs")

    def __init__(self, p, modulus, coeffs):
        self.p = p
        self.modulus = modulus
        self.coeffs = tuple(coeffs)
        assert len(self.coeffs) == _phi(modulus, p)

    @classmethod
    def zero(cls, p, modulus):
        return cls(p, modulus, (0,) * _phi(modulus, p))

    @classmethod
    def from_full(cls, p, modulus, full):
        full = list(full)
        step = modulus // p
        phi = _phi(modulus, p)
        for j in range(modulus - 1, phi - 1, -1):
            c = full[j]
            if c:
                full[j] = 0
                for k in range(1, p):
                    full[j - k * step] -= c
        return cls(p, modulus, full[:phi])

    @classmethod
    def root(cls, p, modulus, k):
        full = [0] * modulus
        full[k % modulus] = 1
        return cls.from_full(p, modulus, full)

    def __add__(self, other):
        a, b = _common(self, other)
        return CycInt(a.p, a.modulus, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    def __sub__(self, other):
        a, b = _common(self, other)
        return CycInt(a.p, a.modulus, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.p, self.modulus, tuple(x * other for x in self.coeffs))
        a, b = _common(self, other)
        M = a.modulus
        full = [0] * M
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        full[(i + j) % M] += x * y
        return CycInt.from_full(a.p, M, full)

    __rmul__ = __mul__

    def conj(self):
        M = self.modulus
        full = [0] * M
        for i, x in enumerate(self.coeffs):
            if x:
                full[(-i) % M] += x
        return CycInt.from_full(self.p, M, full)

    def lift_to(self, modulus):
        if modulus == self.modulus:
            return self
        if modulus % self.modulus:
            raise ValueError("cannot lift modulus %d to %d" % (self.modulus, modulus))
        f = modulus // self.modulus
        full = [0] * modulus
        for i, x in enumerate(self.coeffs):
            full[i * f] = x
        return CycInt.from_full(self.p, modulus, full)

    def is_zero(self):
        return not any(self.coeffs)

    def as_root(self):
        """The exponent k with self == zeta^k, or None."""
        for k in range(self.modulus):
            if self == CycInt.root(self.p, self.modulus, k):
                return k
        return None

    def __eq__(self, other):
        if not isinstance(other, CycInt):
            return NotImplemented
        a, b = _common(self, other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.modulus, self.coeffs))

    def key(self, modulus):
        """Canonical value at a fixed comparison modulus."""
        return self.lift_to(modulus).coeffs

    def __repr__(self):
        return "CycInt(M=%d, %s)" % (self.modulus, self.coeffs)


def _common(a: CycInt, b: CycInt):
    if a.modulus == b.modulus:
        return a, b
    m = max(a.modulus, b.modulus)
    return a.lift_to(m), b.lift_to(m)


class MonomialMatrix:
    """n x n generalized permutation: column j holds zeta^exps[j] at row perm[j]."""

    __slots__ = ("n", "perm", "exps", "modulus", "p")

    def __init__(self, p, modulus, perm, exps):
        self.p = p
        self.modulus = modulus
        self.perm = tuple(perm)
        self.exps = tuple(e % modulus for e in exps)
        self.n = len(self.perm)

    @classmethod
    def identity(cls, p, modulus, n):
        return cls(p, modulus, range(n), (0,) * n)

    def __mul__(self, other):
        a, b = self, other
        if a.modulus != b.modulus:
            a, b = _common_mats(a, b)
        perm = tuple(a.perm[b.perm[j]] for j in range(a.n))
        exps = tuple(b.exps[j] + a.exps[b.perm[j]] for j in range(a.n))
        return MonomialMatrix(a.p, a.modulus, perm, exps)

    def inv(self):
        n = self.n
        perm = [0] * n
        exps = [0] * n
        for j in range(n):
            perm[self.perm[j]] = j
            exps[self.perm[j]] = -self.exps[j]
        return MonomialMatrix(self.p, self.modulus, perm, exps)

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        acc = MonomialMatrix.identity(self.p, self.modulus, self.n)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def scale(self, k):
        return MonomialMatrix(self.p, self.modulus, self.perm,
                              tuple(e + k for e in self.exps))

    def lift_to(self, modulus):
        if modulus == self.modulus:
            return self
        if modulus % self.modulus:
            raise ValueError("bad modulus lift")
        f = modulus // self.modulus
        return MonomialMatrix(self.p, modulus, self.perm,
                              tuple(e * f for e in self.exps))

    def trace(self) -> CycInt:
        full = [0] * self.modulus
        for j in range(self.n):
            if self.perm[j] == j:
                full[self.exps[j]] += 1
        return CycInt.from_full(self.p, self.modulus, full)

    def is_scalar(self):
        if any(self.perm[j] != j for j in range(self.n)):
            return None
        k = self.exps[0]
        if any(e != k for e in self.exps):
            return None
        return k

    def __eq__(self, other):
        if not isinstance(other, MonomialMatrix):
            return NotImplemented
        a, b = _common_mats(self, other)
        return a.perm == b.perm and a.exps == b.exps

    def __hash__(self):
        return hash((self.modulus, self.perm, self.exps))

    def __repr__(self):
        return "MonomialMatrix(n=%d, M=%d)" % (self.n, self.modulus)


def _common_mats(a: MonomialMatrix, b: MonomialMatrix):
    m = max(a.modulus, b.modulus)
    return a.lift_to(m), b.lift_to(m)


# ---------------------------------------------------------------------------
# linear characters
# ---------------------------------------------------------------------------

class LinearCharacter:
    """Character of a mask subgroup: one root exponent per mask generator."""

    def __init__(self, P: PcPresentation, mask, exps, modulus):
        self.P = P
        self.mask = tuple(sorted(mask))
        self.modulus = modulus
        self.exps = {int(i): int(e) % modulus for i, e in exps.items()}
        for i in self.mask:
            self.exps.setdefault(i, 0)
        self._check()

    def _check(self):
        P, M = self.P, self.modulus
        for i in self.mask:
            lhs = (P.orders[i] * self.exps[i]) % M
            rhs = self._word_value(P.powers.get(i, ()))
            if lhs != rhs:
                raise PresentationError("character violates the power relation of %s"
                                        % P.names[i])
        for (j, i), w in P.comms.items():
            if j in self.exps and i in self.exps:
                if self._word_value(w) % M:
                    raise PresentationError("character violates [%s,%s]"
                                            % (P.names[j], P.names[i]))

    def _word_value(self, w):
        return sum(self.exps[idx] * e for idx, e in w if idx in self.exps) % self.modulus

    def value(self, vec):
        return sum(self.exps[i] * vec[i] for i in self.mask) % self.modulus

    def __eq__(self, other):
        return (isinstance(other, LinearCharacter) and self.mask == other.mask
                and self.modulus == other.modulus and self.exps == other.exps)

    def __hash__(self):
        return hash((self.mask, self.modulus, tuple(sorted(self.exps.items()))))

    def __repr__(self):
        vals = ", ".join("%s:%d" % (self.P.names[i], self.exps[i]) for i in self.mask
                         if self.exps[i])
        return "LinearCharacter(%s; M=%d)" % (vals or "trivial", self.modulus)


def linear_characters(P: PcPresentation, mask=None):
    """All homomorphisms of the (sub)group into the roots of unity.

    Solves the relation constraints over Z/p^E, with E read off the
    generator element orders, then enumerates the Howell span of the
    constraint kernel.  The count always equals |H/H'|.
    """
    mask = tuple(sorted(mask)) if mask is not None else tuple(range(P.n))
    p = P.p
    E = 1
    for i in mask:
        o = P.element_order(P.gen_vec(i))
        e = 0
        while o > 1:
            o //= p
            e += 1
        E = max(E, e)
    if E > MAX_ROOT_EXPONENT:
        raise PresentationError("generator order exceeds the supported root modulus")
    mod = p ** E
    pos = {g: k for k, g in enumerate(mask)}
    rows = []
    for i in mask:
        row = [0] * len(mask)
        row[pos[i]] = P.orders[i]
        for idx, e in P.powers.get(i, ()):
            if idx not in pos:
                raise PresentationError("mask not closed under power relations")
            row[pos[idx]] -= e
        rows.append([x % mod for x in row])
    for (j, i), w in P.comms.items():
        if j in pos and i in pos:
            row = [0] * len(mask)
            for idx, e in w:
                row[pos[idx]] += e
            rows.append([x % mod for x in row])
    chars = []
    for vec in _kernel_span(rows, len(mask), p, E):
        chars.append(LinearCharacter(P, mask, {g: vec[pos[g]] for g in mask}, mod))
    return chars


def _kernel_span(rows, ncols, p, e):
    """Enumerate {c : M c = 0 over Z/p^e} via a Howell basis of [M^T | I]."""
    mod = p ** e
    nrows = len(rows)
    basis = HowellBasis(nrows + ncols, p, e)
    for j in range(ncols):
        row = np.zeros(nrows + ncols, dtype=np.int64)
        for r in range(nrows):
            row[r] = rows[r][j]
        row[nrows + j] = 1
        basis.insert(row)
    kernel_rows = []
    for c in sorted(basis.rows):
        if c >= nrows:
            kernel_rows.append((basis.rows[c][nrows:] % mod, basis.lead_val[c]))
    out = []
    ranges = [range(p ** (e - a)) for _, a in kernel_rows]
    for combo in itertools.product(*ranges):
        vec = np.zeros(ncols, dtype=np.int64)
        for t, (row, _) in zip(combo, kernel_rows):
            vec = (vec + t * row) % mod
        out.append(tuple(int(x) for x in vec))
    assert len(set(out)) == len(out), "Howell span enumeration produced duplicates"
    return out


# ---------------------------------------------------------------------------
# monomial representations
# ---------------------------------------------------------------------------

class MonomialRep:
    """A representation of a mask subgroup by monomial matrices.

    mats maps ambient generator index -> MonomialMatrix; evaluation follows
    the normal form, so the rep is defined on every element supported on
    the mask.  `origin` records the construction (inducing pair if known).
    """

    def __init__(self, P: PcPresentation, mask, mats, modulus, origin=None):
        self.P = P
        self.mask = tuple(sorted(mask))
        self.mats = dict(mats)
        self.modulus = modulus
        self.degree = next(iter(self.mats.values())).n if self.mats else 1
        self.origin = origin or {}
        self._value_cache = {}

    def lift_to(self, modulus):
        if modulus == self.modulus:
            return self
        return MonomialRep(self.P, self.mask,
                           {i: m.lift_to(modulus) for i, m in self.mats.items()},
                           modulus, self.origin)

    def value(self, vec) -> MonomialMatrix:
        vec = tuple(vec)
        hit = self._value_cache.get(vec)
        if hit is not None:
            return hit
        acc = MonomialMatrix.identity(self.P.p, self.modulus, self.degree)
        for i in self.mask:
            e = vec[i]
            if e:
                acc = acc * (self.mats[i] ** e)
        self._value_cache[vec] = acc
        return acc

    def trace(self, vec) -> CycInt:
        return self.value(vec).trace()

    def gen_traces_key(self, fp_modulus):
        return tuple(self.mats[i].trace().key(fp_modulus) for i in self.mask)

    def __repr__(self):
        return "MonomialRep(deg=%d, M=%d, |mask|=%d)" % (
            self.degree, self.modulus, len(self.mask))


def char_as_rep(lam: LinearCharacter) -> MonomialRep:
    mats = {i: MonomialMatrix(lam.P.p, lam.modulus, (0,), (lam.exps[i],))
            for i in lam.mask}
    return MonomialRep(lam.P, lam.mask, mats, lam.modulus,
                       origin={"kind": "linear", "character": lam})


def check_relations(rep: MonomialRep) -> list:
    """All presentation relations among mask generators, checked exactly."""
    P = rep.P
    failures = []
    for i in rep.mask:
        lhs = rep.mats[i] ** P.orders[i]
        rhs = MonomialMatrix.identity(P.p, rep.modulus, rep.degree)
        for idx, e in P.powers.get(i, ()):
            rhs = rhs * (rep.mats[idx] ** e)
        if lhs != rhs:
            failures.append(("power", P.names[i]))
    for j in rep.mask:
        for i in rep.mask:
            if j <= i:
                continue
            w = P.comms.get((j, i), ())
            lhs = rep.mats[j] * rep.mats[i]
            rhs = rep.mats[i] * rep.mats[j]
            for idx, e in w:
                rhs = rhs * (rep.mats[idx] ** e)
            if lhs != rhs:
                failures.append(("comm", P.names[j], P.names[i]))
    return failures


def induce(H: SubgroupSpec, lam: LinearCharacter, G: PcPresentation) -> MonomialRep:
    """Induced monomial representation Ind_H^G(lam).

    H must be a mask subgroup whose complement consists of depth-1
    generators; the transversal is the set of normal words over the
    complement.
    """
    if H.mask is None:
        raise PresentationError("induction requires a mask subgroup")
    mask = set(H.mask)
    complement = [i for i in range(G.n) if i not in mask]
    if any(G.depths[i] != 1 for i in complement):
        raise PresentationError("complement generators must be depth 1")
    ranges = [range(G.orders[i]) for i in complement]
    transversal = []
    t_index = {}
    for combo in itertools.product(*ranges):
        vec = [0] * G.n
        for i, e in zip(complement, combo):
            vec[i] = e
        t_index[combo] = len(transversal)
        transversal.append(tuple(vec))
    deg = len(transversal)
    inv_tau = [G.inv(t) for t in transversal]
    mats = {}
    for g in range(G.n):
        gv = G.gen_vec(g)
        perm = [0] * deg
        exps = [0] * deg
        for col, tau in enumerate(transversal):
            w = G.mul(gv, tau)
            row = t_index[tuple(w[i] for i in complement)]
            h = G.mul(inv_tau[row], w)
            assert all(h[i] == 0 for i in complement), "transversal split failed"
            perm[col] = row
            exps[col] = lam.value(h)
        mats[g] = MonomialMatrix(G.p, lam.modulus, perm, exps)
    rep = MonomialRep(G, range(G.n), mats, lam.modulus,
                      origin={"kind": "induced", "subgroup": H.mask, "character": lam})
    bad = check_relations(rep)
    if bad:
        raise AssertionError("induced matrices violate relations: %r" % (bad,))
    return rep


def conjugate_rep(rep: MonomialRep, t) -> MonomialRep:
    """The representation g -> rep(t g t^-1)."""
    P = rep.P
    t = tuple(t)
    t_inv = P.inv(t)
    mats = {}
    for i in rep.mask:
        conj = P.mul(P.mul(t, P.gen_vec(i)), t_inv)
        mats[i] = rep.value(conj)
    return MonomialRep(P, rep.mask, mats, rep.modulus,
                       origin={"kind": "conjugate", "of": rep.origin})


# ---------------------------------------------------------------------------
# intertwiners and the extend-or-induce step
# ---------------------------------------------------------------------------

def _solve_intertwiner(repA: MonomialRep, repB: MonomialRep):
    """T with T repA(g) = repB(g) T for all mask generators, or None.

    The monomial constraint pairs matrix positions bijectively with
    root-of-unity offsets, so the solution space decomposes over the
    components of a position graph; union-find with potentials finds the
    consistent ones.  For equivalent irreducibles exactly one survives and
    T is its indicator, which is again monomial.
    """
    if repA.mask != repB.mask:
        raise PresentationError("intertwiner across different masks")
    if repA.degree != repB.degree:
        return None
    M = max(repA.modulus, repB.modulus)
    A = {i: repA.mats[i].lift_to(M) for i in repA.mask}
    B = {i: repB.mats[i].lift_to(M) for i in repB.mask}
    n = repA.degree
    size = n * n
    parent = list(range(size))
    offset = [0] * size
    dead = [False] * size

    def find(u):
        chain = []
        r = u
        while parent[r] != r:
            chain.append(r)
            r = parent[r]
        total = 0
        for v in chain:
            total += offset[v]
        total %= M
        acc = total
        for v in chain:
            step = offset[v]
            parent[v] = r
            offset[v] = acc
            acc = (acc - step) % M
        return r, total

    def union(u, v, delta):
        # pot(u) - pot(v) = delta
        ru, pu = find(u)
        rv, pv = find(v)
        if ru == rv:
            if (pu - pv - delta) % M:
                dead[ru] = True
            return
        parent[rv] = ru
        offset[rv] = (pu - delta - pv) % M
        if dead[rv]:
            dead[ru] = True

    for g in repA.mask:
        Ag, Bg = A[g], B[g]
        inv_permB = [0] * n
        for j in range(n):
            inv_permB[Bg.perm[j]] = j
        for i in range(n):
            k = inv_permB[i]
            bexp = Bg.exps[k]
            for j in range(n):
                union(i * n + Ag.perm[j], k * n + j, (bexp - Ag.exps[j]) % M)
    comps = {}
    for pos in range(size):
        root, pot = find(pos)
        comps.setdefault(root, []).append((pos, pot))
    alive = [members for root, members in comps.items() if not dead[root]]
    if not alive:
        return None
    if len(alive) != 1:
        raise AssertionError("intertwiner space has dimension %d > 1 "
                             "(inputs not irreducible?)" % len(alive))
    members = alive[0]
    anchor_pot = min(pot for pos, pot in members if pos == min(q for q, _ in members))
    rows = {}
    cols = {}
    for pos, pot in members:
        i, j = divmod(pos, n)
        if i in rows or j in cols:
            raise AssertionError("intertwiner is not monomial; unsupported shape")
        rows[i] = (j, (pot - anchor_pot) % M)
        cols[j] = i
    if len(rows) != n:
        raise AssertionError("intertwiner support does not cover all rows")
    perm = [0] * n
    exps = [0] * n
    for i, (j, e) in rows.items():
        perm[j] = i
        exps[j] = e
    T = MonomialMatrix(repA.P.p, M, perm, exps)
    for g in repA.mask:
        assert T * A[g] == B[g] * T, "intertwiner verification failed"
    return T


def extend_or_induce(theta: MonomialRep, x_idx: int, big_mask) -> list:
    """Irreducibles of <N, x> produced by theta's orbit.

    Returns p extensions when theta is invariant under conjugation by x
    (the intertwiner is scaled so T^p = theta(x^p), then twisted by the p
    characters of the quotient), else the single induced representation of
    degree p*deg(theta).  Call once per conjugation orbit.
    """
    P = theta.P
    p = P.p
    x_vec = P.gen_vec(x_idx)
    theta_x = conjugate_rep(theta, x_vec)
    T = _solve_intertwiner(theta, theta_x)
    if T is None:
        return [_induce_step(theta, x_idx, big_mask)]
    xp = P.pow(x_vec, p)
    target = theta.value(xp).lift_to(T.modulus)
    S = (T ** p) * target.inv()
    k = S.is_scalar()
    if k is None:
        raise AssertionError("T^p theta(x^p)^-1 is not scalar; arithmetic bug")
    M = T.modulus
    if k % p == 0:
        T = T.scale((-(k // p)) % M)
    else:
        M *= p
        if M > P.p ** MAX_ROOT_EXPONENT:
            raise AssertionError("root modulus exceeded during extension scaling")
        T = T.lift_to(M).scale((-k) % M)
    assert (T ** p) == theta.value(xp).lift_to(M), "extension scaling failed"
    # deterministic twist order: leading exponent normalized into [0, M/p)
    shift = M // p
    T = T.scale(((-(T.exps[0] // shift)) % p) * shift)
    theta_l = theta.lift_to(M)
    out = []
    for c in range(p):
        mats = dict(theta_l.mats)
        mats[x_idx] = T.scale(c * shift)
        out.append(MonomialRep(P, big_mask, mats, M,
                               origin={"kind": "extension", "twist": c,
                                       "of": theta.origin}))
    return out


def _induce_step(theta: MonomialRep, x_idx: int, big_mask) -> MonomialRep:
    P = theta.P
    p = P.p
    deg = theta.degree
    x_vec = P.gen_vec(x_idx)
    x_pows = [P.identity]
    for _ in range(p):
        x_pows.append(P.mul(x_pows[-1], x_vec))
    x_inv_pows = [P.inv(v) for v in x_pows]
    M = theta.modulus
    mats = {}
    for g in sorted(set(big_mask)):
        perm = [0] * (p * deg)
        exps = [0] * (p * deg)
        if g == x_idx:
            theta_xp = theta.value(x_pows[p])
            for t in range(p):
                blk = (MonomialMatrix.identity(P.p, M, deg) if t < p - 1 else theta_xp)
                for r in range(deg):
                    perm[t * deg + r] = ((t + 1) % p) * deg + blk.perm[r]
                    exps[t * deg + r] = blk.exps[r]
        else:
            gv = P.gen_vec(g)
            for t in range(p):
                blk = theta.value(P.mul(P.mul(x_inv_pows[t], gv), x_pows[t]))
                for r in range(deg):
                    perm[t * deg + r] = t * deg + blk.perm[r]
                    exps[t * deg + r] = blk.exps[r]
        mats[g] = MonomialMatrix(P.p, M, perm, exps)
    origin = {"kind": "induced-step", "of": theta.origin}
    if theta.origin.get("kind") in ("linear", "induced"):
        origin = {"kind": "induced",
                  "subgroup": theta.origin.get("subgroup", theta.mask),
                  "character": theta.origin.get("character")}
    return MonomialRep(P, big_mask, mats, M, origin)


# ---------------------------------------------------------------------------
# the ladder
# ---------------------------------------------------------------------------

@dataclass
class LadderResult:
    reps: list
    complete: bool
    group_order: int
    steps: list = field(default_factory=list)  # per level: (subgroup order, #reps)


def irr_ladder(P: PcPresentation, series=None, budget=3 ** 8) -> LadderResult:
    """Complete pairwise-inequivalent Irr(G), built along the normal chain.

    The default chain adjoins depth-1 generators in presentation order over
    the abelian base spanned by the depth->=2 generators.  sum(deg^2) =
    |subgroup| is asserted at every level and all outputs are checked
    against every presentation relation.
    """
    base_mask = [i for i in range(P.n) if P.depths[i] >= 2]
    steps = list(P.u_indices)
    if series is not None:
        base_mask = list(series[0].mask)
        prev = set(base_mask)
        steps = []
        for spec in series[1:]:
            new = set(spec.mask) - prev
            if len(new) != 1:
                raise PresentationError("series steps must each adjoin one generator")
            steps.append(new.pop())
            prev = set(spec.mask)
    order = P.group_order()
    if order > budget:
        raise BudgetError("irr_ladder budget: |G| = %d > %d" % (order, budget))
    reps = [char_as_rep(lam) for lam in linear_characters(P, base_mask)]
    mask = list(base_mask)
    step_log = [(_mask_order(P, mask), len(reps))]
    for x_idx in steps:
        mask = sorted(mask + [x_idx])
        reps = _ladder_step(P, reps, x_idx, mask)
        sub_order = _mask_order(P, mask)
        assert sum(r.degree ** 2 for r in reps) == sub_order, \
            "sum of squared degrees does not match the subgroup order"
        step_log.append((sub_order, len(reps)))
    for rep in reps:
        bad = check_relations(rep)
        assert not bad, "ladder output violates relations: %r" % (bad,)
    return LadderResult(reps, True, order, step_log)


def _mask_order(P, mask):
    o = 1
    for i in mask:
        o *= P.orders[i]
    return o


def _ladder_step(P, reps, x_idx, big_mask):
    fp_mod = P.p ** MAX_ROOT_EXPONENT
    x_vec = P.gen_vec(x_idx)
    by_fp = {}
    for idx, rep in enumerate(reps):
        key = (rep.degree, rep.gen_traces_key(fp_mod))
        by_fp.setdefault(key, []).append(idx)

    def find_partner(conj_rep):
        key = (conj_rep.degree, conj_rep.gen_traces_key(fp_mod))
        for cand in by_fp.get(key, ()):
            if _solve_intertwiner(reps[cand], conj_rep) is not None:
                return cand
        raise AssertionError("conjugate representation missing from Irr(N)")

    out = []
    seen = set()
    for idx in range(len(reps)):
        if idx in seen:
            continue
        orbit = [idx]
        cur = idx
        while True:
            partner = find_partner(conjugate_rep(reps[cur], x_vec))
            if partner == orbit[0]:
                break
            orbit.append(partner)
            cur = partner
            assert len(orbit) <= P.p, "conjugation orbit longer than p"
        seen.update(orbit)
        if len(orbit) == 1:
            out.extend(extend_or_induce(reps[idx], x_idx, big_mask))
        else:
            assert len(orbit) == P.p, "orbit size must be 1 or p"
            out.append(_induce_step(reps[min(orbit)], x_idx, big_mask))
    return out


def irr_over_character(P: PcPresentation, chi_exps: dict) -> MonomialRep:
    """One irreducible whose central character restricts to chi on the kernel.

    chi_exps maps ambient generator indices (central generators inside the
    abelian base) to exponents mod p.  Follows a single ladder branch, so
    it works far beyond the full-enumeration budget.
    """
    base_mask = [i for i in range(P.n) if P.depths[i] >= 2]
    base_set = set(base_mask)
    for i in chi_exps:
        if i not in base_set:
            raise PresentationError("character coordinate %s outside the abelian base"
                                    % P.names[i])
    lam = LinearCharacter(P, base_mask, {i: chi_exps.get(i, 0) for i in base_mask}, P.p)
    rep = char_as_rep(lam)
    mask = list(base_mask)
    for x_idx in P.u_indices:
        mask = sorted(mask + [x_idx])
        theta_x = conjugate_rep(rep, P.gen_vec(x_idx))
        if _solve_intertwiner(rep, theta_x) is None:
            rep = _induce_step(rep, x_idx, mask)
        else:
            rep = extend_or_induce(rep, x_idx, mask)[0]
    bad = check_relations(rep)
    assert not bad, "single-branch ladder output violates relations"
    return rep


# ---------------------------------------------------------------------------
# equivalence
# ---------------------------------------------------------------------------

def equivalent(r1: MonomialRep, r2: MonomialRep, budget=3 ** 7, classes=None) -> bool:
    """Exact character comparison.

    With conjugacy classes available the traces are compared on the class
    representatives; otherwise equality is decided by the exact inner
    products n11, n12, n22 over the whole group (all equal iff the
    characters agree), within budget.
    """
    if r1.P is not r2.P:
        raise PresentationError("presentation mismatch")
    if r1.mask != r2.mask:
        raise PresentationError("representations of different subgroups")
    if r1.degree != r2.degree:
        return False
    P = r1.P
    if classes is not None:
        return all(r1.trace(rep.vec) == r2.trace(rep.vec) for rep, _ in classes)
    order = _mask_order(P, r1.mask)
    if order > budget:
        raise BudgetError("equivalence budget: |H| = %d > %d" % (order, budget))
    in_mask = set(r1.mask)
    ranges = [range(P.orders[i]) if i in in_mask else range(1) for i in range(P.n)]
    n11 = n12 = n22 = None
    for v in itertools.product(*ranges):
        t1 = r1.trace(v)
        t2 = r2.trace(v)
        a, b, c = t1 * t1.conj(), t1 * t2.conj(), t2 * t2.conj()
        n11 = a if n11 is None else n11 + a
        n12 = b if n12 is None else n12 + b
        n22 = c if n22 is None else n22 + c
    return n11 == n12 == n22


# ---------------------------------------------------------------------------
# projective representations by pullback
# ---------------------------------------------------------------------------

class ProjectiveRep:
    """rho(g) := rho_star(s(g)) for the canonical section s of a quotient."""

    def __init__(self, qm, rho_star: MonomialRep, cocycle, chi):
        self.qm = qm
        self.base = qm.quotient
        self.rho_star = rho_star
        self.cocycle = cocycle
        self.chi = chi  # kernel character: cover coordinate -> exponent
        self.degree = rho_star.degree
        self.modulus = rho_star.modulus

    def value(self, vec) -> MonomialMatrix:
        return self.rho_star.value(self.qm.lift_vec(vec))

    def __repr__(self):
        return "ProjectiveRep(deg=%d, base order %d)" % (
            self.degree, self.base.group_order())


def kernel_character(rep: MonomialRep, kernel_indices):
    """Exponents of the scalars rep(z) over the central kernel generators."""
    out = {}
    for i in kernel_indices:
        k = rep.mats[i].is_scalar()
        if k is None:
            raise PresentationError("representation is not isotypic on %s"
                                    % rep.P.names[i])
        out[i] = k
    return out


def proj_from_repgroup(rho_star: MonomialRep, qm, chi=None) -> ProjectiveRep:
    """Projective representation of the base group from one of the cover.

    `qm` is the quotient of the cover by the designated central kernel.
    rho_star must act by chi-scalars on the kernel (checked); the attached
    cocycle is the transgression of chi along the canonical section.
    """
    kernel = sorted(qm.pivot_rows)
    observed = kernel_character(rho_star, kernel)
    M = rho_star.modulus
    if chi is not None:
        scale = M // qm.source.p
        for i in kernel:
            if observed[i] != (int(chi.get(i, 0)) * scale) % M:
                raise PresentationError("rho_star is not chi-isotypic on the kernel")
    alpha = coh.transgression_cocycle(qm, observed, modulus=M)
    return ProjectiveRep(qm, rho_star, alpha, observed)


def verify_projective_rep(proj: ProjectiveRep, mode="exhaustive", samples=2000,
                          seed=0, budget=3 ** 6):
    """Check rho(g) rho(h) == zeta^alpha(g,h) rho(gh), exactly."""
    base = proj.base
    alpha = proj.cocycle
    checked = 0
    if mode == "exhaustive":
        order = base.group_order()
        if order > budget:
            raise BudgetError("exhaustive projective check beyond budget")
        elements = list(base.enumerate_elements(budget))
        values = {v: proj.value(v) for v in elements}
        factor = values[elements[0]].modulus // alpha.modulus
        for g in elements:
            vg = values[g]
            for h in elements:
                lhs = vg * values[h]
                rhs = values[base.mul(g, h)].scale(alpha.val(g, h) * factor)
                if lhs != rhs:
                    return {"pass": False, "checked": checked, "witness": (g, h)}
                checked += 1
        return {"pass": True, "checked": checked, "witness": None}
    import random
    rng = random.Random(seed)
    factor = proj.modulus // alpha.modulus
    for _ in range(samples):
        g = tuple(rng.randrange(base.orders[i]) for i in range(base.n))
        h = tuple(rng.randrange(base.orders[i]) for i in range(base.n))
        lhs = proj.value(g) * proj.value(h)
        rhs = proj.value(base.mul(g, h)).scale(alpha.val(g, h) * factor)
        if lhs != rhs:
            return {"pass": False, "checked": checked, "witness": (g, h)}
        checked += 1
    return {"pass": True, "checked": checked, "witness": None}
