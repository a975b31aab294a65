"""Schur-multiplier machinery for the max-rank families.

The tensor space is G/G' (x) G' with basis x_i (x) y_jk; X is the subspace
spanned by the Jacobi tensors x_i(x)y_jk - x_j(x)y_ik + x_k(x)y_ij and, for
the |G^p| = p family, the power tensors x_r(x)y_12.  A class in H^2 is
coded by a functional W on the tensor basis vanishing on X; its cocycle is

    alpha(a, b) = zeta ^ ( r(a)^T W s(b) + c(r(a), r(b)) )

where r/s are the depth-1/depth-2 exponents and c is the cubic correction
solving the 2-cocycle identity against the normal-form twist
s(yz) - s(y) - s(z) = Q(r(y), r(z)).  The bilinear part alone is not a
cocycle for any nonzero W; c exists exactly because W kills the Jacobi
tensors (the totally antisymmetric obstruction cancels), and it vanishes
whenever its second argument has no depth-1 part, so the values on
(generator, commutator) pairs are the bare W entries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import families as fam
from .pcgroup import BudgetError, PcPresentation, PresentationError, _row_reduce_mod_p
from .oracle import SparseModMatrix, howell_solve

GP_QUOTIENT = "MAXRANK_GP_QUOTIENT"


def _pairs(d):
    return [(j, k) for j in range(1, d + 1) for k in range(j + 1, d + 1)]


class TensorSpace:
    """Coordinates on G/G' (x) G' for a d-generator max-rank group."""

    def __init__(self, p, d):
        self.p = p
        self.d = d
        self.pairs = _pairs(d)
        self.pair_pos = {pr: i for i, pr in enumerate(self.pairs)}
        self.dim = d * len(self.pairs)

    def basis_label(self, i, pair):
        return "x_%d (x) y_%d%d" % (i, pair[0], pair[1])


@dataclass
class XSubspace:
    family: fam.FamilyId
    space: TensorSpace
    basis: list  # reduced rows over Z/p, flattened tensor coordinates
    rank: int


_EXP_P_LIKE = (fam.MAXRANK_EXP_P, fam.HEIS)
_GP_LIKE = (fam.MAXRANK_GP_P,)


def _family_d(f: fam.FamilyId) -> int:
    return 2 if f.tag == fam.HEIS else f.d


def build_X(f: fam.FamilyId) -> XSubspace:
    """Jacobi (and, for |G^p| = p, power) tensors, row-reduced."""
    if f.tag not in _EXP_P_LIKE + _GP_LIKE:
        raise PresentationError("build_X supports the max-rank families, got %s" % f.tag)
    d = _family_d(f)
    ts = TensorSpace(f.p, d)
    rows = []
    for i, j, k in itertools.combinations(range(1, d + 1), 3):
        row = [0] * ts.dim
        row[(i - 1) * len(ts.pairs) + ts.pair_pos[(j, k)]] = 1
        row[(j - 1) * len(ts.pairs) + ts.pair_pos[(i, k)]] = -1 % f.p
        row[(k - 1) * len(ts.pairs) + ts.pair_pos[(i, j)]] = 1
        rows.append(row)
    if f.tag in _GP_LIKE:
        for r in range(1, d + 1):
            row = [0] * ts.dim
            row[(r - 1) * len(ts.pairs) + ts.pair_pos[(1, 2)]] = 1
            rows.append(row)
    basis = _row_reduce_mod_p(rows, ts.dim, f.p)
    return XSubspace(f, ts, basis, len(basis))


def h2_order(f: fam.FamilyId) -> int:
    """Closed-form |H^2(G, C*)| for the supported base groups."""
    p, d = f.p, _family_d(f)
    if f.tag in _EXP_P_LIKE:
        return p ** (d * (d - 1) * (d + 1) // 3)
    if f.tag in _GP_LIKE:
        return p ** (d * (d - 1) * (d + 1) // 3 - d)
    if f.tag == GP_QUOTIENT:
        return p ** (d * (d - 1) * (d + 1) // 3 - d + 1)
    if f.tag == fam.ELEM_AB:
        return p ** (d * (d - 1) // 2)
    if f.tag == fam.ES_TIMES_AB and f.m == 1:
        dd = f.d + 2  # minimal generator count of ES_p(p^3) x (Z/p)^t
        return p ** (dd * (dd - 1) // 2 + 1)
    raise PresentationError("no closed-form h2_order for family %s" % f.tag)


def h2_rank_identity(f: fam.FamilyId) -> bool:
    """h2_order == p^(tensor dim - rank X), the defining rank identity."""
    X = build_X(f)
    return f.p ** (X.space.dim - X.rank) == h2_order(f)


# ---------------------------------------------------------------------------
# mu parameters
# ---------------------------------------------------------------------------

def mu_keys(f: fam.FamilyId):
    """Ordered free parameter keys; the (1,2)-shapes drop for |G^p| = p."""
    d = _family_d(f)
    gp = f.tag in _GP_LIKE
    keys = []
    for i, j in itertools.combinations(range(1, d + 1), 2):
        for key in ((i, i, j), (j, i, j)):
            if gp and (i, j) == (1, 2):
                continue
            keys.append(key)
    for i, j, k in itertools.combinations(range(1, d + 1), 3):
        keys.append((i, j, k))
        if gp and (i, j) == (1, 2):
            continue
        keys.append((j, i, k))
    return keys


def excluded_mu_keys(f: fam.FamilyId):
    if f.tag not in _GP_LIKE:
        return []
    return [(1, 1, 2), (2, 1, 2)] + [(2, 1, k) for k in range(3, f.d + 1)]


class MuParameters:
    """Free exponents mu_ijk in Z/p indexed by the four admissible shapes."""

    def __init__(self, family: fam.FamilyId, table=None):
        if family.tag not in _EXP_P_LIKE + _GP_LIKE:
            raise PresentationError("mu parameters require a max-rank family")
        self.family = family
        self.keys = mu_keys(family)
        keyset = set(self.keys)
        excluded = set(excluded_mu_keys(family))
        self.table = {}
        for key, val in (table or {}).items():
            key = tuple(int(x) for x in key)
            if key in excluded:
                raise PresentationError(
                    "mu_%d%d%d is excluded for the |G^p| = p family "
                    "(the (1,2) shapes are not free parameters)" % key)
            if key not in keyset:
                raise PresentationError("unknown mu key %r" % (key,))
            val = int(val) % family.p
            if val:
                self.table[key] = val

    def __getitem__(self, key):
        return self.table.get(tuple(key), 0)

    def __eq__(self, other):
        return (isinstance(other, MuParameters) and self.family == other.family
                and self.table == other.table)

    def __repr__(self):
        inner = ", ".join("mu_%d%d%d=%d" % (k + (v,)) for k, v in sorted(self.table.items()))
        return "MuParameters(%s)" % (inner or "0")

    @classmethod
    def basis(cls, family):
        return [cls(family, {key: 1}) for key in mu_keys(family)]

    def w_matrix(self):
        """The tensor-basis functional W[i][pair] over Z/p.

        For the |G^p| = p family the key (1,2,k) also feeds position
        (2, (1,k)) and leaves the y_12 column zero: the identification
        forced by killing the x_r (x) y_12 tensors.
        """
        f = self.family
        d = _family_d(f)
        p = f.p
        ts = TensorSpace(p, d)
        W = [[0] * len(ts.pairs) for _ in range(d)]
        gp = f.tag in _GP_LIKE

        def add(i, pair, v):
            W[i - 1][ts.pair_pos[pair]] = (W[i - 1][ts.pair_pos[pair]] + v) % p

        for (a, b, c), v in self.table.items():
            if a == b or a == c:  # diagonal shapes mu_iij / mu_jij
                add(a, (b, c), v)
            elif a < b:  # mu_ijk with i<j<k
                add(a, (b, c), v)
                if gp and (a, b) == (1, 2):
                    add(b, (a, c), v)
                else:
                    add(c, (a, b), -v)
            else:  # mu_jik with i<j<k, stored as key (j, i, k)
                add(a, (b, c), v)
                add(c, (b, a), v)
        return np.array(W, dtype=np.int64) % p

    def to_json_dict(self):
        f = self.family
        return {
            "family": fam.TAG_TO_CLI[f.tag],
            "p": f.p,
            "d": _family_d(f),
            "mu": {"%d,%d,%d" % k: v for k, v in sorted(self.table.items())},
        }

    @classmethod
    def from_json_dict(cls, d):
        tag = fam.CLI_NAMES.get(d["family"])
        if tag is None:
            raise PresentationError("unknown family %r" % (d["family"],))
        fid = fam.FamilyId(tag, int(d["p"]), int(d.get("d", 2)))
        table = {}
        for key, val in d.get("mu", {}).items():
            parts = tuple(int(x) for x in key.split(","))
            if len(parts) != 3:
                raise PresentationError("bad mu key %r" % (key,))
            table[parts] = val
        return cls(fid, table)


# ---------------------------------------------------------------------------
# cocycles
# ---------------------------------------------------------------------------

def _correction_monomials(W, d, p):
    """Cubic monomials c(u, v) with  delta-bar c = u^T W Q(v, w).

    Returns [(coef, u_factors, v_factors)] with 0-based index tuples.  A
    solution exists iff W kills the Jacobi tensors; the pinned identity
    check re-verifies the construction on every instance.
    """
    inv2 = (p + 1) // 2
    pairs = _pairs(d)
    pos = {pr: i for i, pr in enumerate(pairs)}
    mono = []

    def emit(coef, ufac, vfac):
        coef %= p
        if coef:
            mono.append((coef, tuple(a - 1 for a in ufac), tuple(b - 1 for b in vfac)))

    for i, j, k in itertools.combinations(range(1, d + 1), 3):
        A = int(W[i - 1][pos[(j, k)]])
        B = int(W[j - 1][pos[(i, k)]])
        emit(-A, (k,), (i, j))
        emit(-A, (i, k), (j,))
        emit(-B, (j, k), (i,))
    for i, j in itertools.combinations(range(1, d + 1), 2):
        Wi = int(W[i - 1][pos[(i, j)]])
        Wj = int(W[j - 1][pos[(i, j)]])
        emit(-Wi, (i, j), (i,))
        emit(-Wi * inv2, (j,), (i, i))
        emit(-Wj * inv2, (j, j), (i,))
    return mono


class Cocycle:
    """An evaluatable 2-cocycle storing root-of-unity exponents mod p^e.

    `val(a, b)` takes normal-form exponent vectors of the base group.
    Provenance is one of "from-mu", "from-pullback", "from-table".
    """

    def __init__(self, G: PcPresentation, modulus, value_fn, provenance, meta=None):
        self.G = G
        self.modulus = int(modulus)
        self._fn = value_fn
        self.provenance = provenance
        self.meta = meta or {}

    def val(self, a, b):
        return self._fn(tuple(a), tuple(b)) % self.modulus

    def dense_table(self, budget=3 ** 6):
        els, index, _ = cayley_tables(self.G, budget)
        fast = self.meta.get("dense_fn")
        if fast is not None:
            return fast(els, index)
        N = len(els)
        table = np.zeros((N, N), dtype=np.int64)
        for i, a in enumerate(els):
            for j, b in enumerate(els):
                table[i, j] = self.val(a, b)
        return table

    def ratio(self, other):
        """Pointwise quotient (difference of exponents)."""
        if self.G is not other.G:
            raise PresentationError("cocycles live on different groups")
        if other.modulus != self.modulus:
            raise PresentationError("cocycle modulus mismatch")
        mod = self.modulus
        fn_a, fn_b = self._fn, other._fn
        return Cocycle(self.G, mod, lambda a, b: (fn_a(a, b) - fn_b(a, b)) % mod,
                       "from-table", {"ratio": True})


def cayley_tables(P: PcPresentation, budget=3 ** 6):
    """(elements, index, multiplication table), cached on the presentation."""
    cached = getattr(P, "_cayley", None)
    if cached is not None:
        return cached
    order = P.group_order()
    if order > budget:
        raise BudgetError("dense-table budget: |G| = %d > %d" % (order, budget))
    els = list(P.enumerate_elements(budget))
    index = {x: i for i, x in enumerate(els)}
    N = len(els)
    mul = np.zeros((N, N), dtype=np.int32)
    for i, x in enumerate(els):
        for j, y in enumerate(els):
            mul[i, j] = index[P.mul(x, y)]
    P._cayley = (els, index, mul)
    return P._cayley


def _require_family(G: PcPresentation) -> fam.FamilyId:
    f = getattr(G, "_family", None)
    if f is None:
        raise PresentationError("presentation carries no family stamp; build it "
                                "through projrep.families.build")
    return f


def _functional_cocycle(W, G: PcPresentation, f: fam.FamilyId, provenance, meta):
    d = _family_d(f)
    p = f.p
    W = np.asarray(W, dtype=np.int64) % p
    mono = _correction_monomials(W, d, p)
    u_idx = G.u_indices
    v_idx = G.v_indices
    if len(u_idx) != d or len(v_idx) != W.shape[1]:
        raise PresentationError("group does not match the family's coordinates")

    def corr(ra, rb):
        total = 0
        for coef, ufac, vfac in mono:
            term = coef
            for ui in ufac:
                term *= ra[ui]
            for vi in vfac:
                term *= rb[vi]
            total += term
        return total

    def value(a, b):
        ra = [a[i] for i in u_idx]
        rb = [b[i] for i in u_idx]
        sb = [b[i] for i in v_idx]
        total = corr(ra, rb)
        for i in range(d):
            if ra[i]:
                row = W[i]
                total += ra[i] * sum(int(row[k]) * sb[k] for k in range(len(sb)))
        return total % p

    def dense_fn(els, index):
        R = np.array([[x[i] for i in u_idx] for x in els], dtype=np.int64)
        S = np.array([[x[i] for i in v_idx] for x in els], dtype=np.int64)
        bil = (R @ W @ S.T) % p
        # the correction factors through the depth-1 classes of both sides
        r_rows = sorted(set(map(tuple, R.tolist())))
        r_class = {r: i for i, r in enumerate(r_rows)}
        ctab = np.zeros((len(r_rows), len(r_rows)), dtype=np.int64)
        for ia, ra in enumerate(r_rows):
            for ib, rb in enumerate(r_rows):
                ctab[ia, ib] = corr(ra, rb) % p
        cls = np.array([r_class[tuple(r)] for r in R.tolist()], dtype=np.int64)
        return (bil + ctab[np.ix_(cls, cls)]) % p

    meta = dict(meta)
    meta["W"] = W
    meta["dense_fn"] = dense_fn
    return Cocycle(G, p, value, provenance, meta)


def cocycle_from_mu(mu: MuParameters, G: PcPresentation) -> Cocycle:
    f = _require_family(G)
    if (f.tag, f.p, _family_d(f)) != (mu.family.tag, mu.family.p, _family_d(mu.family)):
        raise PresentationError("mu/family mismatch: %s vs %s"
                                % (mu.family.describe(), f.describe()))
    return _functional_cocycle(mu.w_matrix(), G, f, "from-mu", {"mu": mu})


def eta(fvals, G: PcPresentation) -> Cocycle:
    """Cocycle of a tensor-basis functional; requires vanishing on X."""
    f = _require_family(G)
    X = build_X(f)
    W = np.asarray(fvals, dtype=np.int64) % f.p
    if W.shape != (X.space.d, len(X.space.pairs)):
        raise PresentationError("functional has the wrong shape")
    flat = W.reshape(-1)
    for row in X.basis:
        if int(flat @ np.asarray(row)) % f.p:
            raise PresentationError("not X-invariant")
    return _functional_cocycle(W, G, f, "from-mu", {"eta": True})


def chi_bar(alpha: Cocycle, G: PcPresentation):
    """Values alpha(x_i, y_jk) * alpha(y_jk, x_i)^-1 on the tensor basis."""
    f = _require_family(G)
    d = _family_d(f)
    ts = TensorSpace(f.p, d)
    out = np.zeros((d, len(ts.pairs)), dtype=np.int64)
    for i in range(d):
        xi = G.gen_vec(G.u_indices[i])
        for k in range(len(ts.pairs)):
            y = G.gen_vec(G.v_indices[k])
            out[i, k] = (alpha.val(xi, y) - alpha.val(y, xi)) % f.p
    return out


def chi_bar_vanishes_on_X(alpha: Cocycle, G: PcPresentation) -> bool:
    f = _require_family(G)
    X = build_X(f)
    flat = chi_bar(alpha, G).reshape(-1)
    return all(int(flat @ np.asarray(row)) % f.p == 0 for row in X.basis)


def mu_from_functional(F, f: fam.FamilyId) -> MuParameters:
    """Read the free mu values off a tensor functional (w_matrix inverse)."""
    d = _family_d(f)
    ts = TensorSpace(f.p, d)
    table = {}
    for key in mu_keys(f):
        a, b, c = key
        table[key] = int(F[a - 1][ts.pair_pos[(b, c)]]) % f.p
    return MuParameters(f, table)


# ---------------------------------------------------------------------------
# cocycle identity check and coboundary solving
# ---------------------------------------------------------------------------

def cocycle_identity_check(alpha: Cocycle, G: PcPresentation, mode="sampled",
                           samples=10000, seed=0, budget=3 ** 6):
    """Verify alpha(x,y) + alpha(xy,z) == alpha(y,z) + alpha(x,yz) mod p^e.

    mode "exhaustive" runs all |G|^3 triples through the dense table;
    "sampled" draws seeded random triples and always includes every triple
    over the generators, their inverses and the identity.  Returns a
    verdict dict with a witness triple on failure.
    """
    mod = alpha.modulus
    checked = 0
    if mode == "exhaustive":
        els, index, mul = cayley_tables(G, budget)
        table = np.asarray(alpha.dense_table(budget), dtype=np.int64)
        N = len(els)
        for x in range(N):
            lhs = (table[x][:, None] + table[mul[x]]) % mod
            rhs = (table + table[x][mul]) % mod
            if not np.array_equal(lhs, rhs):
                y, z = map(int, np.argwhere(lhs != rhs)[0])
                return {"pass": False, "checked": checked,
                        "witness": (els[x], els[y], els[z])}
            checked += N * N
        return {"pass": True, "checked": checked, "witness": None}
    import random
    rng = random.Random(seed)
    specials = [G.identity] + [G.gen_vec(i) for i in range(G.n)] \
        + [G.inv(G.gen_vec(i)) for i in range(G.n)]
    for x, y, z in itertools.product(specials, repeat=3):
        if not _triple_ok(alpha, G, x, y, z, mod):
            return {"pass": False, "checked": checked, "witness": (x, y, z)}
        checked += 1
    for _ in range(samples):
        x = tuple(rng.randrange(G.orders[i]) for i in range(G.n))
        y = tuple(rng.randrange(G.orders[i]) for i in range(G.n))
        z = tuple(rng.randrange(G.orders[i]) for i in range(G.n))
        if not _triple_ok(alpha, G, x, y, z, mod):
            return {"pass": False, "checked": checked, "witness": (x, y, z)}
        checked += 1
    return {"pass": True, "checked": checked, "witness": None}


def _triple_ok(alpha, G, x, y, z, mod):
    lhs = (alpha.val(x, y) + alpha.val(G.mul(x, y), z)) % mod
    rhs = (alpha.val(y, z) + alpha.val(x, G.mul(y, z))) % mod
    return lhs == rhs


@dataclass
class CoboundaryVerdict:
    is_coboundary: bool
    f: np.ndarray | None       # values of f per element index when solvable
    certificate: dict | None   # inconsistency data otherwise


def coboundary_solve(beta: Cocycle, G: PcPresentation, budget=3 ** 6) -> CoboundaryVerdict:
    """Decide beta = delta f exactly, producing f or an inconsistency witness.

    The system f(x) + f(y) - f(xy) = beta(x, y) over Z/p^e is eliminated
    with unit pivots along first-letter splits, leaving f affine in the few
    generator values; the residual constraints go through the Howell
    solver, and every equation is re-verified against the returned f.
    """
    mod = beta.modulus
    els, index, mul = cayley_tables(G, budget)
    N = len(els)
    table = np.asarray(beta.dense_table(budget), dtype=np.int64) % mod
    ngen = G.n
    id_idx = index[G.identity]
    gens = [index[G.gen_vec(i)] for i in range(G.n)]
    C = np.zeros(N, dtype=np.int64)
    M = np.zeros((N, ngen), dtype=np.int64)
    C[id_idx] = table[id_idx, id_idx]
    for t, g in enumerate(gens):
        M[g, t] = 1
    for y in sorted(range(N), key=lambda i: sum(els[i])):
        if sum(els[y]) <= 1:
            continue
        g = next(k for k, v in enumerate(els[y]) if v)
        rest = list(els[y])
        rest[g] -= 1
        w = index[tuple(rest)]
        gi = gens[g]
        C[y] = (C[gi] + C[w] - table[gi, w]) % mod
        M[y] = (M[gi] + M[w]) % mod
    xs, ys = np.divmod(np.arange(N * N), N)
    consts = (C[xs] + C[ys] - C[mul[xs, ys]] - table[xs, ys]) % mod
    coefs = (M[xs] + M[ys] - M[mul[xs, ys]]) % mod
    stacked = np.concatenate([coefs, consts[:, None]], axis=1)
    uniq, first = np.unique(stacked, axis=0, return_index=True)
    nz = uniq.any(axis=1)
    uniq, first = uniq[nz], first[nz]
    if len(uniq) == 0:
        lam = np.zeros(ngen, dtype=np.int64)
    else:
        A = SparseModMatrix(len(uniq), ngen,
                            [(r, c, int(uniq[r, c])) for r in range(len(uniq))
                             for c in range(ngen) if uniq[r, c]], mod)
        status, out = howell_solve(A, (-uniq[:, ngen]) % mod)
        if status == "inconsistent":
            rows = [int(first[r]) for r in np.flatnonzero(out)]
            witness_pairs = [(els[r // N], els[r % N]) for r in rows[:4]]
            return CoboundaryVerdict(False, None, {
                "certificate": out,
                "constraint_rows": uniq,
                "witness_pairs": witness_pairs,
            })
        lam = out
    f = (C + M @ lam) % mod
    assert ((f[xs] + f[ys] - f[mul[xs, ys]] - table[xs, ys]) % mod == 0).all(), \
        "coboundary re-verification failed"
    return CoboundaryVerdict(True, f, None)


def classes_distinct(a1: Cocycle, a2: Cocycle, G: PcPresentation, budget=3 ** 6) -> bool:
    """True when the two cocycles are provably non-cohomologous."""
    return not coboundary_solve(a1.ratio(a2), G, budget=budget).is_coboundary


def table_cocycle(G: PcPresentation, table, modulus, budget=3 ** 6) -> Cocycle:
    """Wrap a dense value table (mutation tests use this)."""
    table = np.asarray(table, dtype=np.int64) % modulus
    els, index, _ = cayley_tables(G, budget)

    def value(a, b):
        return int(table[index[tuple(a)], index[tuple(b)]])

    return Cocycle(G, modulus, value, "from-table",
                   {"dense_fn": lambda els_, index_: table})


def transgression_cocycle(qm, chi, modulus=None) -> Cocycle:
    """Pullback cocycle chi(s(a) s(b) s(ab)^-1) along a central quotient.

    `qm` is a QuotientMap from the cover onto the base; `chi` maps the
    cover's killed coordinates (pivot indices) to exponents.  The canonical
    section has zero kernel coordinates, so the deviation is just the
    kernel part of s(a) s(b).
    """
    cover = qm.source
    base = qm.quotient
    modulus = modulus or cover.p
    chi = {int(k): int(v) % modulus for k, v in chi.items()}
    for k in chi:
        if k not in qm.pivot_rows:
            raise PresentationError("character coordinate %d is not in the kernel" % k)
    lift_cols = qm.surviving

    def value(a, b):
        la = [0] * cover.n
        lb = [0] * cover.n
        for pos, i in enumerate(lift_cols):
            la[i] = a[pos]
            lb[i] = b[pos]
        prod = cover.mul(tuple(la), tuple(lb))
        tot = 0
        for k, c in chi.items():
            if prod[k]:
                tot += c * prod[k]
        return tot % modulus

    return Cocycle(base, modulus, value, "from-pullback", {"chi": dict(chi)})


def match_class(alpha: Cocycle, G: PcPresentation, budget=3 ** 6) -> MuParameters:
    """Locate a pullback cocycle's class in the mu parametrization.

    Reads mu off chi_bar on the tensor basis (no search), then certifies
    with coboundary_solve on the ratio against the mu reference cocycle.
    """
    f = _require_family(G)
    if not chi_bar_vanishes_on_X(alpha, G):
        raise PresentationError("chi_bar of the given cocycle does not vanish on X")
    mu = mu_from_functional(chi_bar(alpha, G), f)
    reference = cocycle_from_mu(mu, G)
    if alpha.modulus != reference.modulus:
        raise PresentationError("cocycle modulus %d does not match mu cocycles"
                                % alpha.modulus)
    if not coboundary_solve(alpha.ratio(reference), G, budget=budget).is_coboundary:
        raise PresentationError("match_class certification failed: cocycle is not "
                                "cohomologous to its chi_bar class")
    return mu
