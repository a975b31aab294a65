"""Independent brute-force verifiers.

Nothing here shares code paths with the production implementations it
checks: `naive_rewrite` moves single letters by adjacent transpositions,
`howell_solve` is plain elimination over Z/p^e with certificate tracking,
and `brute_h2` sets up the raw cocycle-condition linear system and counts
|Z^2| / |B^2|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pcgroup import BudgetError, PcPresentation, derived_subgroup

_STEP_LIMIT = 2_000_000


class RewriteLimit(RuntimeError):
    pass


def naive_rewrite(word, P: PcPresentation, step_limit=_STEP_LIMIT):
    """Normal form by letter-level rewriting; independent of collection.

    The word becomes a list of single letters (generator, +-1).  Strategy:
    scan for the leftmost violation and fix it by one of three rules: an
    inverse letter expands through the power relation, a run of rel_order
    equal letters contracts to the power word, and an out-of-order adjacent
    pair (h, g) with h > g swaps to (g, h, [h,g]-letters).  Termination
    follows from the class-<=3 weight filtration; a step limit guards
    against nontermination bugs.
    """
    letters = []
    for idx, e in word:
        idx, e = int(idx), int(e)
        sign = 1 if e > 0 else -1
        letters.extend([(idx, sign)] * abs(e))
    steps = 0
    while True:
        steps += 1
        if steps > step_limit:
            raise RewriteLimit("rewriting step limit exceeded")
        action = _find_violation(letters, P)
        if action is None:
            break
        kind, pos = action
        if kind == "inverse":
            idx, _ = letters[pos]
            rel = P.orders[idx]
            repl = [(idx, 1)] * (rel - 1)
            for widx, we in reversed(P.powers.get(idx, ())):
                repl.extend([(widx, -1)] * we)
            letters[pos:pos + 1] = repl
        elif kind == "run":
            idx, _ = letters[pos]
            rel = P.orders[idx]
            repl = []
            for widx, we in P.powers.get(idx, ()):
                repl.extend([(widx, 1)] * we)
            letters[pos:pos + rel] = repl
        else:  # swap
            (h, _), (g, _) = letters[pos], letters[pos + 1]
            repl = [(g, 1), (h, 1)]
            for widx, we in P.comms.get((h, g), ()):
                repl.extend([(widx, 1)] * we)
            letters[pos:pos + 2] = repl
    vec = [0] * P.n
    for idx, s in letters:
        vec[idx] += s
    assert all(0 <= vec[i] < P.orders[i] for i in range(P.n)), "rewriting left a bad vector"
    return tuple(vec)


def _find_violation(letters, P):
    n = len(letters)
    for pos in range(n):
        idx, s = letters[pos]
        if s < 0:
            return ("inverse", pos)
        rel = P.orders[idx]
        run = 1
        while run < rel and pos + run < n and letters[pos + run] == (idx, 1):
            run += 1
        if run == rel:
            return ("run", pos)
        if pos + 1 < n:
            nxt, s2 = letters[pos + 1]
            if s2 > 0 and nxt < idx:
                return ("swap", pos)
    return None


# ---------------------------------------------------------------------------
# Howell-form linear algebra over Z/p^e
# ---------------------------------------------------------------------------

@dataclass
class SparseModMatrix:
    """COO-style matrix over Z/p^e; no duplicate positions, values nonzero."""
    nrows: int
    ncols: int
    entries: list  # (row, col, value)
    modulus: int

    def __post_init__(self):
        seen = set()
        cleaned = []
        for r, c, v in self.entries:
            v = int(v) % self.modulus
            if not (0 <= r < self.nrows and 0 <= c < self.ncols):
                raise ValueError("entry out of range")
            if (r, c) in seen:
                raise ValueError("duplicate entry at (%d, %d)" % (r, c))
            seen.add((r, c))
            if v:
                cleaned.append((int(r), int(c), v))
        self.entries = cleaned

    def dense(self):
        A = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for r, c, v in self.entries:
            A[r, c] = v
        return A


def _factor_pe(mod):
    f = 2
    while mod % f:
        f += 1
    e = 0
    m = mod
    while m > 1:
        if m % f:
            raise ValueError("modulus is not a prime power")
        m //= f
        e += 1
    return f, e


def _val_p(x, p, e):
    x = int(x)
    if x == 0:
        return e
    v = 0
    while x % p == 0 and v < e:
        x //= p
        v += 1
    return v


class HowellBasis:
    """Howell-form row basis over Z/p^e, built by incremental insertion.

    Rows are unit-normalized so the leading entry is exactly p^a, leading
    columns are distinct, and each insertion also inserts the annihilator
    multiple p^(e-a) * row, which keeps the span closed under reduction.
    Then membership testing by greedy reduction is complete and
    |span| = prod_i p^(e - a_i) over the basis rows.
    """

    def __init__(self, ncols, p, e, transform_len=0):
        self.ncols = ncols
        self.p = p
        self.e = e
        self.mod = p ** e
        self.rows: dict[int, np.ndarray] = {}
        self.lead_val: dict[int, int] = {}
        self.transform_len = transform_len
        self.trans: dict[int, np.ndarray] = {}

    def reduce(self, row, tr=None):
        """Greedily reduce a row against the basis; returns (row, tr)."""
        p, e, mod = self.p, self.e, self.mod
        row = np.asarray(row, dtype=np.int64) % mod
        while True:
            nz = np.flatnonzero(row)
            if len(nz) == 0:
                return row, tr
            c = int(nz[0])
            if c not in self.rows:
                return row, tr
            a = self.lead_val[c]
            if _val_p(row[c], p, e) < a:
                return row, tr
            coef = (int(row[c]) // (p ** a)) % mod
            row = (row - coef * self.rows[c]) % mod
            row[c] = 0
            if tr is not None:
                tr = (tr - coef * self.trans[c]) % mod

    def insert(self, row, tr=None):
        p, e, mod = self.p, self.e, self.mod
        if tr is None and self.transform_len:
            raise ValueError("transform tracking requires a tr row")
        stack = [(np.asarray(row, dtype=np.int64) % mod,
                  None if tr is None else np.asarray(tr, dtype=np.int64) % mod)]
        while stack:
            row, tr = stack.pop()
            row, tr = self.reduce(row, tr)
            nz = np.flatnonzero(row)
            if len(nz) == 0:
                continue
            c = int(nz[0])
            a = _val_p(row[c], p, e)
            unit = (int(row[c]) // (p ** a)) % mod
            inv_unit = pow(unit, -1, mod)
            row = (row * inv_unit) % mod
            if tr is not None:
                tr = (tr * inv_unit) % mod
            if c in self.rows:
                # incoming row has strictly smaller valuation: swap roles
                old, old_tr = self.rows.pop(c), self.trans.pop(c, None)
                self.lead_val.pop(c)
                stack.append((old, old_tr))
            self.rows[c] = row
            self.lead_val[c] = a
            if tr is not None:
                self.trans[c] = tr
            if a < e:
                ann = (row * (p ** (e - a))) % mod
                if ann.any():
                    ann_tr = (tr * (p ** (e - a))) % mod if tr is not None else None
                    stack.append((ann, ann_tr))

    def contains(self, row):
        res, _ = self.reduce(row)
        return not res.any()

    def span_log_p(self):
        return sum(self.e - a for a in self.lead_val.values())


def howell_solve(A: SparseModMatrix, b):
    """Solve A x = b over Z/p^e exactly.

    Returns ("solution", x) with A @ x == b re-verified, or
    ("inconsistent", y) with a certificate satisfying y @ A == 0 and
    y @ b != 0 (mod p^e).
    """
    mod = A.modulus
    p, e = _factor_pe(mod)
    dense = A.dense()
    b = np.asarray(b, dtype=np.int64) % mod
    if b.shape != (A.nrows,):
        raise ValueError("rhs length mismatch")
    # b is in the column space iff it reduces to zero against the columns
    col_basis = HowellBasis(A.nrows, p, e, transform_len=A.ncols)
    for j in range(A.ncols):
        tr = np.zeros(A.ncols, dtype=np.int64)
        tr[j] = 1
        col_basis.insert(dense[:, j].copy(), tr)
    residual, tr_b = col_basis.reduce(b.copy(), np.zeros(A.ncols, dtype=np.int64))
    if not residual.any():
        x = (-tr_b) % mod
        assert ((dense @ x - b) % mod == 0).all()
        return ("solution", x)
    # certificate: a left-kernel combination separating b from the columns
    row_basis = HowellBasis(A.ncols + 1, p, e, transform_len=A.nrows)
    for r in range(A.nrows):
        row = np.zeros(A.ncols + 1, dtype=np.int64)
        row[:A.ncols] = dense[r]
        row[A.ncols] = b[r]
        tr = np.zeros(A.nrows, dtype=np.int64)
        tr[r] = 1
        row_basis.insert(row, tr)
    for c in sorted(row_basis.rows):
        if c == A.ncols:
            y = row_basis.trans[c]
            assert (y @ dense % mod == 0).all() and int(y @ b % mod) != 0
            return ("inconsistent", y)
    raise AssertionError("b not in column space but no certificate row found")


# ---------------------------------------------------------------------------
# brute-force second cohomology
# ---------------------------------------------------------------------------

def _element_table(P: PcPresentation, budget):
    els = list(P.enumerate_elements(budget))
    index = {x: i for i, x in enumerate(els)}
    N = len(els)
    mul = np.zeros((N, N), dtype=np.int32)
    for i, x in enumerate(els):
        for j, y in enumerate(els):
            mul[i, j] = index[P.mul(x, y)]
    return els, index, mul


def brute_h2(P: PcPresentation, e=2, budget=81, batch=16384):
    """|H^2(G, mu_{p^e})| and derived |H^2(G, C*)| by raw linear algebra.

    Unknowns: all alpha(x, y) as root-of-unity exponents mod p^e.  The
    |G|^3 equations alpha(x,y) + alpha(xy,z) - alpha(y,z) - alpha(x,yz) = 0
    are eliminated with a deterministic unit-pivots-first order: equations
    (x, g, w) with g the first letter of g.w define alpha(x, g.w), and the
    tabulated expansions reduce every remaining equation to the terminal
    unknowns alpha(x, 1), alpha(x, g), which a Howell basis finishes.
    |B^2| is the span of the coboundary rows f(x)+f(y)-f(xy).

    |H^2(G, C*)| = |H^2(G, mu_{p^e})| / |Hom(G, C*)| is valid once p^e
    bounds the exponents of H^1 and H^2; run at two values of e and compare
    (the e-stability check) to certify that empirically.
    """
    order = P.group_order()
    if order > budget:
        raise BudgetError("brute_h2 budget: |G| = %d > %d" % (order, budget))
    if order > 81:
        raise BudgetError("brute_h2 dense tabulation is sized for |G| <= 81")
    p = P.p
    mod = p ** e
    els, index, mul = _element_table(P, budget)
    N = len(els)
    id_idx = index[P.identity]
    gens = [index[P.gen_vec(i)] for i in range(P.n)]
    lengths = [sum(x) for x in els]

    terminals = {}
    for x in range(N):
        terminals[(x, id_idx)] = len(terminals)
    for g in gens:
        for x in range(N):
            terminals[(x, g)] = len(terminals)
    T = len(terminals)

    expn = np.zeros((N * N, T), dtype=np.int32)
    for (x, y), t in terminals.items():
        expn[x * N + y, t] = 1
    n_def = 0
    for y in sorted(range(N), key=lambda i: lengths[i]):
        if lengths[y] <= 1:
            continue
        n_def += 1
        g = next(k for k, v in enumerate(els[y]) if v)
        rest = list(els[y])
        rest[g] -= 1
        w = index[tuple(rest)]
        gi = gens[g]
        assert mul[gi, w] == y
        xs = np.arange(N)
        xg = mul[xs, gi]
        expn[xs * N + y] = (expn[xs * N + gi] + expn[xg * N + w] - expn[gi * N + w]) % mod

    # The coboundary identity delta(delta(alpha)) = 0 holds coefficientwise
    # as a row identity of this system, so D(x,y,z.g) is an integer
    # combination of D(y,z,g), D(xy,z,g), D(x,yz,g), D(x,y,z).  By induction
    # on the length of the third argument, the rows with third argument in
    # {1} union generators already span the whole equation system.
    basis = HowellBasis(T, p, e)
    seen_rows = set()
    z_slice = np.array([id_idx] + gens, dtype=np.int64)
    pair_idx = np.arange(N * N, dtype=np.int64)
    xs_all = pair_idx // N
    ys_all = pair_idx % N
    for start in range(0, N * N, batch):
        xs = xs_all[start:start + batch]
        ys = ys_all[start:start + batch]
        xy = mul[xs, ys].astype(np.int64)
        for z in z_slice:
            yz = mul[ys, z].astype(np.int64)
            rows = (expn[xs * N + ys] + expn[xy * N + z]
                    - expn[ys * N + z] - expn[xs * N + yz]) % mod
            rows = rows[rows.any(axis=1)]
            if len(rows) == 0:
                continue
            rows = np.unique(rows.astype(np.int8), axis=0)
            for row in rows:
                key = row.tobytes()
                if key not in seen_rows:
                    seen_rows.add(key)
                    basis.insert(row.astype(np.int64))
    z2_log = e * N * N - (e * n_def * N + basis.span_log_p())

    # same reduction for the coboundary rows f(x)+f(y)-f(xy)
    b_basis = HowellBasis(N, p, e)
    b_seen = set()
    for x in range(N):
        for y in [id_idx] + gens:
            row = np.zeros(N, dtype=np.int64)
            row[x] += 1
            row[y] += 1
            row[mul[x, y]] -= 1
            row %= mod
            key = row.tobytes()
            if row.any() and key not in b_seen:
                b_seen.add(key)
                b_basis.insert(row)
    b2_log = b_basis.span_log_p()
    h2_log = z2_log - b2_log
    hom_log = _hom_to_roots_log(P)
    return {
        "group_order": order,
        "e": e,
        "z2_log": int(z2_log),
        "b2_log": int(b2_log),
        "h2_log": int(h2_log),
        "hom_log": int(hom_log),
        "corrected_h2_log": int(h2_log - hom_log),
    }


def _hom_to_roots_log(P):
    """log_p |Hom(G, C*)| = log_p |G/G'| (abelianization of a p-group)."""
    der = derived_subgroup(P)
    ab = P.group_order() // der.order()
    log = 0
    while ab > 1:
        ab //= P.p
        log += 1
    return log
