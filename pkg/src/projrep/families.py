"""Constructors for the group zoo, parametrized by (p, d, m).

Every builder returns a consistent PcPresentation whose generator order is
depth-1 generators first (in the order the representation ladder adjoins
them), then depth-2, then depth-3.  Commutator relations are entered in
the natural [lower, higher] = value form here and converted to the stored
[g_j, g_i] (j > i) orientation, i.e. [x_i, x_j] = y_ij becomes
[x_j, x_i] = y_ij^-1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pcgroup import Element, PcPresentation, PresentationError, SubgroupSpec, subgroup_presentation

ELEM_AB = "ELEM_AB"
HEIS = "HEIS"
ES_P = "ES_P"
ES_P2 = "ES_P2"
MAXRANK_EXP_P = "MAXRANK_EXP_P"
MAXRANK_GP_P = "MAXRANK_GP_P"
H_STAR = "H_STAR"
K_STAR = "K_STAR"
G_STAR = "G_STAR"
REPK_ELEM_AB = "REPK_ELEM_AB"
HAT_H = "HAT_H"
ES_TIMES_AB = "ES_TIMES_AB"

CLI_NAMES = {
    "elab": ELEM_AB,
    "heis": HEIS,
    "es-p": ES_P,
    "es-p2": ES_P2,
    "maxrank-exp-p": MAXRANK_EXP_P,
    "maxrank-gp": MAXRANK_GP_P,
    "hstar": H_STAR,
    "kstar": K_STAR,
    "gstar": G_STAR,
    "repk": REPK_ELEM_AB,
    "hath": HAT_H,
    "es-times-ab": ES_TIMES_AB,
}
TAG_TO_CLI = {v: k for k, v in CLI_NAMES.items()}


@dataclass(frozen=True)
class FamilyId:
    tag: str
    p: int
    d: int = 0
    m: int = 0

    def __post_init__(self):
        if self.p < 3 or self.p % 2 == 0 or not _is_prime(self.p):
            raise PresentationError("p must be an odd prime")
        tag = self.tag
        if tag in (ELEM_AB, REPK_ELEM_AB) and self.d < 1:
            raise PresentationError("%s needs d >= 1" % tag)
        if tag in (MAXRANK_EXP_P, MAXRANK_GP_P, K_STAR) and self.d < 3:
            raise PresentationError("%s needs d >= 3" % tag)
        if tag == H_STAR and self.d < 2:
            raise PresentationError("H_STAR needs d >= 2")
        if tag in (ES_P, ES_P2) and self.m < 1:
            raise PresentationError("%s needs m >= 1" % tag)
        if tag == G_STAR:
            if self.d < 3:
                raise PresentationError("G_STAR needs d >= 3")
            if self.m != 1:
                raise PresentationError("G_STAR is only presented for m = 1")
        if tag == ES_TIMES_AB:
            if self.m < 1:
                raise PresentationError("ES_TIMES_AB needs m >= 1")
            if self.d < 0:
                raise PresentationError("ES_TIMES_AB needs d >= 0 abelian factors")
        if tag == HEIS and self.d not in (0, 2):
            raise PresentationError("HEIS takes no d (it is the d = 2 case)")

    def describe(self):
        parts = [TAG_TO_CLI[self.tag], "p=%d" % self.p]
        if self.d:
            parts.append("d=%d" % self.d)
        if self.m:
            parts.append("m=%d" % self.m)
        return " ".join(parts)


def _is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _pair_name(i, j):
    return "y_%d%d" % (i, j)


def _triple_name(i, j, k):
    return "z_%d%d%d" % (i, j, k)


class _Builder:
    """Accumulates generators and natural-orientation relations."""

    def __init__(self, p):
        self.p = p
        self.gens = []
        self.index = {}
        self.powers = {}
        self.comms = {}
        self.orders = []

    def add(self, name, depth, order=None):
        if name in self.index:
            raise PresentationError("duplicate generator %s" % name)
        self.index[name] = len(self.gens)
        self.gens.append((name, depth))
        self.orders.append(order if order is not None else self.p)
        return self.index[name]

    def set_power(self, name, word_names):
        i = self.index[name]
        self.powers[i] = tuple((self.index[nm], e) for nm, e in word_names)

    def set_comm(self, a_name, b_name, word_names):
        """Record [a, b] = word; stored as [g_j, g_i] with j > i."""
        a, b = self.index[a_name], self.index[b_name]
        word = tuple((self.index[nm], e) for nm, e in word_names)
        if a > b:
            self.comms[(a, b)] = word
        else:
            self.comms[(b, a)] = tuple((i, -e) for i, e in word)

    def build(self):
        # exponents normalize mod relative order inside PcPresentation
        return PcPresentation(self.p, self.gens, powers=self.powers,
                              comms=self.comms, orders=self.orders)


def build(f: FamilyId) -> PcPresentation:
    P = _BUILDERS[f.tag](f)
    rep = P.consistency_check()
    if not rep["pass"]:
        raise PresentationError("family %s built inconsistent: %r"
                                % (f.describe(), rep["failures"][0]))
    P._family = f
    return P


def _build_elem_ab(f):
    b = _Builder(f.p)
    for i in range(1, f.d + 1):
        b.add("x_%d" % i, 1)
    return b.build()


def _build_heis(f):
    b = _Builder(f.p)
    b.add("x_1", 1)
    b.add("x_2", 1)
    b.add("y_12", 2)
    b.set_comm("x_1", "x_2", [("y_12", 1)])
    return b.build()


def _build_es_p(f, exponent_p2=False):
    b = _Builder(f.p)
    for i in range(1, 2 * f.m + 1):
        b.add("x_%d" % i, 1)
    b.add("z", 2)
    for i in range(1, f.m + 1):
        b.set_comm("x_%d" % (2 * i - 1), "x_%d" % (2 * i), [("z", 1)])
    if exponent_p2:
        b.set_power("x_1", [("z", 1)])
    return b.build()


def _build_maxrank(f, gp_p=False):
    b = _Builder(f.p)
    d = f.d
    for i in range(1, d + 1):
        b.add("x_%d" % i, 1)
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            b.add(_pair_name(i, j), 2)
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            b.set_comm("x_%d" % i, "x_%d" % j, [(_pair_name(i, j), 1)])
    if gp_p:
        b.set_power("x_1", [("y_12", 1)])
    return b.build()


def _hstar_z_names(d):
    """Independent depth-3 generators: z_mnr, z_nmr (m<n<r); z_mmn, z_nmn (m<n)."""
    names = []
    for m in range(1, d + 1):
        for n in range(m + 1, d + 1):
            names.append(_triple_name(m, m, n))
            names.append(_triple_name(n, m, n))
    for m in range(1, d + 1):
        for n in range(m + 1, d + 1):
            for r in range(n + 1, d + 1):
                names.append(_triple_name(m, n, r))
                names.append(_triple_name(n, m, r))
    return names


def _z_word(i, j, k, kstar=False):
    """[x_i, y_jk] written over the independent depth-3 generators.

    The dependent symbol z_rmn (first index largest) rewrites through
    z_rmn = z_nmr * z_mnr^-1; with the K-variant all z_*12 vanish and
    z_21k is identified with z_12k.
    """
    def atom(a, b, c, sign):
        if kstar and (b, c) == (1, 2):
            return []
        if kstar and (a, b) == (2, 1) and c >= 3:
            return [(_triple_name(1, 2, c), sign)]
        return [(_triple_name(a, b, c), sign)]

    if i < j:
        return atom(i, j, k, 1)
    if i == j or i == k:
        return atom(i, j, k, 1)
    if j < i < k:
        return atom(i, j, k, 1)
    # i > k > j: dependent shape
    m, n, r = j, k, i
    return atom(n, m, r, 1) + atom(m, n, r, -1)


def _build_hstar(f, kstar=False):
    b = _Builder(f.p)
    d = f.d
    for i in range(1, d + 1):
        b.add("x_%d" % i, 1)
    for j in range(1, d + 1):
        for k in range(j + 1, d + 1):
            b.add(_pair_name(j, k), 2)
    z_names = _hstar_z_names(d)
    if kstar:
        drop = {_triple_name(1, 1, 2), _triple_name(2, 1, 2)}
        drop |= {_triple_name(2, 1, k) for k in range(3, d + 1)}
        z_names = [nm for nm in z_names if nm not in drop]
    for nm in z_names:
        b.add(nm, 3)
    for j in range(1, d + 1):
        for k in range(j + 1, d + 1):
            b.set_comm("x_%d" % j, "x_%d" % k, [(_pair_name(j, k), 1)])
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            for k in range(j + 1, d + 1):
                w = _z_word(i, j, k, kstar=kstar)
                if w:
                    b.set_comm("x_%d" % i, _pair_name(j, k), w)
    return b.build()


def _build_gstar(f):
    b = _Builder(f.p)
    d = f.d
    for r in range(1, d - 1):
        b.add("y_%d" % r, 1)
    b.add("x_1", 1)
    b.add("x_2", 1)
    b.add("z", 2)
    for r in range(1, d - 1):
        for k in (1, 2):
            b.add("w_%d%d" % (r, k), 2)
    for i in range(1, d - 1):
        for j in range(i + 1, d - 1):
            b.add("z_%d%d" % (i, j), 2)
    b.add("z_1", 3)
    b.add("z_2", 3)
    b.set_comm("x_1", "x_2", [("z", 1)])
    for k in (1, 2):
        b.set_comm("z", "x_%d" % k, [("z_%d" % k, 1)])
    for r in range(1, d - 1):
        for k in (1, 2):
            b.set_comm("y_%d" % r, "x_%d" % k, [("w_%d%d" % (r, k), 1)])
    for i in range(1, d - 1):
        for j in range(i + 1, d - 1):
            b.set_comm("y_%d" % i, "y_%d" % j, [("z_%d%d" % (i, j), 1)])
    return b.build()


def _build_repk(f):
    b = _Builder(f.p)
    n = f.d
    for i in range(1, n + 1):
        b.add("y_%d" % i, 1)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            b.add("z_%d%d" % (i, j), 2)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            b.set_comm("y_%d" % i, "y_%d" % j, [("z_%d%d" % (i, j), 1)])
    return b.build()


def _build_es_times_ab(f):
    b = _Builder(f.p)
    m, t = f.m, f.d
    for i in range(1, 2 * m + 1):
        b.add("x_%d" % i, 1)
    for r in range(1, t + 1):
        b.add("a_%d" % r, 1)
    b.add("z", 2)
    for i in range(1, m + 1):
        b.set_comm("x_%d" % (2 * i - 1), "x_%d" % (2 * i), [("z", 1)])
    return b.build()


_BUILDERS = {
    ELEM_AB: _build_elem_ab,
    HEIS: _build_heis,
    ES_P: lambda f: _build_es_p(f, exponent_p2=False),
    ES_P2: lambda f: _build_es_p(f, exponent_p2=True),
    MAXRANK_EXP_P: lambda f: _build_maxrank(f, gp_p=False),
    MAXRANK_GP_P: lambda f: _build_maxrank(f, gp_p=True),
    H_STAR: lambda f: _build_hstar(f, kstar=False),
    K_STAR: lambda f: _build_hstar(f, kstar=True),
    G_STAR: _build_gstar,
    REPK_ELEM_AB: _build_repk,
    HAT_H: lambda f: _build_hstar(FamilyId(H_STAR, f.p, 2), kstar=False),
    ES_TIMES_AB: _build_es_times_ab,
}


def expected_order_log(f: FamilyId) -> int:
    """log_p of the closed-form group order."""
    d, m = f.d, f.m
    if f.tag == ELEM_AB:
        return d
    if f.tag == HEIS:
        return 3
    if f.tag in (ES_P, ES_P2):
        return 2 * m + 1
    if f.tag in (MAXRANK_EXP_P, MAXRANK_GP_P):
        return d * (d + 1) // 2
    if f.tag == H_STAR:
        return d * (d + 1) * (2 * d + 1) // 6
    if f.tag == K_STAR:
        return d * (d + 1) * (2 * d + 1) // 6 - d
    if f.tag == G_STAR:
        return d * (d + 1) // 2 + 2
    if f.tag == REPK_ELEM_AB:
        return d * (d + 1) // 2
    if f.tag == HAT_H:
        return 5
    if f.tag == ES_TIMES_AB:
        return 2 * m + 1 + d
    raise PresentationError("unknown family %r" % (f.tag,))


def ladder_series(f: FamilyId, P: PcPresentation | None = None):
    """Normal chain N_0 < N_1 < ... < G, every step of index p.

    N_0 is spanned by the depth->=2 generators (abelian in every family
    here) and each step adjoins the next depth-1 generator in presentation
    order, so the top step peels off the last depth-1 generator.
    """
    P = P if P is not None else build(f)
    base = [i for i in range(P.n) if P.depths[i] >= 2]
    series = [SubgroupSpec.from_mask(P, base)]
    acc = list(base)
    for u in P.u_indices:
        acc.append(u)
        series.append(SubgroupSpec.from_mask(P, acc))
    return series


def repgroup_quotient(f: FamilyId, P: PcPresentation | None = None):
    """(cover, QuotientMap) for a representation-group family.

    The quotient presentation is stamped with the base family when the
    surviving generators match a constructor exactly (H_STAR/HAT_H over the
    exponent-p groups), which lets the cohomology layer read its
    coordinates.
    """
    from .pcgroup import quotient_by_central
    P = P if P is not None else build(f)
    K = kernel_subgroup(f, P)
    qm = quotient_by_central(P, K)
    if f.tag == HAT_H or (f.tag == H_STAR and f.d == 2):
        qm.quotient._family = FamilyId(HEIS, f.p)
    elif f.tag == H_STAR:
        qm.quotient._family = FamilyId(MAXRANK_EXP_P, f.p, f.d)
    return P, qm


def kernel_subgroup(f: FamilyId, P: PcPresentation | None = None) -> SubgroupSpec:
    """The designated central kernel realizing the Schur multiplier."""
    P = P if P is not None else build(f)
    if f.tag in (H_STAR, HAT_H):
        idx = [i for i in range(P.n) if P.names[i].startswith("z_")]
    elif f.tag == K_STAR:
        idx = [P.index_of("y_12")] + [i for i in range(P.n) if P.names[i].startswith("z_")]
    elif f.tag == G_STAR:
        idx = [i for i in range(P.n)
               if P.names[i].startswith("w_") or P.names[i] in ("z_1", "z_2")
               or (P.names[i].startswith("z_") and len(P.names[i]) > 3)]
    else:
        raise PresentationError("no designated kernel for family %s" % f.tag)
    return SubgroupSpec.from_mask(P, idx)
