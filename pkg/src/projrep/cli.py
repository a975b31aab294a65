"""Command-line front end: construction, enumeration and verification.

Exit codes: 0 success, 2 validation error, 3 budget error, 4 verification
failure.  Identical invocations produce byte-identical output for a fixed
seed; every emitted file is UTF-8 and newline-terminated.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

import numpy as np

from . import cohomology as coh
from . import families as fam
from . import oracle
from . import reps as reps_mod
from .pcgroup import (BudgetError, Element, PcPresentation, PresentationError,
                      SubgroupSpec, center_subgroup, check_homomorphism,
                      conjugacy_classes, quotient_by_central)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4


def default_budget():
    return 3 ** int(os.environ.get("PROJREP_BUDGET_LOG3", "8"))


# ---------------------------------------------------------------------------
# family plumbing
# ---------------------------------------------------------------------------

def family_from_args(args) -> fam.FamilyId:
    if args.family not in fam.CLI_NAMES:
        raise PresentationError("unknown family %r (expected one of %s)"
                                % (args.family, ", ".join(sorted(fam.CLI_NAMES))))
    tag = fam.CLI_NAMES[args.family]
    return fam.FamilyId(tag, args.p, d=args.d or 0, m=args.m or 0)


def _emit(args, text):
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=False)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_group(args):
    f = family_from_args(args)
    P = fam.build(f)
    if args.action == "json":
        _emit(args, _json(P.to_json_dict()))
        return EXIT_OK
    order = P.group_order()
    info = {
        "family": args.family,
        "p": f.p,
        "d": f.d,
        "m": f.m,
        "order": order,
        "order_log_p": _log(order, f.p),
        "generators": {"x": len(P.u_indices), "y": len(P.v_indices),
                       "z": len(P.w_indices)},
        "consistent": True,
    }
    _emit(args, _json(info))
    return EXIT_OK


def _log(n, p):
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


def cmd_h2(args):
    f = family_from_args(args)
    out = {"family": args.family, "p": f.p, "d": f.d,
           "h2_log_p": _log(coh.h2_order(f), f.p)}
    if f.tag in (fam.MAXRANK_EXP_P, fam.MAXRANK_GP_P, fam.HEIS):
        X = coh.build_X(f)
        out["rank_X"] = X.rank
        out["tensor_dim"] = X.space.dim
    _emit(args, _json(out))
    return EXIT_OK


def cmd_cocycle(args):
    f = family_from_args(args)
    G = fam.build(f)
    if args.mu:
        with open(args.mu, "r", encoding="utf-8") as fh:
            mu = coh.MuParameters.from_json_dict(json.load(fh))
        if (mu.family.tag, mu.family.p) != (f.tag, f.p):
            raise PresentationError("mu file family does not match the flags")
    else:
        mu = coh.MuParameters(f, {})
    alpha = coh.cocycle_from_mu(mu, G)
    verdict = coh.cocycle_identity_check(alpha, G, mode="sampled",
                                         samples=args.samples, seed=args.seed or 0)
    chi = coh.chi_bar(alpha, G)
    ts = coh.TensorSpace(f.p, chi.shape[0])
    out = {
        "family": args.family,
        "p": f.p,
        "d": f.d,
        "mu": mu.to_json_dict()["mu"],
        "identity_check": {"pass": bool(verdict["pass"]),
                           "checked": int(verdict["checked"])},
        "chi_bar": {"%d,%d%d" % (i + 1, pr[0], pr[1]): int(chi[i][k])
                    for i in range(chi.shape[0])
                    for k, pr in enumerate(ts.pairs)},
    }
    _emit(args, _json(out))
    return EXIT_OK if verdict["pass"] else EXIT_VERIFY


def _center_mask(P, budget):
    spec, _order = center_subgroup(P, budget=budget)
    if spec is None:
        return None
    idx = []
    for g in spec.gens:
        support = [i for i, e in enumerate(g.vec) if e]
        if len(support) == 1 and g.vec[support[0]] == 1:
            idx.append(support[0])
        else:
            return None
    return sorted(idx)


def cmd_irr(args):
    f = family_from_args(args)
    P = fam.build(f)
    budget = args.budget or default_budget()
    result = reps_mod.irr_ladder(P, budget=budget)
    if args.format == "tsv":
        profile = {}
        for rep in result.reps:
            profile[rep.degree] = profile.get(rep.degree, 0) + 1
        lines = ["degree\tmultiplicity"]
        lines += ["%d\t%d" % (dm) for dm in sorted(profile.items())]
        _emit(args, "\n".join(lines))
        return EXIT_OK
    center_idx = _center_mask(P, budget=min(budget, 3 ** 7))
    irreducibles = []
    for rep in sorted(result.reps,
                      key=lambda r: (r.degree, r.gen_traces_key(P.p ** 4))):
        entry = {"degree": rep.degree, "root_modulus": rep.modulus}
        if center_idx is not None:
            entry["central_character"] = {
                P.names[i]: reps_mod.kernel_character(rep, [i])[i]
                for i in center_idx}
        origin = rep.origin
        if origin.get("kind") == "induced" and origin.get("subgroup") is not None:
            entry["inducing_subgroup_gens"] = [P.names[i] for i in origin["subgroup"]]
        if args.matrices:
            entry["matrices"] = [
                {"generator": P.names[i],
                 "perm": list(rep.mats[i].perm),
                 "exps": list(rep.mats[i].exps)}
                for i in rep.mask]
        irreducibles.append(entry)
    out = {
        "group": f.describe(),
        "order": P.group_order(),
        "count": len(result.reps),
        "sum_degree_squares": sum(r.degree ** 2 for r in result.reps),
        "ladder_steps": [{"subgroup_order": o, "irreducibles": c}
                         for o, c in result.steps],
        "irreducibles": irreducibles,
    }
    _emit(args, _json(out))
    return EXIT_OK


def cmd_proj(args):
    f = family_from_args(args)
    if f.tag not in (fam.HAT_H, fam.H_STAR, fam.K_STAR, fam.G_STAR):
        raise PresentationError("proj needs a representation-group family "
                                "(hath, hstar, kstar, gstar)")
    budget = args.budget or default_budget()
    cover, qm = fam.repgroup_quotient(f)
    base = qm.quotient
    kernel = sorted(qm.pivot_rows)
    entries = []
    ok = True
    mode = "exhaustive" if base.group_order() <= 3 ** 6 else "sampled"
    if cover.group_order() <= budget:
        result = reps_mod.irr_ladder(cover, budget=budget)
        groups = {}
        for rep in result.reps:
            chi = tuple(sorted(reps_mod.kernel_character(rep, kernel).items()))
            groups.setdefault(chi, []).append(rep)
        for chi, rep_list in sorted(groups.items()):
            proj = reps_mod.proj_from_repgroup(rep_list[0], qm)
            verdict = reps_mod.verify_projective_rep(proj, mode=mode,
                                                     seed=args.seed or 0)
            ok = ok and verdict["pass"]
            entries.append({
                "chi": {cover.names[i]: int(v) for i, v in chi},
                "count": len(rep_list),
                "sum_deg_sq": sum(r.degree ** 2 for r in rep_list),
                "verified": bool(verdict["pass"]),
                "mode": mode,
            })
    else:
        # single-branch construction when the cover is beyond the budget
        coord = kernel[0]
        rep = reps_mod.irr_over_character(cover, {coord: 1})
        proj = reps_mod.proj_from_repgroup(rep, qm)
        verdict = reps_mod.verify_projective_rep(proj, mode=mode,
                                                 seed=args.seed or 0)
        ok = ok and verdict["pass"]
        entries.append({
            "chi": {cover.names[coord]: 1},
            "degree": rep.degree,
            "verified": bool(verdict["pass"]),
            "mode": mode,
        })
    out = {
        "family": args.family,
        "p": f.p,
        "d": f.d,
        "base_order": base.group_order(),
        "kernel_order": fam.kernel_subgroup(f).order(),
        "characters": entries,
    }
    _emit(args, _json(out))
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# verification suites (one per acceptance criterion)
# ---------------------------------------------------------------------------

def suite_orders(seed=0, budget=None, inject=None):
    lines = []
    ok = True
    cases = [
        (fam.FamilyId(fam.H_STAR, 3, 2), 5),
        (fam.FamilyId(fam.H_STAR, 3, 3), 14),
        (fam.FamilyId(fam.H_STAR, 3, 4), 30),
        (fam.FamilyId(fam.K_STAR, 3, 3), 11),
        (fam.FamilyId(fam.G_STAR, 3, 3, m=1), 8),
    ] + [(fam.FamilyId(fam.REPK_ELEM_AB, 3, n), n * (n + 1) // 2)
         for n in (1, 2, 3, 4)]
    for f, log in cases:
        P = fam.build(f)  # consistency is checked inside build
        got = P.group_order()
        good = got == 3 ** log
        ok = ok and good
        lines.append("order %-22s = 3^%-3d %s"
                     % (f.describe(), log, "ok" if good else "FAIL (%d)" % got))
    return ok, lines


def suite_xrank(seed=0, budget=None, inject=None):
    lines = []
    ok = True
    for d, want in ((3, 1), (4, 4), (5, 10)):
        got = coh.build_X(fam.FamilyId(fam.MAXRANK_EXP_P, 3, d)).rank
        ok = ok and got == want
        lines.append("rank X exp-p  d=%d: %d %s" % (d, got,
                                                    "ok" if got == want else "FAIL"))
    for d, want in ((3, 4), (4, 8), (5, 15)):
        got = coh.build_X(fam.FamilyId(fam.MAXRANK_GP_P, 3, d)).rank
        ok = ok and got == want
        lines.append("rank X gp-p   d=%d: %d %s" % (d, got,
                                                    "ok" if got == want else "FAIL"))
    return ok, lines


def suite_h2(seed=0, budget=None, inject=None):
    lines = []
    ok = True
    for tag in (fam.MAXRANK_EXP_P, fam.MAXRANK_GP_P):
        for p in (3, 5):
            for d in (3, 4, 5):
                f = fam.FamilyId(tag, p, d)
                good = coh.h2_rank_identity(f)
                ok = ok and good
                lines.append("h2 rank identity %-28s %s"
                             % (f.describe(), "ok" if good else "FAIL"))
    for f, want_log in ((fam.FamilyId(fam.ELEM_AB, 3, 2), 1),
                        (fam.FamilyId(fam.ELEM_AB, 3, 3), 3),
                        (fam.FamilyId(fam.HEIS, 3), 2)):
        report = oracle.brute_h2(fam.build(f), e=2, budget=81)
        good = report["corrected_h2_log"] == want_log
        ok = ok and good
        lines.append("brute_h2 %-22s |H^2| = 3^%d %s"
                     % (f.describe(), report["corrected_h2_log"],
                        "ok" if good else "FAIL (want 3^%d)" % want_log))
    f81 = fam.FamilyId(fam.ES_TIMES_AB, 3, d=1, m=1)
    G81 = fam.build(f81)
    r2 = oracle.brute_h2(G81, e=2, budget=81)
    r3 = oracle.brute_h2(G81, e=3, budget=81)
    stable = r2["corrected_h2_log"] == r3["corrected_h2_log"]
    closed = 3 ** r2["corrected_h2_log"] == coh.h2_order(f81)
    ok = ok and stable and closed
    lines.append("brute_h2 es-p(27) x Z/3: e=2 -> 3^%d, e=3 -> 3^%d, e-stable %s, "
                 "closed form %s"
                 % (r2["corrected_h2_log"], r3["corrected_h2_log"],
                    "ok" if stable else "FAIL", "ok" if closed else "FAIL"))
    return ok, lines


def suite_mu(seed=7, budget=None, inject=None, samples=100000, pairs=20):
    lines = []
    ok = True
    for tag, counts in ((fam.MAXRANK_EXP_P, {3: 8, 4: 20, 5: 40}),
                        (fam.MAXRANK_GP_P, {3: 5, 4: 16, 5: 35})):
        for d, want in counts.items():
            got = len(coh.mu_keys(fam.FamilyId(tag, 3, d)))
            ok = ok and got == want
            lines.append("mu free parameters %-14s d=%d: %d %s"
                         % (tag, d, got, "ok" if got == want else "FAIL"))
    for tag in (fam.MAXRANK_EXP_P, fam.MAXRANK_GP_P):
        f = fam.FamilyId(tag, 3, 3)
        G = fam.build(f)
        for mu in coh.MuParameters.basis(f):
            alpha = coh.cocycle_from_mu(mu, G)
            if inject == "cocycle":
                table = np.array(alpha.dense_table(), dtype=np.int64)
                table[5, 7] = (table[5, 7] + 1) % 3
                alpha = coh.table_cocycle(G, table, 3)
            verdict = coh.cocycle_identity_check(alpha, G, mode="sampled",
                                                 samples=samples, seed=seed)
            good = verdict["pass"]
            ok = ok and good
            lines.append("identity check %-14s %-28r %s"
                         % (tag, mu, "ok" if good else
                            "FAIL witness=%r" % (verdict["witness"],)))
            if inject == "cocycle":
                return ok, lines  # one corrupted table is enough to flag
    f = fam.FamilyId(fam.MAXRANK_EXP_P, 3, 3)
    G = fam.build(f)
    rng = random.Random(seed)
    keys = coh.mu_keys(f)
    done = 0
    while done < pairs:
        t1 = {k: rng.randrange(3) for k in keys}
        t2 = {k: rng.randrange(3) for k in keys}
        if t1 == t2:
            continue
        a1 = coh.cocycle_from_mu(coh.MuParameters(f, t1), G)
        a2 = coh.cocycle_from_mu(coh.MuParameters(f, t2), G)
        distinct = coh.classes_distinct(a1, a2, G)
        ok = ok and distinct
        done += 1
        if not distinct:
            lines.append("pair %d NOT distinct FAIL: %r vs %r" % (done, t1, t2))
    lines.append("distinct mu pairs certified non-cohomologous: %d/%d %s"
                 % (done, pairs, "ok" if ok else "FAIL"))
    return ok, lines


def suite_eta(seed=11, budget=None, inject=None, invariants=50):
    lines = []
    ok = True
    rng = random.Random(seed)
    for d in (3, 4):
        f = fam.FamilyId(fam.MAXRANK_EXP_P, 3, d)
        G = fam.build(f)
        basis_ok = True
        for mu in coh.MuParameters.basis(f):
            W = mu.w_matrix()
            alpha = coh.eta(W, G)
            basis_ok = basis_ok and np.array_equal(coh.chi_bar(alpha, G) % 3, W % 3)
        ok = ok and basis_ok
        lines.append("chi_bar . eta = id on all %d basis functionals (d=%d) %s"
                     % (len(coh.mu_keys(f)), d, "ok" if basis_ok else "FAIL"))
        rand_ok = True
        for _ in range(invariants):
            table = {k: rng.randrange(3) for k in coh.mu_keys(f)}
            W = coh.MuParameters(f, table).w_matrix()
            alpha = coh.eta(W, G)
            rand_ok = rand_ok and np.array_equal(coh.chi_bar(alpha, G) % 3, W % 3)
        ok = ok and rand_ok
        lines.append("chi_bar . eta = id on %d seeded X-invariant functionals "
                     "(d=%d) %s" % (invariants, d, "ok" if rand_ok else "FAIL"))
    return ok, lines


def suite_repgroup(seed=0, budget=None, inject=None):
    lines = []
    ok = True
    f = fam.FamilyId(fam.H_STAR, 3, 3)
    P = fam.build(f)
    G = fam.build(fam.FamilyId(fam.MAXRANK_EXP_P, 3, 3))
    images = [Element.identity(G) if P.names[i].startswith("z_")
              else Element.generator(G, P.names[i]) for i in range(P.n)]
    rep = check_homomorphism(P, images, G)
    kernel = fam.kernel_subgroup(f, P)
    good = (rep.is_homomorphism and rep.surjective and rep.kernel_order == 3 ** 8
            and rep.kernel_order == coh.h2_order(fam.FamilyId(fam.MAXRANK_EXP_P, 3, 3))
            and kernel.is_central() and kernel.is_contained_in_derived()
            and kernel.order() == 3 ** 8)
    ok = ok and good
    lines.append("H_3* -> G(exp p): kernel 3^8 = |H^2|, central, in derived %s"
                 % ("ok" if good else "FAIL"))
    fk = fam.FamilyId(fam.K_STAR, 3, 3)
    K = fam.build(fk)
    GP = fam.build(fam.FamilyId(fam.MAXRANK_GP_P, 3, 3))
    qm = quotient_by_central(GP, SubgroupSpec.from_mask(GP, [GP.index_of("y_12")]))
    Q = qm.quotient
    images = [Element.identity(Q) if (K.names[i].startswith("z_")
                                      or K.names[i] == "y_12")
              else Element.generator(Q, K.names[i]) for i in range(K.n)]
    rep = check_homomorphism(K, images, Q)
    kernel = fam.kernel_subgroup(fk, K)
    want = coh.h2_order(fam.FamilyId(coh.GP_QUOTIENT, 3, 3))
    good = (rep.is_homomorphism and rep.surjective and rep.kernel_order == 3 ** 6
            and rep.kernel_order == want and kernel.order() == 3 ** 6
            and kernel.is_central() and kernel.is_contained_in_derived())
    ok = ok and good
    lines.append("K_3* -> G/G^p: kernel L of order 3^6 = |H^2(G/G^p)| %s"
                 % ("ok" if good else "FAIL"))
    fg = fam.FamilyId(fam.G_STAR, 3, 3, m=1)
    GS = fam.build(fg)
    T = fam.build(fam.FamilyId(fam.ES_TIMES_AB, 3, d=1, m=1))
    images = []
    for nm in GS.names:
        if nm.startswith("w_") or nm in ("z_1", "z_2"):
            images.append(Element.identity(T))
        elif nm.startswith("y_"):
            images.append(Element.generator(T, "a_" + nm[2:]))
        else:
            images.append(Element.generator(T, nm))
    rep = check_homomorphism(GS, images, T)
    kernel = fam.kernel_subgroup(fg, GS)
    want = coh.h2_order(fam.FamilyId(fam.ES_TIMES_AB, 3, d=1, m=1))
    good = (rep.is_homomorphism and rep.surjective and rep.kernel_order == 3 ** 4
            and rep.kernel_order == want and kernel.order() == 3 ** 4
            and kernel.is_central() and kernel.is_contained_in_derived())
    ok = ok and good
    lines.append("G*(d=3) -> ES_p(27) x Z/3: kernel 3^4 = |H^2| %s"
                 % ("ok" if good else "FAIL"))
    return ok, lines


def suite_irr(seed=0, budget=None, inject=None):
    budget = budget or default_budget()
    lines = []
    ok = True
    for d in (1, 2, 3):
        E = fam.build(fam.FamilyId(fam.ELEM_AB, 3, d))
        res = reps_mod.irr_ladder(E, budget=budget)
        good = len(res.reps) == 3 ** d and all(r.degree == 1 for r in res.reps)
        ok = ok and good
        lines.append("(Z/3)^%d: %d linear irreducibles %s"
                     % (d, len(res.reps), "ok" if good else "FAIL"))
    H = fam.build(fam.FamilyId(fam.HEIS, 3))
    res = reps_mod.irr_ladder(H, budget=budget)
    degs = sorted(r.degree for r in res.reps)
    classes = conjugacy_classes(H, budget=3 ** 3)
    good = degs == [1] * 9 + [3] * 2 and len(classes) == 11
    ok = ok and good
    lines.append("H_3(Z/3Z): degrees {1 x 9, 3 x 2}, class count 11 %s"
                 % ("ok" if good else "FAIL"))
    cover, qm = fam.repgroup_quotient(fam.FamilyId(fam.HAT_H, 3))
    kernel = sorted(qm.pivot_rows)
    res = reps_mod.irr_ladder(cover, budget=budget)
    total = sum(r.degree ** 2 for r in res.reps)
    per_chi = {}
    for rep in res.reps:
        chi = tuple(sorted(reps_mod.kernel_character(rep, kernel).items()))
        per_chi[chi] = per_chi.get(chi, 0) + rep.degree ** 2
    good = (total == 3 ** 5 and len(per_chi) == 9
            and all(v == 27 for v in per_chi.values()))
    ok = ok and good
    lines.append("HatH(3,1): sum deg^2 = 3^5, and 27 per each of 9 central "
                 "characters %s" % ("ok" if good else "FAIL"))
    GS = fam.build(fam.FamilyId(fam.G_STAR, 3, 3, m=1))
    if GS.group_order() > budget:
        lines.append("G*: skipped (budget %d < order %d)" % (budget, GS.group_order()))
        return ok, lines
    res = reps_mod.irr_ladder(GS, budget=budget)
    relation_ok = all(not reps_mod.check_relations(r) for r in res.reps)
    if inject == "matrix":
        victim = res.reps[-1]
        mats = dict(victim.mats)
        bad_idx = victim.mask[-1]
        m = mats[bad_idx]
        exps = list(m.exps)
        exps[0] = (exps[0] + 1) % m.modulus
        mats[bad_idx] = reps_mod.MonomialMatrix(m.p, m.modulus, m.perm, exps)
        mutated = reps_mod.MonomialRep(GS, victim.mask, mats, victim.modulus)
        relation_ok = relation_ok and not reps_mod.check_relations(mutated)
    total = sum(r.degree ** 2 for r in res.reps)
    classes = conjugacy_classes(GS, budget=max(budget, 3 ** 8))
    good = total == 3 ** 8 and len(classes) == len(res.reps) and relation_ok
    ok = ok and good
    lines.append("G*(3,d=3,m=1): sum deg^2 = 3^8, count %d = class count %d, "
                 "relations exact %s"
                 % (len(res.reps), len(classes), "ok" if good else "FAIL"))
    return ok, lines


def suite_proj(seed=0, budget=None, inject=None):
    budget = budget or default_budget()
    lines = []
    ok = True
    cover, qm = fam.repgroup_quotient(fam.FamilyId(fam.HAT_H, 3))
    base = qm.quotient
    kernel = sorted(qm.pivot_rows)
    groups = {}
    for rep in reps_mod.irr_ladder(cover, budget=budget).reps:
        chi = tuple(sorted(reps_mod.kernel_character(rep, kernel).items()))
        groups.setdefault(chi, []).append(rep)
    hath_ok = len(groups) == 9
    count = 0
    for chi, rep_list in sorted(groups.items()):
        for rep in rep_list:
            proj = reps_mod.proj_from_repgroup(rep, qm)
            verdict = reps_mod.verify_projective_rep(proj, mode="exhaustive")
            hath_ok = hath_ok and verdict["pass"]
            count += 1
    ok = ok and hath_ok
    lines.append("HatH pullbacks: %d representations over 9 characters verified "
                 "exhaustively %s" % (count, "ok" if hath_ok else "FAIL"))
    coverg, qmg = fam.repgroup_quotient(fam.FamilyId(fam.G_STAR, 3, 3, m=1))
    kernelg = sorted(qmg.pivot_rows)
    groupsg = {}
    for rep in reps_mod.irr_ladder(coverg, budget=max(budget, 3 ** 8)).reps:
        chi = tuple(sorted(reps_mod.kernel_character(rep, kernelg).items()))
        groupsg.setdefault(chi, []).append(rep)
    g_ok = (len(groupsg) == 81
            and all(sum(r.degree ** 2 for r in v) == 81 for v in groupsg.values()))
    nver = 0
    for chi, rep_list in sorted(groupsg.items()):
        proj = reps_mod.proj_from_repgroup(rep_list[0], qmg)
        verdict = reps_mod.verify_projective_rep(proj, mode="exhaustive")
        g_ok = g_ok and verdict["pass"]
        nver += 1
    ok = ok and g_ok
    lines.append("G* pullbacks: 81 characters, per-character sum deg^2 = 81, "
                 "%d verified exhaustively %s" % (nver, "ok" if g_ok else "FAIL"))
    mus = set()
    match_ok = True
    for chi, rep_list in sorted(groups.items()):
        chi_p = {k: v // (rep_list[0].modulus // 3) for k, v in chi}
        alpha = coh.transgression_cocycle(qm, chi_p, modulus=3)
        mu = coh.match_class(alpha, base)
        mus.add(tuple(sorted(mu.table.items())))
    match_ok = match_ok and len(mus) == 9
    ok = ok and match_ok
    lines.append("match_class: 9 central characters onto 9 distinct mu classes %s"
                 % ("ok" if match_ok else "FAIL"))
    return ok, lines


def suite_oracle(seed=123, budget=None, inject=None, words=10000):
    lines = []
    ok = True
    if inject == "relation":
        f = fam.FamilyId(fam.H_STAR, 3, 3)
        P = fam.build(f)
        d = P.to_json_dict()
        z213 = P.index_of("z_213")
        d["commutators"]["[y_23,x_1]"] = [[z213, 2]]
        Q = PcPresentation.from_json_dict(d)
        rep = Q.consistency_check()
        good = not rep["pass"]
        witness = rep["failures"][0][:4] if rep["failures"] else None
        lines.append("corrupted relation [x_1,y_23]=z_213 in H_3*: consistency %s "
                     "(witness %r)" % ("broken as expected" if good else "FAIL",
                                       witness))
        return good, lines
    if inject == "cocycle":
        return suite_mu(seed=seed, inject="cocycle", samples=2000, pairs=0)
    if inject == "matrix":
        return suite_irr(seed=seed, budget=budget, inject="matrix")
    rng = random.Random(seed)
    instances = [
        fam.FamilyId(fam.HEIS, 3),
        fam.FamilyId(fam.HAT_H, 3),
        fam.FamilyId(fam.MAXRANK_EXP_P, 3, 3),
        fam.FamilyId(fam.MAXRANK_GP_P, 3, 3),
        fam.FamilyId(fam.ELEM_AB, 3, 4),
        fam.FamilyId(fam.REPK_ELEM_AB, 3, 3),
    ]
    for f in instances:
        P = fam.build(f)
        bad = 0
        for _ in range(words):
            L = rng.randint(0, 12)
            word = [(rng.randrange(P.n), rng.choice((-3, -2, -1, 1, 2, 3)))
                    for _ in range(L)]
            if P.collect(word) != oracle.naive_rewrite(word, P):
                bad += 1
        good = bad == 0
        ok = ok and good
        lines.append("collect == naive_rewrite on %d words: %-24s %s"
                     % (words, f.describe(), "ok" if good else "FAIL (%d bad)" % bad))
    return ok, lines


SUITES = {
    "orders": suite_orders,
    "xrank": suite_xrank,
    "h2": suite_h2,
    "mu": suite_mu,
    "eta": suite_eta,
    "repgroup": suite_repgroup,
    "irr": suite_irr,
    "proj": suite_proj,
    "oracle": suite_oracle,
}
SUITE_ORDER = ["orders", "xrank", "h2", "mu", "eta", "repgroup", "irr", "proj",
               "oracle"]


def cmd_verify(args):
    names = SUITE_ORDER if args.suite == "all" else [args.suite]
    for name in names:
        if name not in SUITES:
            raise PresentationError("unknown suite %r (expected %s or all)"
                                    % (name, ", ".join(SUITE_ORDER)))
    all_ok = True
    out_lines = []
    for name in names:
        kwargs = {"budget": args.budget, "inject": args.inject}
        if args.seed is not None:
            kwargs["seed"] = args.seed
        if args.quick and name == "mu":
            kwargs.update(samples=2000, pairs=3)
        if args.quick and name == "oracle":
            kwargs.update(words=1000)
        ok, lines = SUITES[name](**kwargs)
        all_ok = all_ok and ok
        out_lines.append("[suite %s] %s" % (name, "PASS" if ok else "FAIL"))
        out_lines.extend("  " + ln for ln in lines)
    out_lines.append("verify: %s" % ("PASS" if all_ok else "FAIL"))
    _emit(args, "\n".join(out_lines))
    return EXIT_OK if all_ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="projrep",
        description="exact projective-representation toolkit for special p-groups")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, family=True):
        if family:
            sp.add_argument("--family", required=True,
                            help="one of: %s" % ", ".join(sorted(fam.CLI_NAMES)))
            sp.add_argument("--p", type=int, default=3)
            sp.add_argument("--d", type=int, default=0)
            sp.add_argument("--m", type=int, default=0)
        sp.add_argument("--format", choices=("json", "tsv"), default="json")
        sp.add_argument("--budget", type=int, default=None,
                        help="maximum group order for enumerations "
                             "(default 3^PROJREP_BUDGET_LOG3)")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None, help="write output to a file")
        sp.add_argument("--jobs", type=int, default=1,
                        help="worker cap (execution is sequential and "
                             "deterministic either way)")

    sp = sub.add_parser("group", help="build a family presentation")
    common(sp)
    sp.add_argument("action", choices=("info", "json"))
    sp.set_defaults(fn=cmd_group)

    sp = sub.add_parser("h2", help="Schur multiplier orders")
    common(sp)
    sp.set_defaults(fn=cmd_h2)

    sp = sub.add_parser("cocycle", help="mu-parametrized cocycles")
    common(sp)
    sp.add_argument("--mu", default=None, help="JSON file with mu parameters")
    sp.add_argument("--samples", type=int, default=10000)
    sp.set_defaults(fn=cmd_cocycle)

    sp = sub.add_parser("irr", help="irreducible representations by the ladder")
    common(sp)
    sp.add_argument("--matrices", action="store_true")
    sp.set_defaults(fn=cmd_irr)

    sp = sub.add_parser("proj", help="projective representations by pullback")
    common(sp)
    sp.set_defaults(fn=cmd_proj)

    sp = sub.add_parser("verify",
                        help="verification suites (mirror the acceptance criteria)")
    common(sp, family=False)
    sp.add_argument("--suite", default="all",
                    help="one of %s, or all" % ", ".join(SUITE_ORDER))
    sp.add_argument("--inject", choices=("relation", "cocycle", "matrix"),
                    default=None, help="mutation-testing hook")
    sp.add_argument("--quick", action="store_true",
                    help="reduced sample sizes for smoke runs")
    sp.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except PresentationError as exc:
        sys.stderr.write("validation error: %s\n" % exc)
        return EXIT_VALIDATION
    except BudgetError as exc:
        sys.stderr.write("budget error: %s\n" % exc)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
