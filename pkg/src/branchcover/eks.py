"""Factorization toolbox for controlled-defect products.

Three services, each verified on every call:

* merge a permutation with a target cycle type so the product is a full
  cycle (`eks_merge`), optionally anchoring a designated point inside a
  designated cycle of the output;
* realize exact or reduced defect for a product of two prescribed cycle
  types (`product_defect_exact`, `product_defect_reduced`);
* factor a non-trivial even permutation into two full cycles
  (`factor_two_full_cycles`) and align a full cycle onto a written one by
  a conjugation fixing a marked point (`aligning_conjugator`).

The primary merge path is greedy cycle threading: each k-cycle of the
output consumes one fresh element from each of k distinct cycles of the
running product, merging them (any such choice merges, so only the
availability of fresh elements can stall the greedy schedule; a
backtracking pass over the cycle choices covers the stalls).  Surplus
defect is absorbed by splitting the target into an exactly-threadable
piece plus an even remainder realized as a conjugated product of two full
cycles.  Seeded randomized search backs every path; outputs are always
checked, so the fallbacks carry correctness.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .perm import (
    Partition,
    PermError,
    Permutation,
    all_in_class,
    canonical_in_class,
    compose,
    conjugate,
    embed,
    from_cycles,
    project,
    random_in_class,
)


class EksError(ValueError):
    """Precondition violation or exhausted internal search."""


@dataclass(frozen=True)
class MergePlan:
    """Threading schedule: per output cycle, the (product-cycle id, element)
    pairs it consumed."""

    steps: tuple[tuple[tuple[int, int], ...], ...]


@dataclass(frozen=True)
class SplitTrace:
    """Intermediates of the surplus-defect path."""

    exact_part: Partition          # threadable piece of the target
    remainder_part: Partition      # even remainder on the small point set
    f: int
    z: int
    j_entry: int                   # entry of the target split across both pieces
    star: int
    beta_prime: Permutation
    beta_second: Permutation
    tau: Permutation
    sigma: Permutation
    gamma: Permutation
    eta: Permutation


@dataclass(frozen=True)
class MergeTrace:
    kind: str                      # 'threading' | 'split' | 'search'
    plan: MergePlan | None = None
    split: SplitTrace | None = None


# -- greedy threading with backtracking ----------------------------------------


def _thread(
    lam: Permutation,
    parts: Sequence[tuple[int, object]],
    reserved: Iterable[int] = (),
    anchor: tuple[object, int] | None = None,
):
    """Place the tagged parts as cycles, each merging that many distinct
    cycles of the running product of lam with the placed cycles.

    Returns (cycles_by_tag, MergePlan) or None when no schedule exists.
    ``anchor=(tag, point)`` forces the tagged part's cycle to consume
    ``point``; reserved points are never consumed.
    """
    lam_cycles = lam.cycles()
    reserved = set(reserved)
    fresh: dict[int, list[int]] = {}
    home: dict[int, int] = {}
    for gid, cyc in enumerate(lam_cycles):
        avail = sorted(x for x in cyc if x not in reserved)
        fresh[gid] = avail
        for x in cyc:
            home[x] = gid

    order = sorted(
        range(len(parts)),
        key=lambda i: (
            0 if anchor is not None and parts[i][1] == anchor[0] else 1,
            -parts[i][0],
            i,
        ),
    )
    alive = list(fresh.keys())
    placed: dict[object, tuple[int, ...]] = {}
    plan_steps: list[tuple[tuple[int, int], ...]] = []

    def place(rank: int) -> bool:
        if rank == len(order):
            return True
        size, tag = parts[order[rank]]
        anchored_here = anchor is not None and tag == anchor[0]
        if anchored_here:
            pt = anchor[1]
            agid = None
            for gid in alive:
                if pt in fresh[gid]:
                    agid = gid
                    break
            if agid is None:
                return False
            pool = [g for g in alive if g != agid and fresh[g]]
            need = size - 1
        else:
            pool = [g for g in alive if fresh[g]]
            need = size
        if need > len(pool):
            return False
        for combo in combinations(pool, need):
            chosen = ((agid,) + combo) if anchored_here else combo
            saved = {g: fresh[g] for g in chosen}
            elems = []
            for gid in chosen:
                x = anchor[1] if anchored_here and gid == agid else fresh[gid][0]
                elems.append(x)
                fresh[gid] = [y for y in fresh[gid] if y != x]
            keep = chosen[0]
            fresh[keep] = sorted(set().union(*(fresh[g] for g in chosen)))
            removed = list(chosen[1:])
            for g in removed:
                alive.remove(g)
                del fresh[g]
            placed[tag] = tuple(elems)
            plan_steps.append(tuple(zip(chosen, elems)))
            if place(rank + 1):
                return True
            plan_steps.pop()
            del placed[tag]
            for g in removed:
                alive.append(g)
            alive.sort()
            for g, lst in saved.items():
                fresh[g] = lst
        return False

    if not place(0):
        return None
    return placed, MergePlan(tuple(plan_steps))


def _beta_from_threading(lam: Permutation, parts, reserved=(), anchor=None):
    got = _thread(lam, parts, reserved, anchor)
    if got is None:
        return None
    placed, plan = got
    beta = from_cycles(placed.values(), lam.domain)
    return beta, plan


# -- randomized / exhaustive fallbacks ------------------------------------------


def _random_in_class_anchored(cls: Partition, domain, anchor, rng) -> Permutation:
    if anchor is None:
        return random_in_class(cls, domain, rng)
    a_e, pt = anchor
    parts = list(cls.parts)
    parts.remove(a_e)
    labels = [x for x in domain if x != pt]
    rng.shuffle(labels)
    cycles = [(pt, *labels[: a_e - 1])]
    i = a_e - 1
    for part in parts:
        cycles.append(tuple(labels[i : i + part]))
        i += part
    return from_cycles(cycles, domain)


def _anchor_ok(beta: Permutation, anchor) -> bool:
    if anchor is None:
        return True
    a_e, pt = anchor
    for cyc in beta.cycles():
        if pt in cyc:
            return len(cyc) == a_e
    return False


def _search_merge(lam, target, anchor, rng, cycle_goal=1):
    budget = 256 + 64 * lam.degree
    for _ in range(budget):
        beta = _random_in_class_anchored(target, lam.domain, anchor, rng)
        if len(compose(lam, beta).cycles()) == cycle_goal:
            return beta
    if lam.degree <= 11:
        for beta in all_in_class(target, lam.domain):
            if _anchor_ok(beta, anchor) and len(compose(lam, beta).cycles()) == cycle_goal:
                return beta
    return None


# -- surplus-defect split --------------------------------------------------------


def _canonical_tau(t2_parts: Sequence[int], mod_index: int, star: int, us: Sequence[int]):
    """Canonical member of the remainder class with ``star`` leading the
    modified entry's cycle; all parts are >= 2 so every point moves."""
    labels = list(us)
    cycles = []
    i = 0
    for pos, part in enumerate(t2_parts):
        if pos == mod_index:
            cycles.append((star, *labels[i : i + part - 1]))
            i += part - 1
        else:
            cycles.append(tuple(labels[i : i + part]))
            i += part
    dom = sorted((star, *us))
    return from_cycles(cycles, dom)


def _merge_split(lam: Permutation, target: Partition, anchor, rng):
    """Surplus-defect merge: peel an exactly-threadable piece off the target,
    absorb the even remainder through a two-full-cycle factorization aligned
    back into the running full cycle."""
    dbar = lam.degree
    t = len(lam.cycles())
    nu_lam = dbar - t
    ones = sum(1 for p in target.parts if p == 1)
    E = sorted(p for p in target.parts if p > 1)

    k, acc = 0, 0
    while k < len(E) and nu_lam + acc + (E[k] - 1) <= dbar - 1:
        acc += E[k] - 1
        k += 1
    if k == len(E):
        return None
    f = dbar - nu_lam - acc
    assert 1 <= f < E[k]

    tail = E[k:]
    mode = "free"
    j_idx = 0
    if anchor is not None:
        a_e, pt = anchor
        if a_e == 1 or a_e in E[:k]:
            mode = "2a"
        elif a_e in tail:
            mode = "2b"
            j_idx = tail.index(a_e)
        else:
            return None

    parts: list[tuple[int, object]] = [(e, ("ret", i)) for i, e in enumerate(E[:k])]
    if f >= 2:
        parts.append((f, "f"))
    reserved: list[int] = []
    thread_anchor = None
    if anchor is not None:
        a_e, pt = anchor
        if mode == "2a":
            if a_e == 1:
                reserved.append(pt)
            else:
                idx = E[:k].index(a_e)
                thread_anchor = (("ret", idx), pt)
        else:  # 2b: anchor the f-cycle
            if f >= 2:
                thread_anchor = ("f", pt)
            else:
                reserved.append(pt)

    got = _thread(lam, parts, reserved, thread_anchor)
    if got is None:
        return None
    placed, _plan = got
    beta_prime = from_cycles(placed.values(), lam.domain)
    prod = compose(lam, beta_prime)
    if len(prod.cycles()) != 1:
        return None

    fixed = set(beta_prime.fixed_points())
    if anchor is not None and mode == "2b":
        star = anchor[1]
    elif f >= 2:
        star = min(placed["f"])
    else:
        pool = sorted(fixed - set(reserved))
        star = pool[0]

    remaining_fixed = sorted(fixed - {star})
    F: list[int] = []
    if anchor is not None and mode == "2a" and anchor[0] == 1:
        F.append(anchor[1])
        remaining_fixed = [x for x in remaining_fixed if x != anchor[1]]
    F.extend(remaining_fixed[: ones - len(F)])
    us = [x for x in remaining_fixed if x not in set(F)]
    z = dbar - ones - sum(E[:k]) - f
    if len(us) != z or z < 2:
        return None

    sub = sorted([star, *us])
    pi = project(prod, sub)
    t2_parts = list(tail)
    t2_parts[j_idx] = tail[j_idx] - f + 1
    tau = _canonical_tau(t2_parts, j_idx, star, us)
    fac = _factor_two_cycles_rng(tau, rng)
    if fac is None:
        return None
    sigma, gamma = fac
    pi_cycle = next(c for c in pi.cycles() if len(c) == len(sub))
    eta = aligning_conjugator(sigma, pi_cycle, star)
    beta_second = conjugate(tau, eta)
    beta_bar = compose(beta_prime, embed(beta_second, lam.domain))

    trace = SplitTrace(
        exact_part=Partition(list(E[:k]) + [f] + [1] * (ones + z)),
        remainder_part=Partition(t2_parts),
        f=f,
        z=z,
        j_entry=tail[j_idx],
        star=star,
        beta_prime=beta_prime,
        beta_second=beta_second,
        tau=tau,
        sigma=sigma,
        gamma=gamma,
        eta=eta,
    )
    return beta_bar, trace


# -- public operations -----------------------------------------------------------


def merge_with_trace(
    lam: Permutation,
    target: Partition,
    seed: int = 0,
    anchor: tuple[int, int] | None = None,
) -> tuple[Permutation, MergeTrace]:
    """eks_merge returning the construction trace alongside the output."""
    dbar = lam.degree
    if target.degree != dbar:
        raise EksError("target partition degree does not match the permutation")
    nu_sum = lam.nu() + target.nu
    if nu_sum < dbar - 1:
        raise EksError(f"defect sum {nu_sum} below {dbar - 1}: no full-cycle product")
    if (nu_sum - (dbar + 1)) % 2 != 0:
        raise EksError("defect parity obstruction: no full-cycle product")
    if anchor is not None and anchor[0] not in target.parts:
        raise EksError("anchor entry is not a part of the target")

    rng = random.Random(seed)
    excess = nu_sum - (dbar - 1)
    beta = trace = None
    if excess == 0:
        parts = [(p, i) for i, p in enumerate(target.parts) if p > 1]
        reserved: list[int] = []
        thread_anchor = None
        if anchor is not None:
            a_e, pt = anchor
            if a_e == 1:
                reserved.append(pt)
            else:
                idx = next(i for i, p in enumerate(target.parts) if p == a_e)
                thread_anchor = (idx, pt)
        got = _beta_from_threading(lam, parts, reserved, thread_anchor)
        if got is not None:
            beta, plan = got
            trace = MergeTrace(kind="threading", plan=plan)
    else:
        got = _merge_split(lam, target, anchor, rng)
        if got is not None:
            beta, split = got
            trace = MergeTrace(kind="split", split=split)
    if beta is None:
        beta = _search_merge(lam, target, anchor, rng)
        trace = MergeTrace(kind="search")
    if beta is None:
        raise EksError("internal merge search exhausted (defect)")

    assert beta.cycle_type() == target
    assert len(compose(lam, beta).cycles()) == 1
    assert _anchor_ok(beta, anchor)
    return beta, trace


def eks_merge(
    lam: Permutation,
    target: Partition,
    seed: int = 0,
    anchor: tuple[int, int] | None = None,
) -> Permutation:
    """A member of ``target`` whose product with lam is a full cycle.

    Requires nu(lam) + nu(target) >= d-1 with the opposite parity of d.
    ``anchor=(entry, point)`` additionally places ``point`` inside a cycle
    of length ``entry`` of the output (for entry 1: point stays fixed).
    """
    return merge_with_trace(lam, target, seed, anchor)[0]


def product_defect_exact(
    A: Partition, B: Partition, seed: int = 0
) -> tuple[Permutation, Permutation]:
    """alpha in A, beta in B with nu(alpha*beta) == nu(A) + nu(B)."""
    if A.degree != B.degree:
        raise EksError("partition degrees differ")
    d = A.degree
    if A.nu + B.nu >= d:
        raise EksError("defect sum too large for exact addition")
    alpha = canonical_in_class(A, d)
    parts = [(p, i) for i, p in enumerate(B.parts) if p > 1]
    got = _beta_from_threading(alpha, parts)
    if got is not None:
        beta = got[0]
    else:
        rng = random.Random(seed)
        beta = _search_defect(alpha, B, A.nu + B.nu, rng)
        if beta is None:
            raise EksError("internal search exhausted (defect)")
    assert beta.cycle_type() == B
    assert compose(alpha, beta).nu() == A.nu + B.nu
    return alpha, beta


def _search_defect(alpha, B, want_nu, rng):
    budget = 256 + 64 * alpha.degree
    for _ in range(budget):
        beta = random_in_class(B, alpha.domain, rng)
        if compose(alpha, beta).nu() == want_nu:
            return beta
    if alpha.degree <= 11:
        for beta in all_in_class(B, alpha.domain):
            if compose(alpha, beta).nu() == want_nu:
                return beta
    return None


def _split_arc(prod_cycle: Sequence[int], members: Sequence[int]) -> tuple[int, ...]:
    """Arrange ``members`` of one product cycle in decreasing cycle position;
    multiplying by that cycle splits the host into len(members) cycles."""
    pos = {x: i for i, x in enumerate(prod_cycle)}
    return tuple(sorted(members, key=lambda x: -pos[x]))


def product_defect_reduced(
    A: Partition, B: Partition, k: int, seed: int = 0
) -> tuple[Permutation, Permutation]:
    """alpha in A, beta in B with nu(alpha*beta) == (d-1) - k.

    Needs nu(A) + nu(B) = (d-1) + r with r > 0 and 0 <= k <= r of the same
    parity as r.
    """
    if A.degree != B.degree:
        raise EksError("partition degrees differ")
    d = A.degree
    r = A.nu + B.nu - (d - 1)
    if r <= 0:
        raise EksError("defect sum not above the full-cycle threshold")
    if not (0 <= k <= r) or (k - r) % 2 != 0:
        raise EksError(f"k={k} out of range or wrong parity for r={r}")
    alpha = canonical_in_class(A, d)
    rng = random.Random(seed)
    if k == 0:
        beta = eks_merge(alpha, B, seed)
    else:
        beta = _reduced_by_splitting(alpha, B, k, r) or _search_defect(
            alpha, B, (d - 1) - k, rng
        )
        if beta is None:
            raise EksError("internal search exhausted (defect)")
    assert beta.cycle_type() == B
    assert compose(alpha, beta).nu() == (d - 1) - k
    return alpha, beta


def _reduced_by_splitting(alpha, B, k, r):
    """Deterministic path: thread part of B, then place the withheld parts as
    position-decreasing arcs inside product cycles (each such placement of a
    b-cycle splits its host into b pieces)."""
    want_inside = (k + r) // 2
    nontrivial = [p for p in B.parts if p > 1]
    inside = _pick_defect_subset(nontrivial, want_inside)
    if inside is None:
        return None
    threaded = list(nontrivial)
    for p in inside:
        threaded.remove(p)
    parts = [(p, i) for i, p in enumerate(threaded)]
    got = _beta_from_threading(alpha, parts)
    if got is None:
        return None
    beta_cycles = [list(c) for c in got[0].nontrivial_cycles()]
    used = set(x for c in beta_cycles for x in c)
    for b in sorted(inside, reverse=True):
        prod = compose(alpha, from_cycles(beta_cycles, alpha.domain))
        host = None
        for cyc in sorted(prod.cycles(), key=len, reverse=True):
            fresh = [x for x in cyc if x not in used]
            if len(fresh) >= b:
                host = (cyc, fresh[:b])
                break
        if host is None:
            return None
        arc = _split_arc(host[0], host[1])
        beta_cycles.append(list(arc))
        used.update(arc)
    return from_cycles(beta_cycles, alpha.domain)


def _pick_defect_subset(parts: Sequence[int], want: int):
    """Sub-multiset with sum of (p-1) equal to ``want`` (None if impossible)."""
    if want == 0:
        return []
    reachable: dict[int, list[int]] = {0: []}
    for p in parts:
        w = p - 1
        for total, chosen in sorted(reachable.items(), reverse=True):
            nt = total + w
            if nt <= want and nt not in reachable:
                reachable[nt] = chosen + [p]
    return reachable.get(want)


def factor_two_full_cycles(
    tau: Permutation, seed: int = 0
) -> tuple[Permutation, Permutation]:
    """Full cycles (sigma, gamma) on tau's point set with sigma*gamma == tau.

    tau must be a non-trivial even permutation.
    """
    if tau.is_identity():
        raise EksError("trivial permutation: factorization hypothesis needs nu > 0")
    if tau.nu() % 2 != 0:
        raise EksError("odd permutation is not a product of two full cycles")
    got = _factor_two_cycles_rng(tau, random.Random(seed))
    if got is None:
        raise EksError("internal factor search exhausted (defect)")
    return got


def _factor_two_cycles_rng(tau, rng):
    dom = tau.domain
    n = len(dom)
    full = Partition([n])
    for _ in range(64 * n):
        gamma = random_in_class(full, dom, rng)
        sigma = compose(tau, gamma.inverse())
        if len(sigma.nontrivial_cycles()) == 1 and len(sigma.support()) == n:
            assert compose(sigma, gamma) == tau
            return sigma, gamma
    got = _factor_backtrack(tau)
    if got is None:
        return None
    sigma, gamma = got
    assert compose(sigma, gamma) == tau
    return sigma, gamma


def _factor_backtrack(tau):
    """Depth-first construction of gamma as a cyclic sequence, pruning on the
    partial sigma = tau * gamma^-1 closing a short cycle."""
    dom = tau.domain
    n = len(dom)
    if n == 1:
        return None
    tinv = tau.inverse()
    seq = [dom[0]]
    used = {dom[0]}
    # sigma links: placing seq[i+1] = v fixes sigma(tinv(v)) = seq[i]
    nxt: dict[int, int] = {}
    prv: dict[int, int] = {}

    def path_end(x):
        while x in nxt:
            x = nxt[x]
        return x

    def rec():
        if len(seq) == n:
            u = tinv(seq[0])
            w = seq[-1]
            if u in nxt or w in prv:
                return None
            links = dict(nxt)
            links[u] = w
            x, cnt = dom[0], 0
            while cnt < n:
                if x not in links:
                    return None
                x = links[x]
                cnt += 1
            if x != dom[0] or len(links) != n:
                return None
            gamma = from_cycles([tuple(seq)], dom)
            sigma = compose(tau, gamma.inverse())
            if len(sigma.nontrivial_cycles()) == 1 and len(sigma.support()) == n:
                return sigma, gamma
            return None
        for v in dom:
            if v in used:
                continue
            u = tinv(v)
            w = seq[-1]
            if u in nxt or w in prv or u == w:
                continue
            if path_end(w) == u:
                continue  # the link u -> w would close a short sigma-cycle
            nxt[u] = w
            prv[w] = u
            seq.append(v)
            used.add(v)
            got = rec()
            if got is not None:
                return got
            seq.pop()
            used.remove(v)
            del nxt[u]
            del prv[w]
        return None

    return rec()


def aligning_conjugator(
    sigma: Permutation, target_cycle: Sequence[int], fixed: int
) -> Permutation:
    """eta with eta * sigma^-1 * eta^-1 equal to the written target cycle and
    eta(fixed) == fixed."""
    target = tuple(target_cycle)
    if len(set(target)) != len(target):
        raise EksError("target cycle repeats a label")
    if sorted(target) != list(sigma.domain):
        raise EksError("target cycle length or labels mismatch the point set")
    if fixed not in target:
        raise EksError("distinguished point absent from the target cycle")
    sig_inv = sigma.inverse()
    cycles = sig_inv.nontrivial_cycles()
    if len(cycles) != 1 or len(cycles[0]) != len(sigma.domain):
        raise EksError("sigma is not a full cycle on the point set")
    src = cycles[0]
    src = src[src.index(fixed) :] + src[: src.index(fixed)]
    tgt = target[target.index(fixed) :] + target[: target.index(fixed)]
    eta = Permutation.from_mapping(dict(zip(src, tgt)), sigma.domain).inverse()
    assert eta(fixed) == fixed
    assert conjugate(sig_inv, eta) == from_cycles([tgt], sigma.domain)
    return eta
