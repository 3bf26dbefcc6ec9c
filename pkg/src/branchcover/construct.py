"""Constructive realization of branch data by permutation tuples.

`two_datum_construct` realizes a pair of partitions of odd degree d with
even total defect above d-1 by permutations whose product is a
(d-2)-cycle generating a transitive (hence primitive) group.  The
construction follows a case split on the two largest parts: a
delete-two-points reduction with an anchored merge, a small-shape golden
table, or a four-point deletion, each finished by re-inserting the
deleted runs.  `reduce_collection` and `fundamental_construct` extend
this to arbitrarily many partitions by merging the first two with
controlled product defect and recursing.  `full_cycle_datum_construct`
handles data containing the full-cycle partition [d], where the product
is arranged to be a d-cycle (or the identity) and the extra generator is
a square root or a transposition.

Every output is checked on the spot: membership of each factor in its
partition, the product's cycle type, transitivity, and primitivity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import InadmissibleError, ParseError
from .groups import is_primitive, is_transitive, primitivity_fast_path
from .eks import (
    EksError,
    MergeTrace,
    merge_with_trace,
    product_defect_exact,
    product_defect_reduced,
)
from .perm import (
    Partition,
    PermError,
    Permutation,
    all_in_class,
    canonical_in_class,
    compose,
    conjugate,
    conjugator_matching,
    embed,
    from_cycles,
    insertion_recombine,
    inverse,
    parse_cycles,
    project,
    random_in_class,
    sqrt_odd_cycle,
)


# -- branch data -----------------------------------------------------------------


@dataclass(frozen=True)
class BranchDatum:
    """Base surface tag, degree, and one partition per branch point."""

    base: str
    degree: int
    partitions: tuple[Partition, ...]

    def __post_init__(self):
        if self.base not in ("rp2", "s2"):
            raise ParseError(f"unknown base surface {self.base!r}")
        if not self.partitions:
            raise ParseError("a branch datum needs at least one partition")
        for p in self.partitions:
            if p.degree != self.degree:
                raise ParseError(f"partition {p} does not sum to degree {self.degree}")
            if p.is_trivial():
                raise ParseError("trivial partition [1,...,1] is not a branch point")

    @property
    def nu(self) -> int:
        return sum(p.nu for p in self.partitions)

    def __str__(self) -> str:
        return ";".join(str(p) for p in self.partitions)


def parse_datum(text: str, base: str) -> BranchDatum:
    parts = [s for s in text.strip().split(";") if s.strip()]
    if not parts:
        raise ParseError("empty datum literal")
    try:
        partitions = tuple(Partition.parse(s) for s in parts)
    except PermError as exc:
        raise ParseError(str(exc)) from exc
    return BranchDatum(base=base, degree=partitions[0].degree, partitions=partitions)


# -- golden table ------------------------------------------------------------------


@dataclass(frozen=True)
class AppendixRow:
    index: int
    degree: int
    D1: Partition
    D2: Partition
    lam: Permutation
    beta: Permutation
    product: Permutation


def _parse_table(text: str) -> tuple[AppendixRow, ...]:
    rows = []
    block: dict[str, str] = {}

    def flush():
        if not block:
            return
        d = int(block["degree"])
        d1_txt, d2_txt = block["datum"].split(";")
        row = AppendixRow(
            index=int(block["row"]),
            degree=d,
            D1=Partition.parse(d1_txt),
            D2=Partition.parse(d2_txt),
            lam=parse_cycles(block["lambda"], d),
            beta=parse_cycles(block["beta"], d),
            product=parse_cycles(block["product"], d),
        )
        rows.append(row)
        block.clear()

    for line in text.splitlines():
        line = line.strip()
        if not line:
            flush()
            continue
        key, _, value = line.partition(":")
        block[key.strip()] = value.strip()
    flush()
    return tuple(rows)


@lru_cache(maxsize=1)
def load_appendix_table() -> tuple[AppendixRow, ...]:
    """Load and verify the 19 golden two-partition realizations."""
    text = (
        resources.files("branchcover").joinpath("data/appendix_table.txt").read_text()
    )
    rows = _parse_table(text)
    if len(rows) != 19:
        raise AssertionError(f"appendix table corrupt: {len(rows)} rows")
    for row in rows:
        d = row.degree
        if row.lam.cycle_type() != row.D1 or row.beta.cycle_type() != row.D2:
            raise AssertionError(f"table row {row.index}: class mismatch")
        prod = compose(row.lam, row.beta)
        if prod != row.product:
            raise AssertionError(
                f"table row {row.index}: stated product mismatch "
                "(composition convention regression?)"
            )
        if prod.cycle_type() != Partition([d - 2, 1, 1]):
            raise AssertionError(f"table row {row.index}: product class wrong")
    return rows


@lru_cache(maxsize=1)
def _table_by_key() -> dict:
    out = {}
    for row in load_appendix_table():
        key = (row.degree, tuple(sorted((row.D1.parts, row.D2.parts))))
        out.setdefault(key, row)
    return out


# -- construction trace -------------------------------------------------------------


@dataclass
class ConstructionTrace:
    case: str
    beta0: Permutation | None = None
    deleted: tuple[int, ...] = ()
    reduced_d1: Partition | None = None
    reduced_d2: Partition | None = None
    merge: MergeTrace | None = None
    appendix_index: int | None = None
    swapped: bool = False


# -- the two-partition construction --------------------------------------------------


def _check_pair_gate(D1: Partition, D2: Partition) -> int:
    if D1.degree != D2.degree:
        raise InadmissibleError("partition degrees differ")
    d = D1.degree
    if d % 2 == 0:
        raise InadmissibleError("even degree out of scope")
    if d < 3:
        raise InadmissibleError("degree below 3")
    if D1.is_trivial() or D2.is_trivial():
        raise InadmissibleError("trivial partition is not a branch point")
    nu = D1.nu + D2.nu
    if nu % 2 != 0:
        raise InadmissibleError(f"parity violation: total defect {nu} is odd")
    if nu <= d - 1:
        raise InadmissibleError(
            f"total defect {nu} not above {d - 1}: boundary or below"
        )
    return d


def _first_cycle_labels(cls: Partition) -> tuple[int, ...]:
    return tuple(range(1, cls.parts[0] + 1))


def _cycle_starts(cls: Partition) -> list[int]:
    starts, acc = [], 1
    for part in cls.parts:
        starts.append(acc)
        acc += part
    return starts


def _finish_by_insertion(lam, beta0, keep, beta_bar, B, d):
    """Common tail of cases 1-3: beta := beta0 * embed(beta_bar), with the
    product recombined symbolically and cross-checked against direct
    composition."""
    beta = compose(beta0, embed(beta_bar, d))
    lamb0 = compose(lam, beta0)
    downstairs = compose(project(lamb0, keep), beta_bar)
    prod = insertion_recombine(lamb0, downstairs, keep)
    assert prod == compose(lam, beta), "insertion recombination disagrees"
    assert beta.cycle_type() == B
    assert prod.cycle_type() == Partition([d - 2, 1, 1])
    return beta


def _case1(A: Partition, B: Partition, d: int, seed: int):
    lam = canonical_in_class(A, d)
    b1 = B.parts[0]
    beta0 = from_cycles([(3, 2, 1)], d)
    deleted = (1, 2)
    keep = tuple(range(3, d + 1))
    lam_bar = project(lam, keep)
    assert compose(lam, beta0) == embed(lam_bar, d)
    parts = [b1 - 2] + list(B.parts[1:])
    Dbar2 = Partition(parts)
    beta_bar, mtrace = merge_with_trace(lam_bar, Dbar2, seed, anchor=(b1 - 2, 3))
    beta = _finish_by_insertion(lam, beta0, keep, beta_bar, B, d)
    trace = ConstructionTrace(
        case="case1",
        beta0=beta0,
        deleted=deleted,
        reduced_d1=lam_bar.cycle_type(),
        reduced_d2=Dbar2,
        merge=mtrace,
    )
    return lam, beta, trace


def _case2(A: Partition, B: Partition, d: int, seed: int):
    row = _table_by_key().get((d, tuple(sorted((A.parts, B.parts)))))
    if row is not None:
        if A == row.D1 and B == row.D2:
            lam, beta = row.lam, row.beta
        else:
            lam, beta = row.beta, row.lam
        trace = ConstructionTrace(case="case2-table", appendix_index=row.index)
        return lam, beta, trace

    t = len(A.parts)
    if not (t >= 4 and all(c >= 2 for c in A.parts[1:4])):
        return None
    if len(B.parts) < 2 or B.parts[1] < 2:
        raise AssertionError(
            "second part of the partner partition must exceed 1 here"
        )
    d2 = B.parts[1]
    if d2 not in (2, 3):
        return None

    lam = canonical_in_class(A, d)
    starts = _cycle_starts(A)
    a11, a12 = starts[0], starts[0] + 1
    a21, a22 = starts[1], starts[1] + 1
    a31 = starts[2]
    if d2 == 2:
        beta0 = from_cycles([(a12, a11), (a22, a21, a31)], d)
        deleted = (a11, a12, a21, a22, a31)
    else:
        a41 = starts[3]
        beta0 = from_cycles([(a12, a11, a41), (a22, a21, a31)], d)
        deleted = (a11, a12, a21, a22, a31, a41)
    keep = tuple(x for x in range(1, d + 1) if x not in deleted)
    lamb0 = compose(lam, beta0)
    lam_bar = project(lamb0, keep)

    c = A.parts
    if d2 == 2:
        expect = [c[0] - 2, (c[1] - 2) + (c[2] - 1)] + list(c[3:])
    else:
        expect = [(c[0] - 2) + (c[3] - 1), (c[1] - 2) + (c[2] - 1)] + list(c[4:])
    assert lam_bar.cycle_type() == Partition(p for p in expect if p >= 1)

    Dbar2 = Partition(B.parts[2:])
    beta_bar, mtrace = merge_with_trace(lam_bar, Dbar2, seed)
    beta = _finish_by_insertion(lam, beta0, keep, beta_bar, B, d)
    trace = ConstructionTrace(
        case="case2-general",
        beta0=beta0,
        deleted=deleted,
        reduced_d1=lam_bar.cycle_type(),
        reduced_d2=Dbar2,
        merge=mtrace,
    )
    return lam, beta, trace


def _case3(A: Partition, B: Partition, d: int, seed: int):
    c1 = A.parts[0]
    if len(B.parts) < 2 or B.parts[1] != 2:
        raise AssertionError("partner partition must contain two 2-parts here")
    lam = canonical_in_class(A, d)
    starts = _cycle_starts(A)
    if c1 <= 4:
        if len(A.parts) < 2 or A.parts[1] < 3:
            raise AssertionError(
                "second part below 3 contradicts the defect hypotheses"
            )
        deleted = (1, 2, starts[1], starts[1] + 1)
        beta0 = from_cycles([(1, 2), (starts[1] + 1, starts[1])], d)
    else:
        deleted = (1, 2, 3, 4)
        beta0 = from_cycles([(1, 2), (3, 4)], d)
    keep = tuple(x for x in range(1, d + 1) if x not in deleted)
    lamb0 = compose(lam, beta0)
    lam_bar = project(lamb0, keep)

    c = A.parts
    if c1 <= 4:
        expect = [c[0] - 2, c[1] - 2] + list(c[2:])
    else:
        expect = [c[0] - 4] + list(c[1:])
    assert lam_bar.cycle_type() == Partition(p for p in expect if p >= 1)

    Dbar2 = Partition(B.parts[2:])
    beta_bar, mtrace = merge_with_trace(lam_bar, Dbar2, seed)
    beta = _finish_by_insertion(lam, beta0, keep, beta_bar, B, d)
    trace = ConstructionTrace(
        case="case3",
        beta0=beta0,
        deleted=deleted,
        reduced_d1=lam_bar.cycle_type(),
        reduced_d2=Dbar2,
        merge=mtrace,
    )
    return lam, beta, trace


def _pair_search_fallback(A: Partition, B: Partition, d: int, seed: int):
    """Verified search safety net for shapes outside the written case split."""
    lam = canonical_in_class(A, d)
    want = Partition([d - 2, 1, 1])
    rng = random.Random(seed)
    for _ in range(256 + 64 * d):
        beta = random_in_class(B, d, rng)
        if compose(lam, beta).cycle_type() == want and is_transitive([lam, beta]):
            return lam, beta, ConstructionTrace(case="search")
    for beta in all_in_class(B, d):
        if compose(lam, beta).cycle_type() == want and is_transitive([lam, beta]):
            return lam, beta, ConstructionTrace(case="search")
    raise EksError("two-partition search exhausted (defect)")


def two_datum_construct(
    D1: Partition, D2: Partition, seed: int = 0
) -> tuple[Permutation, Permutation, ConstructionTrace]:
    """lam in D1 and beta in D2 with lam*beta a (d-2)-cycle and <lam, beta>
    transitive and primitive.

    Requires odd d >= 3 and d-1 < nu(D1) + nu(D2) even.
    """
    d = _check_pair_gate(D1, D2)

    if d == 3:
        assert D1 == D2 == Partition([3])
        lam = canonical_in_class(D1, 3)
        beta = lam.inverse()
        trace = ConstructionTrace(case="d3")
        lam_out, beta_out = lam, beta
    else:
        swapped = D1.nu < D2.nu
        A, B = (D2, D1) if swapped else (D1, D2)
        c1, b1 = A.parts[0], B.parts[0]
        assert c1 >= 3, "largest part below 3 contradicts the defect bound"
        got = None
        if c1 + b1 > 6 and b1 >= 3:
            got = _case1(A, B, d, seed)
        elif c1 == 3 and b1 == 3:
            got = _case2(A, B, d, seed)
        elif b1 == 2:
            got = _case3(A, B, d, seed)
        if got is None:
            got = _pair_search_fallback(A, B, d, seed)
        lam, beta, trace = got
        trace.swapped = swapped
        lam_out, beta_out = (beta, lam) if swapped else (lam, beta)

    assert lam_out.cycle_type() == D1 and beta_out.cycle_type() == D2
    prod = compose(lam_out, beta_out)
    assert prod.cycle_type() == Partition([d - 2, 1, 1])
    assert is_transitive([lam_out, beta_out])
    _assert_primitive([lam_out, beta_out], d)
    return lam_out, beta_out, trace


def _assert_primitive(gens, d):
    if d == 2:
        return
    fast = primitivity_fast_path(gens, d - 2) if d > 3 else None
    if fast is None:
        prim, _ = is_primitive(gens)
        assert prim, "construction produced an imprimitive group"
    else:
        assert fast


# -- reduction and induction -----------------------------------------------------------


@dataclass(frozen=True)
class ReductionStep:
    reduced: BranchDatum
    gamma1: Permutation
    gamma2: Permutation
    merged: tuple[int, int]


def _check_datum_gate(datum: BranchDatum):
    d = datum.degree
    if d % 2 == 0:
        raise InadmissibleError("even degree out of scope")
    if d < 3:
        raise InadmissibleError("degree below 3")
    nu = datum.nu
    if nu % 2 != 0:
        raise InadmissibleError(f"parity violation: total defect {nu} is odd")
    if nu <= d - 1:
        raise InadmissibleError(
            f"total defect {nu} not above {d - 1}: boundary or below"
        )


def reduce_collection(datum: BranchDatum, seed: int = 0) -> ReductionStep:
    """Merge two partitions of the datum into the cycle type of a product
    with controlled defect, preserving the admissibility gate."""
    _check_datum_gate(datum)
    if len(datum.partitions) < 3:
        raise InadmissibleError("reduction needs at least three partitions")
    d = datum.degree
    parts = list(datum.partitions)

    i1, i2 = 0, 1
    rest_nu = sum(p.nu for p in parts[2:])
    if rest_nu == 1:
        # exactly one spare transposition: keep a defect-heavy partition out
        # of the merged pair so the reduced datum clears the gate
        assert len(parts) == 3
        heavy = 0 if parts[0].nu > 1 else 1
        assert parts[heavy].nu > 1
        i1, i2 = 1 - heavy, 2

    A, B = parts[i1], parts[i2]
    keep_idx = [i for i in range(len(parts)) if i not in (i1, i2)]
    tail_nu = sum(parts[i].nu for i in keep_idx)
    q = (datum.nu - (d - 1)) // 2
    r = 2 * q - tail_nu
    if r <= 0:
        gamma1, gamma2 = product_defect_exact(A, B, seed)
    else:
        k = r % 2
        gamma1, gamma2 = product_defect_reduced(A, B, k, seed)
    D = compose(gamma1, gamma2).cycle_type()
    reduced = BranchDatum(
        base=datum.base,
        degree=d,
        partitions=(D, *(parts[i] for i in keep_idx)),
    )
    assert reduced.nu % 2 == 0 and reduced.nu > d - 1, "reduction broke the gate"
    return ReductionStep(reduced=reduced, gamma1=gamma1, gamma2=gamma2, merged=(i1, i2))


def _reorder_factors(sigmas: list[Permutation], targets: list[int]) -> list[Permutation]:
    """Permute product factors to their target positions by adjacent swaps
    (x, y) -> (x*y*x^-1, x); the total product, the classes carried by each
    slot, and the generated group are preserved."""
    pairs = [[t, s] for t, s in zip(targets, sigmas)]
    changed = True
    while changed:
        changed = False
        for i in range(len(pairs) - 1):
            if pairs[i][0] > pairs[i + 1][0]:
                x, y = pairs[i][1], pairs[i + 1][1]
                pairs[i], pairs[i + 1] = (
                    [pairs[i + 1][0], compose(compose(x, y), x.inverse())],
                    [pairs[i][0], x],
                )
                changed = True
    return [p for _, p in pairs]


def fundamental_construct(datum: BranchDatum, seed: int = 0) -> tuple[Permutation, ...]:
    """Permutations sigma_i, one per partition in order, whose product is a
    (d-2)-cycle and whose span is transitive and primitive."""
    _check_datum_gate(datum)
    d = datum.degree
    parts = datum.partitions
    if len(parts) == 2:
        lam, beta, _ = two_datum_construct(parts[0], parts[1], seed)
        return lam, beta

    step = reduce_collection(datum, seed)
    sub = fundamental_construct(step.reduced, seed)
    sigma_hat = sub[0]
    lam_hat = conjugator_matching(compose(step.gamma1, step.gamma2), sigma_hat)
    g1 = conjugate(step.gamma1, lam_hat)
    g2 = conjugate(step.gamma2, lam_hat)
    assert compose(g1, g2) == sigma_hat

    i1, i2 = step.merged
    keep_idx = [i for i in range(len(parts)) if i not in (i1, i2)]
    internal = [g1, g2, *sub[1:]]
    targets = [i1, i2, *keep_idx]
    sigmas = _reorder_factors(internal, targets)

    prod = compose(*sigmas)
    assert prod.cycle_type() == Partition([d - 2, 1, 1])
    for sigma, cls in zip(sigmas, parts):
        assert sigma.cycle_type() == cls
    assert is_transitive(sigmas)
    _assert_primitive(sigmas, d)
    return tuple(sigmas)


# -- data containing the full-cycle partition [d] ----------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def single_branch_verdict(d: int) -> str:
    """Verdict for the one-branch-point self-covering of the projective plane."""
    if d % 2 == 0:
        raise InadmissibleError("even degree excluded: the datum {[d]} forces d odd")
    if d == 1 or _is_prime(d):
        return "indecomposable"
    return "decomposable"


def _perturb_until_nontrivial(gammas: dict[int, Permutation], order: list[int], d: int):
    """Make the cyclically-rotated product of the chosen factors non-trivial
    without changing any cycle structure."""

    def rotated_product():
        out = Permutation.identity(d)
        for i in order:
            out = compose(out, gammas[i])
        return out

    if not rotated_product().is_identity():
        return
    for i in order:
        if any(len(c) >= 3 for c in gammas[i].cycles()):
            gammas[i] = gammas[i].inverse()
            assert not rotated_product().is_identity()
            return
    for i in order:
        two = next((c for c in gammas[i].cycles() if len(c) == 2), None)
        if two is None:
            continue
        y = two[1]
        z = next(x for x in range(1, d + 1) if x not in two)
        swap = from_cycles([(y, z)], d)
        gammas[i] = conjugate(gammas[i], swap)
        assert not rotated_product().is_identity()
        return
    raise AssertionError("no transposition available to perturb")


def _full_cycle_partner_search(B: Permutation, seed: int) -> Permutation:
    """A d-cycle g with B*g a d-cycle and <B, g> primitive (verified search;
    the constructive proof lives outside this library)."""
    d = B.degree
    assert B.nu() % 2 == 0 and B.nu() < d - 1
    assert B.fixed_points() or not compose(B, B).is_identity()
    full = Partition([d])
    rng = random.Random(seed)
    for _ in range(256 + 64 * d):
        g = random_in_class(full, d, rng)
        if len(compose(B, g).cycles()) == 1 and is_primitive([B, g])[0]:
            return g
    for g in all_in_class(full, d):
        if len(compose(B, g).cycles()) == 1 and is_primitive([B, g])[0]:
            return g
    raise EksError("full-cycle partner search exhausted (defect)")


def full_cycle_datum_construct(
    datum: BranchDatum, seed: int = 0
) -> tuple[Permutation, tuple[Permutation, ...]]:
    """Certificate ingredients (a, u_1..u_s) with a^2 * u_1 * ... * u_s = 1
    for a datum containing the partition [d]."""
    d = datum.degree
    if d % 2 == 0:
        raise InadmissibleError("even degree out of scope")
    full = Partition([d])
    if full not in datum.partitions:
        raise InadmissibleError("datum does not contain the full-cycle partition")
    nu = datum.nu
    if nu % 2 != 0 or nu < d - 1:
        raise InadmissibleError("datum is not nonorientable-admissible")
    s = len(datum.partitions)
    if s == 1 and not _is_prime(d):
        raise InadmissibleError(
            "only decomposable realizations (single branch point, composite degree)"
        )

    if s == 1:
        gamma = canonical_in_class(full, d)
        a = sqrt_odd_cycle(gamma.inverse())
        us = (gamma,)
    else:
        idx = max(i for i, p in enumerate(datum.partitions) if p == full)
        gammas: dict[int, Permutation] = {
            i: canonical_in_class(p, d)
            for i, p in enumerate(datum.partitions)
            if i != idx
        }
        order = [*range(idx + 1, s), *range(0, idx)]  # R then L
        _perturb_until_nontrivial(gammas, order, d)

        B = Permutation.identity(d)
        for i in order:
            B = compose(B, gammas[i])
        assert not B.is_identity()
        q = len(B.cycles())
        assert q % 2 == 1, "parity forces an odd number of product cycles"
        if q == 1:
            u_idx = B.inverse()
            a = from_cycles([(1, u_idx(1))], d)
        else:
            u_idx = _full_cycle_partner_search(B, seed)
            L = Permutation.identity(d)
            for i in range(idx):
                L = compose(L, gammas[i])
            R = Permutation.identity(d)
            for i in range(idx + 1, s):
                R = compose(R, gammas[i])
            C = compose(L, u_idx, R)
            assert len(C.cycles()) == 1
            a = sqrt_odd_cycle(C).inverse()
        gammas[idx] = u_idx
        us = tuple(gammas[i] for i in range(s))

    total = compose(a, a, *us)
    assert total.is_identity(), "representation relation violated"
    gens = [a, *us]
    assert is_transitive(gens)
    prim, _ = is_primitive(gens)
    assert prim, "full-cycle construction produced an imprimitive group"
    return a, us
