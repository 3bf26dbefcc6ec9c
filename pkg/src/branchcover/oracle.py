"""Brute-force ground truth at desk scale.

Exhaustive scans certify the constructive pipeline: class-wide search for
two-partition witnesses, full enumeration of block systems, replay of the
golden table, and a census that realizes and verifies every admissible
datum of a given degree.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterator, Sequence

from .construct import BranchDatum, load_appendix_table
from .errors import InadmissibleError
from .groups import BlockSystem, is_primitive, is_transitive
from .perm import Partition, Permutation, all_in_class, canonical_in_class, compose
from .realize import realize_rp2, verify_certificate


def brute_force_two_datum(
    D1: Partition,
    D2: Partition,
    product_class: Partition,
    degree_cap: int = 9,
) -> tuple[Permutation, Permutation] | None:
    """First (canonical lam, scanned beta) with the stated product class and a
    transitive span, or None when no witness exists.

    lam is the canonical member of D1; beta runs through the whole class of
    D2 in the library's deterministic enumeration order.
    """
    d = D1.degree
    if d != D2.degree or d != product_class.degree:
        raise ValueError("degrees differ")
    if d > degree_cap:
        raise ValueError(f"degree {d} above the oracle cap {degree_cap}")
    lam = canonical_in_class(D1, d)
    for beta in all_in_class(D2, d):
        if compose(lam, beta).cycle_type() != product_class:
            continue
        if is_transitive([lam, beta]):
            return lam, beta
    return None


def _equal_partitions(labels: Sequence[int], block_size: int):
    """All partitions of the labels into blocks of the given size."""
    labels = list(labels)
    if not labels:
        yield []
        return
    first = labels[0]
    rest = labels[1:]
    from itertools import combinations

    for mates in combinations(rest, block_size - 1):
        block = (first, *mates)
        remaining = [x for x in rest if x not in set(mates)]
        for tail in _equal_partitions(remaining, block_size):
            yield [block] + tail


def exhaustive_blocks(
    gens: Sequence[Permutation], degree_cap: int = 8
) -> tuple[BlockSystem, ...]:
    """Every invariant partition into equal-size blocks, trivial ones included."""
    d = gens[0].degree
    if d > degree_cap:
        raise ValueError(f"degree {d} above the oracle cap {degree_cap}")
    dom = gens[0].domain
    out = []
    for size in range(1, d + 1):
        if d % size != 0:
            continue
        for blocks in _equal_partitions(dom, size):
            owner = {}
            for b_idx, block in enumerate(blocks):
                for x in block:
                    owner[x] = b_idx
            ok = True
            for g in gens:
                for block in blocks:
                    images = {owner[g(x)] for x in block}
                    if len(images) != 1:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(
                    BlockSystem(
                        degree=d,
                        blocks=tuple(tuple(sorted(b)) for b in blocks),
                        block_size=size,
                    )
                )
    return tuple(out)


def verify_appendix_table() -> list[dict]:
    """Replay the 19 golden rows with full checks; any failure is a hard error."""
    report = []
    for row in load_appendix_table():
        d = row.degree
        prod = compose(row.lam, row.beta)
        entry = {
            "index": row.index,
            "degree": d,
            "lam_in_D1": row.lam.cycle_type() == row.D1,
            "beta_in_D2": row.beta.cycle_type() == row.D2,
            "product_class_ok": prod.cycle_type() == Partition([d - 2, 1, 1]),
            "product_stated_ok": prod == row.product,
            "transitive": is_transitive([row.lam, row.beta]),
            "primitive": is_primitive([row.lam, row.beta])[0],
        }
        if not all(v for k, v in entry.items() if k not in ("index", "degree")):
            raise AssertionError(f"appendix row {row.index} failed: {entry}")
        report.append(entry)
    assert len(report) == 19
    return report


# -- census ------------------------------------------------------------------------


def partitions_of(n: int) -> list[Partition]:
    """All partitions of n in descending lexicographic enumeration order."""
    out: list[Partition] = []

    def rec(remaining: int, cap: int, acc: list[int]):
        if remaining == 0:
            out.append(Partition(acc))
            return
        for part in range(min(cap, remaining), 0, -1):
            rec(remaining - part, part, acc + [part])

    rec(n, n, [])
    return out


@dataclass(frozen=True)
class CensusRow:
    datum: str
    nu: int
    classification: str
    millis: float


def census(
    d: int, max_s: int, seed: int = 0, progress=None
) -> Iterator[CensusRow]:
    """Realize and verify every admissible datum of degree d with at most
    max_s branch points; boundary and inadmissible data are classified
    without being attempted."""
    if d % 2 == 0 or d > 13:
        raise InadmissibleError("census caps: d odd and at most 13")
    if max_s > 4:
        raise InadmissibleError("census caps: at most 4 branch points")
    usable = [p for p in partitions_of(d) if not p.is_trivial()]
    for s in range(1, max_s + 1):
        for combo in combinations_with_replacement(usable, s):
            datum = BranchDatum(base="rp2", degree=d, partitions=tuple(combo))
            nu = datum.nu
            start = time.perf_counter()
            if nu % 2 != 0 or nu < d - 1:
                cls = "inadmissible"
            elif nu == d - 1:
                cls = "boundary"
            else:
                cert = realize_rp2(datum, seed)
                report = verify_certificate(cert)
                if report.verdict != "valid-indecomposable":
                    raise AssertionError(
                        f"census datum {datum} verified as {report.verdict}"
                    )
                cls = "constructed"
            ms = (time.perf_counter() - start) * 1000.0
            row = CensusRow(datum=str(datum), nu=nu, classification=cls, millis=ms)
            if progress is not None:
                progress(row)
            yield row
