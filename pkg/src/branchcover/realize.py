"""Admissibility gates, certificate assembly, and the independent verifier.

A certificate for the projective plane assigns permutations to the
standard generators of the punctured-plane fundamental group subject to
the single relation a^2 * u_1 * ... * u_s = 1; for the sphere the a-image
is absent and the u-images multiply to the identity.  The verifier
re-derives every claim (relation, per-point cycle types, transitivity,
primitivity, Euler characteristic) from the certificate alone, never
reusing builder state.
"""

from __future__ import annotations

from dataclasses import dataclass

from .construct import (
    BranchDatum,
    full_cycle_datum_construct,
    fundamental_construct,
    parse_datum,
)
from .errors import InadmissibleError, ParseError, VerificationError
from .groups import GroupError, is_primitive, is_transitive
from .perm import (
    Partition,
    PermError,
    Permutation,
    compose,
    format_cycles,
    parse_cycles,
    sqrt_odd_cycle,
)

_CHI_BASE = {"rp2": 1, "s2": 2}


@dataclass(frozen=True)
class HurwitzCertificate:
    """Generator images witnessing a realization; the verifiable artifact."""

    base: str
    degree: int
    datum: BranchDatum
    a_image: Permutation | None
    u_images: tuple[Permutation, ...]

    def __post_init__(self):
        if self.base not in _CHI_BASE:
            raise ParseError(f"unknown base surface {self.base!r}")
        if (self.a_image is not None) != (self.base == "rp2"):
            raise ParseError("a-image present iff the base is the projective plane")
        if len(self.u_images) != len(self.datum.partitions):
            raise ParseError("one u-image per branch point required")


@dataclass(frozen=True)
class VerificationReport:
    relation_ok: bool
    cycle_types_ok: bool
    transitive: bool
    primitive: bool
    chi_M: int
    verdict: str
    reason: str = ""


def euler_characteristic(base: str, d: int, nu: int) -> int:
    """chi(M) = d * chi(N) - nu."""
    return d * _CHI_BASE[base] - nu


def admissible(datum: BranchDatum) -> tuple[bool, str]:
    """Necessary realizability gate for a connected covering surface.

    Projective plane: d-1 <= nu even (the boundary nu == d-1 is flagged).
    Sphere: nu even with nu >= 2d-2, i.e. chi(M) <= 2; this gate is
    necessary only, except on the dedicated sphere pipeline.
    """
    nu = datum.nu
    d = datum.degree
    if nu % 2 != 0:
        return False, f"parity violation: nu={nu} is odd"
    if datum.base == "rp2":
        if nu < d - 1:
            return False, f"nu={nu} below d-1={d - 1}"
        return True, "boundary" if nu == d - 1 else "strict"
    if nu < 2 * d - 2:
        return False, f"nu={nu} below 2d-2={2 * d - 2}: chi(M) would exceed 2"
    return True, "necessary-only"


def realize_rp2(datum: BranchDatum, seed: int = 0) -> HurwitzCertificate:
    """Certificate for an indecomposable covering of the projective plane."""
    if datum.base != "rp2":
        raise InadmissibleError("datum is not over the projective plane")
    d = datum.degree
    if d % 2 == 0:
        raise InadmissibleError(
            "even degree out of scope (covered by the prior even-degree result)"
        )
    full = Partition([d])
    if full in datum.partitions:
        a, us = full_cycle_datum_construct(datum, seed)
    else:
        ok, reason = admissible(datum)
        if not ok:
            raise InadmissibleError(reason)
        if reason == "boundary":
            raise InadmissibleError(
                "boundary defect nu = d-1 without a full-cycle branch point"
            )
        sigmas = fundamental_construct(datum, seed)
        product = compose(*sigmas)
        a = sqrt_odd_cycle(product).inverse()
        us = sigmas
    cert = HurwitzCertificate(
        base="rp2", degree=d, datum=datum, a_image=a, u_images=tuple(us)
    )
    report = verify_certificate(cert)
    if report.verdict != "valid-indecomposable":
        raise VerificationError(f"self-verification failed: {report.verdict}")
    return cert


def realize_sphere(datum: BranchDatum, seed: int = 0) -> HurwitzCertificate:
    """Certificate over the sphere for data led by the near-full partition
    [d-2,1,1] with total defect at least 2d-2."""
    if datum.base != "s2":
        raise InadmissibleError("datum is not over the sphere")
    d = datum.degree
    if d % 2 == 0:
        raise InadmissibleError("even degree out of scope")
    if datum.partitions[0] != Partition([d - 2, 1, 1]):
        raise InadmissibleError("first partition must be [d-2,1,1]")
    nu = datum.nu
    if nu % 2 != 0:
        raise InadmissibleError(f"parity violation: nu={nu} is odd")
    if nu < 2 * d - 2:
        raise InadmissibleError(f"nu={nu} below 2d-2={2 * d - 2}")
    tail = BranchDatum(base="rp2", degree=d, partitions=datum.partitions[1:])
    sigmas = fundamental_construct(tail, seed)
    sigma1 = compose(*sigmas).inverse()
    cert = HurwitzCertificate(
        base="s2",
        degree=d,
        datum=datum,
        a_image=None,
        u_images=(sigma1, *sigmas),
    )
    report = verify_certificate(cert)
    if report.verdict != "valid-indecomposable":
        raise VerificationError(f"self-verification failed: {report.verdict}")
    return cert


def verify_certificate(cert: HurwitzCertificate) -> VerificationReport:
    """Re-derive every claim of the certificate independently of its builder."""
    chi = euler_characteristic(cert.base, cert.degree, cert.datum.nu)

    if cert.base == "rp2":
        total = compose(cert.a_image, cert.a_image, *cert.u_images)
    else:
        total = compose(*cert.u_images)
    relation_ok = total.is_identity()

    cycle_types_ok = all(
        u.cycle_type() == p for u, p in zip(cert.u_images, cert.datum.partitions)
    )

    gens = list(cert.u_images)
    if cert.a_image is not None:
        gens.append(cert.a_image)
    transitive = is_transitive(gens)
    primitive = False
    if transitive and cert.degree >= 2:
        try:
            primitive, _ = is_primitive(gens)
        except GroupError:
            primitive = False

    if not relation_ok:
        verdict, reason = "invalid", "relation violated"
    elif not cycle_types_ok:
        verdict, reason = "invalid", "cycle type mismatch"
    elif not transitive:
        verdict, reason = "invalid", "monodromy not transitive (disconnected cover)"
    elif primitive:
        verdict, reason = "valid-indecomposable", ""
    else:
        verdict, reason = "valid-decomposable", "monodromy imprimitive"
    return VerificationReport(
        relation_ok=relation_ok,
        cycle_types_ok=cycle_types_ok,
        transitive=transitive,
        primitive=primitive,
        chi_M=chi,
        verdict=verdict,
        reason=reason,
    )


# -- certificate text format ----------------------------------------------------


def certificate_to_text(cert: HurwitzCertificate) -> str:
    """Bit-exact line format (LF endings): base, degree, datum, a (rp2 only),
    then one u[i] line per branch point."""
    lines = [
        f"base: {cert.base}",
        f"degree: {cert.degree}",
        f"datum: {cert.datum}",
    ]
    if cert.a_image is not None:
        lines.append(f"a: {format_cycles(cert.a_image)}")
    for i, u in enumerate(cert.u_images, start=1):
        lines.append(f"u[{i}]: {format_cycles(u)}")
    return "\n".join(lines) + "\n"


def certificate_from_text(text: str) -> HurwitzCertificate:
    fields: dict[str, str] = {}
    u_lines: list[tuple[int, str]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"malformed certificate line: {raw!r}")
        key = key.strip()
        if key.startswith("u[") and key.endswith("]"):
            try:
                u_lines.append((int(key[2:-1]), value.strip()))
            except ValueError as exc:
                raise ParseError(f"malformed u index in {raw!r}") from exc
        else:
            fields[key] = value.strip()
    try:
        base = fields["base"]
        degree = int(fields["degree"])
        datum = parse_datum(fields["datum"], base)
    except KeyError as exc:
        raise ParseError(f"certificate missing field {exc}") from exc
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if datum.degree != degree:
        raise ParseError("datum degree disagrees with the degree line")
    u_lines.sort()
    if [i for i, _ in u_lines] != list(range(1, len(u_lines) + 1)):
        raise ParseError("u-lines must be numbered 1..s")
    try:
        us = tuple(parse_cycles(txt, degree) for _, txt in u_lines)
        a = parse_cycles(fields["a"], degree) if "a" in fields else None
    except PermError as exc:
        raise ParseError(str(exc)) from exc
    return HurwitzCertificate(
        base=base, degree=degree, datum=datum, a_image=a, u_images=us
    )
