"""Gates, certificate assembly, the verifier, and the text format."""

import pytest

from branchcover.construct import BranchDatum, parse_datum
from branchcover.errors import InadmissibleError, ParseError
from branchcover.perm import Partition, compose, identity, parse_cycles, sqrt_odd_cycle
from branchcover.realize import (
    HurwitzCertificate,
    admissible,
    certificate_from_text,
    certificate_to_text,
    euler_characteristic,
    realize_rp2,
    realize_sphere,
    verify_certificate,
)

P = Partition


def test_admissible_examples():
    ok, reason = admissible(parse_datum("[3,2];[3,2]", "rp2"))
    assert ok and reason == "strict"
    ok, reason = admissible(parse_datum("[3,1,1];[3,1,1]", "rp2"))
    assert ok and reason == "boundary"
    ok, reason = admissible(parse_datum("[2,1];[3]", "rp2"))
    assert not ok and "parity" in reason
    ok, reason = admissible(parse_datum("[3,1,1];[3,2];[3,2]", "s2"))
    assert ok
    ok, reason = admissible(parse_datum("[3,2];[3,2]", "s2"))
    assert not ok and "2d-2" in reason


def test_euler_characteristic_examples():
    assert euler_characteristic("rp2", 5, 6) == -1
    assert euler_characteristic("rp2", 5, 4) == 1  # boundary nu = d-1
    assert euler_characteristic("s2", 3, 4) == 2


def test_realize_rp2_line_one():
    cert = realize_rp2(parse_datum("[3,2];[3,2]", "rp2"))
    assert cert.a_image == parse_cycles("(1 3 5)", 5)
    product = compose(*cert.u_images)
    assert compose(cert.a_image, cert.a_image) == product.inverse()
    report = verify_certificate(cert)
    assert report.verdict == "valid-indecomposable"
    assert report.chi_M == -1


def test_realize_rp2_line_seven():
    cert = realize_rp2(parse_datum("[3,3,3];[3,3,3]", "rp2"))
    assert compose(*cert.u_images) == parse_cycles("(1 4 7 9 6 3 8)", 9)
    assert verify_certificate(cert).verdict == "valid-indecomposable"


def test_realize_rp2_gates():
    with pytest.raises(InadmissibleError):
        realize_rp2(parse_datum("[2,2];[2,2]", "rp2"))  # even degree
    with pytest.raises(InadmissibleError):
        realize_rp2(parse_datum("[3,1,1];[3,1,1]", "rp2"))  # boundary, no [d]
    with pytest.raises(InadmissibleError):
        realize_rp2(parse_datum("[9]", "rp2"))  # composite single branch point
    with pytest.raises(InadmissibleError):
        realize_rp2(parse_datum("[3,2];[3,2]", "s2"))  # wrong base tag


def test_realize_rp2_full_cycle_routes():
    for text, d in (("[5]", 5), ("[5];[5]", 5), ("[3,1,1];[5]", 5), ("[7];[2,2,1,1,1]", 7)):
        cert = realize_rp2(parse_datum(text, "rp2"))
        report = verify_certificate(cert)
        assert report.verdict == "valid-indecomposable", text
        total = compose(cert.a_image, cert.a_image, *cert.u_images)
        assert total.is_identity()


def test_realize_sphere_example():
    cert = realize_sphere(parse_datum("[3,1,1];[3,2];[3,2]", "s2"))
    assert cert.u_images[0] == parse_cycles("(1 5 3)", 5)
    assert compose(*cert.u_images).is_identity()
    report = verify_certificate(cert)
    assert report.verdict == "valid-indecomposable"


def test_realize_sphere_bigger():
    cert = realize_sphere(parse_datum("[7,1,1];[7,1,1];[3,3,3]", "s2"))
    assert verify_certificate(cert).verdict == "valid-indecomposable"


def test_realize_sphere_gates():
    with pytest.raises(InadmissibleError):
        realize_sphere(parse_datum("[3,1,1]", "s2"))  # nu below 2d-2
    with pytest.raises(InadmissibleError):
        realize_sphere(parse_datum("[3,2];[3,2];[3,2]", "s2"))  # wrong head
    with pytest.raises(InadmissibleError):
        realize_sphere(parse_datum("[3,1,1];[3,2];[3,2]", "rp2"))


def test_verifier_tamper_detection():
    cert = realize_rp2(parse_datum("[3,2];[3,2]", "rp2"))
    # replace one u-image by the identity-conjugate of the wrong class
    bad = HurwitzCertificate(
        base=cert.base,
        degree=cert.degree,
        datum=cert.datum,
        a_image=cert.a_image,
        u_images=(cert.u_images[0], parse_cycles("(1 2 3 4 5)", 5)),
    )
    report = verify_certificate(bad)
    assert report.verdict.startswith("invalid")

    # tampered a-line: relation must fail
    bad_a = HurwitzCertificate(
        base=cert.base,
        degree=cert.degree,
        datum=cert.datum,
        a_image=parse_cycles("(1 2)", 5),
        u_images=cert.u_images,
    )
    report = verify_certificate(bad_a)
    assert not report.relation_ok
    assert report.verdict == "invalid" and report.reason == "relation violated"


def test_verifier_valid_decomposable_cyclic():
    gamma = parse_cycles("(1 2 3 4 5 6 7 8 9)", 9)
    a = sqrt_odd_cycle(gamma.inverse())
    cert = HurwitzCertificate(
        base="rp2",
        degree=9,
        datum=parse_datum("[9]", "rp2"),
        a_image=a,
        u_images=(gamma,),
    )
    report = verify_certificate(cert)
    assert report.relation_ok and report.transitive and not report.primitive
    assert report.verdict == "valid-decomposable"


def test_verifier_chi_arithmetic():
    cert = realize_rp2(parse_datum("[3,2];[3,2];[2,2,1]", "rp2"))
    report = verify_certificate(cert)
    assert report.chi_M == 5 - 8 == -3
    assert report.chi_M <= 0


def test_certificate_text_round_trip():
    for text, base in (("[3,2];[3,2]", "rp2"), ("[3,1,1];[3,2];[3,2]", "s2")):
        datum = parse_datum(text, base)
        cert = realize_rp2(datum) if base == "rp2" else realize_sphere(datum)
        blob = certificate_to_text(cert)
        assert blob.endswith("\n") and "\r" not in blob
        back = certificate_from_text(blob)
        assert back == cert
        assert certificate_to_text(back) == blob


def test_certificate_format_exact():
    cert = realize_rp2(parse_datum("[3,2];[3,2]", "rp2"))
    assert certificate_to_text(cert) == (
        "base: rp2\n"
        "degree: 5\n"
        "datum: [3,2];[3,2]\n"
        "a: (1 3 5)\n"
        "u[1]: (1 2 3)(4 5)\n"
        "u[2]: (1 5 4)(2 3)\n"
    )


def test_certificate_parse_errors():
    with pytest.raises(ParseError):
        certificate_from_text("degree: 5\n")
    with pytest.raises(ParseError):
        certificate_from_text("base: rp2\ndegree: 5\ndatum: [3,2];[3,2]\nnonsense\n")
    with pytest.raises(ParseError):
        certificate_from_text(
            "base: rp2\ndegree: 5\ndatum: [3,2];[3,2]\na: ()\nu[2]: ()\n"
        )


def test_certificate_structural_invariants():
    datum = parse_datum("[3,2];[3,2]", "rp2")
    with pytest.raises(ParseError):
        HurwitzCertificate(
            base="rp2", degree=5, datum=datum, a_image=None, u_images=(identity(5),) * 2
        )
    with pytest.raises(ParseError):
        HurwitzCertificate(
            base="s2",
            degree=5,
            datum=BranchDatum("s2", 5, datum.partitions),
            a_image=identity(5),
            u_images=(identity(5),) * 2,
        )
