from collections import Counter
from fractions import Fraction

import pytest

from banakh.banakh_space import MetricFragment
from banakh.monoid_algebra import MonoidDesc
from banakh.space_builder import (RadiusClass, BuildSpec, Certificate,
                                  SpecRejected, BuildExhausted, build,
                                  verify_certificate)
from banakh.values import SurdValue

ZP = MonoidDesc.fingen([1])
OMEGA = MonoidDesc.closure("omega-minus-1")
SQRT2 = SurdValue(0, {2: 1})


def zp_spec(window=5, seed=1, stages=1):
    return BuildSpec(radii=(RadiusClass(SurdValue(1), ZP),),
                     stages=stages, window=Fraction(window), seed=seed)


# -- request validation -------------------------------------------------------------


def test_spec_rejects_bad_shapes():
    unit = (RadiusClass(SurdValue(1), ZP),)
    with pytest.raises(SpecRejected):
        BuildSpec(radii=unit, stages=0)
    with pytest.raises(SpecRejected):
        BuildSpec(radii=unit, window=Fraction(0))
    with pytest.raises(SpecRejected):
        BuildSpec(radii=(RadiusClass(SurdValue(-1), ZP),))


def test_spec_rejects_non_floppy_value_monoid():
    dpt = MonoidDesc.closure("dyadic-plus-thirds")
    with pytest.raises(SpecRejected, match="not floppy"):
        BuildSpec(radii=(RadiusClass(SurdValue(1), dpt),))


def test_spec_rejects_mixed_surd_radius():
    spec = BuildSpec(radii=(RadiusClass(SurdValue(1, {2: 1}), ZP),))
    with pytest.raises(SpecRejected):
        build(spec)


def test_spec_rejects_window_below_one_step():
    with pytest.raises(SpecRejected, match="window"):
        build(zp_spec(window=Fraction(1, 2)))


def test_canonical_classes_dedupes_rescalings():
    spec = BuildSpec(radii=(RadiusClass(SurdValue(1), ZP),
                            RadiusClass(SurdValue(2),
                                        MonoidDesc.fingen([Fraction(1, 2)]))),
                     window=Fraction(3))
    assert len(spec.canonical_classes()) == 1


def test_canonical_classes_rejects_incompatible_rational_pair():
    spec = BuildSpec(radii=(RadiusClass(SurdValue(1), ZP),
                            RadiusClass(SurdValue(2), ZP)),
                     window=Fraction(3))
    with pytest.raises(SpecRejected, match="rationally related"):
        spec.canonical_classes()


def test_canonical_classes_keeps_incommensurable_radii():
    spec = BuildSpec(radii=(RadiusClass(SurdValue(1), ZP),
                            RadiusClass(SQRT2, ZP)),
                     window=Fraction(2))
    assert len(spec.canonical_classes()) == 2


def test_exception_taxonomy():
    assert issubclass(SpecRejected, ValueError)
    assert issubclass(BuildExhausted, RuntimeError)


# -- degenerate and single-class builds ------------------------------------------------


def test_empty_radius_list_builds_a_single_point():
    frag, cert = build(BuildSpec(radii=()))
    assert frag.points == ("a0",)
    assert cert.realized_distances == [] and cert.stages == []


def test_unit_line_build():
    frag, cert = build(zp_spec())
    assert len(frag.points) == 11
    assert cert.generic_values == []  # nothing generic about a line of integers
    # the distance multiset is exactly that of {-5..5} on the real line
    counts = Counter(v for _, v in frag.pairs())
    assert all(counts[SurdValue(k)] == 11 - k for k in range(1, 11))
    assert cert.sphere_law_ok and cert.growth_ok
    report = verify_certificate(frag, zp_spec(), cert)
    assert report["all_ok"], report


def test_unit_line_sphere_ledger_contents():
    frag, cert = build(zp_spec())
    assert cert.spheres and all(e["diameter_ok"] for e in cert.spheres
                                if e["complete"])
    # the window's interior spheres are complete, the boundary ones are not
    assert any(e["complete"] for e in cert.spheres)
    assert any(not e["complete"] for e in cert.spheres)
    deficient = [e for e in cert.spheres if not e["complete"]]
    assert all(len(e["members"]) == 1 for e in deficient)


def test_build_is_deterministic_per_seed():
    def run(seed):
        spec = BuildSpec(radii=(RadiusClass(SurdValue(1), OMEGA),),
                         stages=1, window=Fraction(7), seed=seed)
        return build(spec)

    f_a, c_a = run(3)
    f_b, c_b = run(3)
    assert sorted(f_a.pairs()) == sorted(f_b.pairs())
    assert c_a.generic_values == c_b.generic_values
    _, c_other = run(4)
    assert c_a.generic_values != c_other.generic_values


def test_generic_gap_build_verifies():
    spec = BuildSpec(radii=(RadiusClass(SurdValue(1), OMEGA),),
                     stages=1, window=Fraction(7), seed=3)
    frag, cert = build(spec)
    assert len(frag.points) == 15
    assert len(cert.generic_values) == 14
    # generic values are genuinely new distances, irrational by construction
    assert all(not v.is_rational() for v in cert.generic_values)
    report = verify_certificate(frag, spec, cert)
    assert report["all_ok"], report
    assert cert.stages[0]["new_vertices"] == 15


def test_incommensurable_two_class_build():
    spec = BuildSpec(radii=(RadiusClass(SurdValue(1), ZP),
                            RadiusClass(SQRT2, ZP)),
                     stages=2, window=Fraction(2), seed=5)
    frag, cert = build(spec)
    assert len(frag.points) == 29
    assert len(cert.stages) == 2
    second = cert.stages[1]
    assert second["copies"] >= 1 and second["union_certified"]
    assert second["new_vertices"] > 0
    report = verify_certificate(frag, spec, cert)
    assert report["all_ok"], report
    # both classes keep their own realized windows
    realized = set(cert.realized_distances)
    assert SurdValue(1) in realized and SQRT2 in realized


# -- independent recheck ------------------------------------------------------------


def _tampered(frag: MetricFragment, key, value) -> MetricFragment:
    table = dict(frag.pairs())
    table[key] = value
    return MetricFragment(frag.points, table)


def test_verifier_catches_edited_distance():
    spec = zp_spec()
    frag, cert = build(spec)
    key = min(k for k, v in frag.pairs() if v == SurdValue(1))
    bad = _tampered(frag, key, SurdValue(Fraction(1, 2)))
    report = verify_certificate(bad, spec, cert)
    assert not report["all_ok"]
    assert not report["distances_match_cert"]
    assert SurdValue(Fraction(1, 2)) in report["stray_distances"]
    assert not report["metric_ok"]


def test_verifier_catches_stripped_generic_log():
    spec = BuildSpec(radii=(RadiusClass(SurdValue(1), OMEGA),),
                     stages=1, window=Fraction(7), seed=3)
    frag, cert = build(spec)
    hollow = Certificate(seed=cert.seed, stages=cert.stages,
                         classes=cert.classes,
                         realized_distances=cert.realized_distances,
                         generic_values=cert.generic_values[1:],
                         spheres=cert.spheres)
    report = verify_certificate(frag, spec, hollow)
    assert not report["all_ok"]
    assert not report["realized_subset_ok"]
    assert report["stray_distances"] == [cert.generic_values[0]]


def test_verifier_catches_edited_sphere_ledger():
    spec = zp_spec()
    frag, cert = build(spec)
    entry = dict(cert.spheres[0])
    entry["members"] = list(reversed(frag.points[:2]))
    forged = Certificate(seed=cert.seed, stages=cert.stages,
                         classes=cert.classes,
                         realized_distances=cert.realized_distances,
                         generic_values=cert.generic_values,
                         spheres=[entry] + cert.spheres[1:])
    report = verify_certificate(frag, spec, forged)
    assert not report["sphere_ledger_ok"] and not report["all_ok"]
