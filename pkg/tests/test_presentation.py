from itertools import combinations

import pytest

import shapes
from orbitor.charpair import CharacteristicPair, validate_characteristic
from orbitor.complexes import ComplexError
from orbitor.presentation import (PresentationRefused, emit_presentation,
                                  linear_relation_forms, stanley_reisner_generators)
from orbitor.retraction import per_prime_verdict


def _meets(Q, S):
    return any(set(S) <= Q.face(v).facets for v in Q.vertices)


@pytest.mark.parametrize("make", [shapes.triangle, shapes.square, shapes.cube,
                                  shapes.prism, shapes.tetrahedron])
def test_generators_are_minimal_non_faces(make):
    Q = make()
    gens = stanley_reisner_generators(Q)
    for g in gens:
        assert not _meets(Q, g)
        assert all(_meets(Q, S) for S in combinations(g, len(g) - 1))
    for k in range(1, len(Q.facet_labels) + 1):
        for S in combinations(Q.facet_labels, k):
            if not _meets(Q, S):
                assert any(set(g) <= set(S) for g in gens)


def test_known_generators():
    assert stanley_reisner_generators(shapes.cube()) == [("F1", "F3"), ("F2", "F4"), ("F5", "F6")]
    assert stanley_reisner_generators(shapes.triangle()) == [("F1", "F2", "F3")]
    prism = {frozenset(g) for g in stanley_reisner_generators(shapes.prism())}
    assert prism == {frozenset({"Bot", "T"}), frozenset({"S1", "S2", "S3"})}


def test_poset_mode_rejected():
    with pytest.raises(ComplexError):
        stanley_reisner_generators(shapes.disconnected_poset())


def test_linear_forms_of_cube(cube):
    forms = linear_relation_forms(cube)
    assert [f.coefficients for f in forms] == [(0, 0, 0, 0, 1, 2), (1, 1, 0, 2, 0, 1),
                                               (2, 0, 1, 1, 0, 0)]
    xs = [f"x{i}" for i in range(1, 7)]
    assert [f.render(xs) for f in forms] == ["x5 + 2*x6", "x1 + x2 + 2*x4 + x6",
                                             "2*x1 + x3 + x4"]
    for j, f in enumerate(forms):
        assert all(f.coefficients[i] == cube.lam[F][j]
                   for i, F in enumerate(cube.complex.facet_labels))


def test_cube_presentation(cube):
    data = emit_presentation(cube, per_prime_verdict(cube))
    assert len(data.sr_generators) == 3 and len(data.linear_forms) == 3
    assert data.weighted_caveat
    d = data.to_dict()
    assert d["sr_generators"] == ["x1*x3", "x2*x4", "x5*x6"]
    assert "caveat" in data.render()


def test_smooth_clears_caveat():
    pair = validate_characteristic(CharacteristicPair(
        shapes.triangle(), {"F1": (1, 0), "F2": (0, 1), "F3": (-1, -1)}))
    data = emit_presentation(pair, per_prime_verdict(pair))
    assert not data.weighted_caveat
    assert data.to_dict()["linear_forms"] == ["x1 - x3", "x2 - x3"]


def test_refusal_and_non_primitive_flag():
    lam = {"F1": (2, 1), "F2": (0, 1), "F3": (2, 1), "F4": (0, 1)}
    pair = validate_characteristic(CharacteristicPair(shapes.square(), lam))
    with pytest.raises(PresentationRefused) as e:
        emit_presentation(pair, per_prime_verdict(pair))
    assert e.value.to_dict()["status"] == "refused"
    lam = {"F1": (1, 0), "F2": (0, 1), "F3": (-3, 0), "F4": (0, 1)}
    pair = validate_characteristic(CharacteristicPair(shapes.square(), lam))
    data = emit_presentation(pair, per_prime_verdict(pair))
    assert data.non_primitive == ("F3",)
