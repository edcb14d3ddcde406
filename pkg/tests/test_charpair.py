import random
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

import shapes
from oracles import random_unimodular
from orbitor.charpair import (CharacteristicError, CharacteristicPair, all_local_orders,
                              induced_characteristic, local_group_order,
                              local_group_structure, validate_characteristic)
from orbitor.complexes import delete_vertex_subcomplex

CUBE_G = {"v125": 2, "v235": 1, "v345": 2, "v145": 3,
          "v126": 4, "v236": 2, "v346": 4, "v146": 6}
HINT = [(1, 0, 0), (2, 1, 0), (0, 0, 1)]


def test_cube_vertex_orders(cube):
    assert {v: local_group_order(cube, None, v) for v in cube.complex.vertices} == CUBE_G


def test_induced_on_f6_with_hint(cube):
    ind = induced_characteristic(cube, "F6", HINT)
    assert dict(ind.lambda_E) == {"F1": (-1, 1), "F2": (-1, 0), "F3": (0, 1), "F4": (-4, 1)}
    assert local_group_order(cube, "F6", "v236", HINT) == 1
    assert local_group_order(cube, "F6", "v236") == 1


def test_stage_two_orders(cube):
    assert local_group_order(cube, "F5", "v125") == 2
    assert local_group_order(cube, "F4", "v146") == 2
    assert local_group_order(cube, "F3", "v236") == 2


def test_structure_refines_order(cube):
    assert local_group_structure(cube, None, "v146") == (1, 1, 6)
    for (E, v), g in all_local_orders(cube).items():
        assert prod(local_group_structure(cube, E, v)) == g


def test_vertex_as_own_face(cube):
    assert local_group_order(cube, "v146", "v146") == 1


def test_order_values(cube):
    assert set(all_local_orders(cube).values()) == {1, 2, 3, 4, 6}


def test_validation_errors():
    Q = shapes.square()
    good = {"F1": (1, 0), "F2": (0, 1), "F3": (1, 0), "F4": (0, 1)}
    validate_characteristic(CharacteristicPair(Q, good))
    with pytest.raises(CharacteristicError) as e:
        validate_characteristic(CharacteristicPair(Q, {**good, "F2": (1, 0)}))
    assert e.value.face == "v12"
    with pytest.raises(CharacteristicError):
        validate_characteristic(CharacteristicPair(Q, {**good, "F3": (0, 0)}))
    with pytest.raises(CharacteristicError):
        validate_characteristic(CharacteristicPair(Q, {k: v for k, v in good.items() if k != "F4"}))
    with pytest.raises(CharacteristicError):
        validate_characteristic(CharacteristicPair(Q, {**good, "F1": (1, 0, 0)}))
    with pytest.raises(CharacteristicError):
        local_group_order(CharacteristicPair(Q, good), None, "v12")


def test_smooth_cp2():
    pair = validate_characteristic(CharacteristicPair(
        shapes.triangle(), {"F1": (1, 0), "F2": (0, 1), "F3": (-1, -1)}))
    assert set(all_local_orders(pair).values()) == {1}


def _scaled(pair, F, c):
    lam = dict(pair.lam)
    lam[F] = tuple(c * x for x in lam[F])
    return validate_characteristic(CharacteristicPair(pair.complex, lam))


@pytest.mark.parametrize("F", ["F1", "F4", "F6"])
@pytest.mark.parametrize("c", [2, 3, -1])
def test_scaling_one_vector_scales_top_orders(cube, F, c):
    scaled = _scaled(cube, F, c)
    for v in cube.complex.vertices:
        factor = abs(c) if F in cube.complex.face(v).facets else 1
        assert local_group_order(scaled, None, v) == factor * CUBE_G[v]


def test_lower_faces_use_primitive_parts(cube):
    scaled = _scaled(cube, "F4", 5)
    for E in ("F6", "F1^F6"):
        for v in sorted(cube.complex.face(E).vertices):
            assert local_group_order(scaled, E, v) == local_group_order(cube, E, v)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["F1", "F3", "F5", "F2^F5", "F1^F4"]))
def test_basis_hint_does_not_change_orders(cube, seed, E):
    rng = random.Random(seed)
    face = cube.complex.face(E)
    base = induced_characteristic(cube, E).quotient
    k = len(face.facets)
    U = random_unimodular(3 - k, rng)
    # new complement rows: unimodular combination of the default ones
    comp = [base.basis_choice[i] for i in base.complement_rows]
    new_comp = [tuple(sum(U[i][j] * comp[j][t] for j in range(3 - k)) for t in range(3))
                for i in range(3 - k)]
    sub = [base.basis_choice[i] for i in range(3) if i not in base.complement_rows]
    hint = sub + new_comp
    for v in sorted(face.vertices):
        assert local_group_order(cube, E, v, hint) == local_group_order(cube, E, v)


def test_poset_mode_pair():
    P = shapes.disconnected_poset()
    rng = random.Random(11)
    for _ in range(2000):
        lam = {F: tuple(rng.randint(-2, 2) for _ in range(3)) for F in P.facet_labels}
        try:
            pair = validate_characteristic(CharacteristicPair(P, lam))
            break
        except CharacteristicError:
            continue
    else:
        pytest.fail("no valid vector assignment found")
    ind = induced_characteristic(pair, "X")
    assert set(ind.facets_of_E) == {"AB", "BC", "CD", "DE", "EF", "FA"}
    assert ind.facets_of_E["BC"] == ind.facets_of_E["EF"] == "Y"
    assert all(local_group_order(pair, "X", v) >= 1 for v in "ABCDEF")
    B = delete_vertex_subcomplex(P, "A")
    assert "A" not in B.vertices
