import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symqual import io
from symqual.catalog import catalog, entry, generalized_petersen
from symqual.errors import (
    AdjacencyViolated,
    GraphMismatch,
    GroupNotClosed,
    KindMismatch,
    KindUndetermined,
    NonFinite,
    NotBijective,
    ParseError,
    ValidationError,
)
from symqual.graph import (
    AXIAL,
    ROTATIONAL,
    AutomorphismGroup,
    Drawing,
    Graph,
    compose,
    cycles,
    validate_automorphism,
)

PETERSEN_EDGES = [
    (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
    (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
    (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
]


@pytest.fixture
def petersen():
    return Graph(10, PETERSEN_EDGES, name="petersen")


def rot5():
    return [1, 2, 3, 4, 0, 6, 7, 8, 9, 5]


def test_petersen_rotation_is_order5_with_two_orbits(petersen):
    phi = validate_automorphism(petersen, rot5())
    assert phi.kind == ROTATIONAL and phi.order == 5
    assert sorted(len(o) for o in phi.orbits) == [5, 5]
    # independent edge check
    es = {frozenset(e) for e in PETERSEN_EDGES}
    assert all(frozenset((phi(u), phi(v))) in es for u, v in PETERSEN_EDGES)


def test_identity_is_kind_undetermined(petersen):
    with pytest.raises(KindUndetermined):
        validate_automorphism(petersen, range(10))


def test_path_swap_violates_adjacency():
    g = Graph(3, [(0, 1), (1, 2)])
    with pytest.raises(AdjacencyViolated):
        validate_automorphism(g, [1, 0, 2])


def test_not_bijective(petersen):
    with pytest.raises(NotBijective):
        validate_automorphism(petersen, [0] * 10)
    with pytest.raises(NotBijective):
        validate_automorphism(petersen, list(range(9)))


def test_composition_with_inverse_is_identity(petersen):
    phi = validate_automorphism(petersen, rot5())
    with pytest.raises(KindUndetermined):
        compose(phi, phi.inverse())


def test_rotation_squared_is_rotation_by_two(petersen):
    phi = validate_automorphism(petersen, rot5())
    sq = compose(phi, phi)
    assert sq.kind == ROTATIONAL and sq.order == 5
    assert sq.mapping == (2, 3, 4, 0, 1, 7, 8, 9, 5, 6)


def test_two_reflections_compose_to_rotation():
    e = entry("petersen")
    refl = e.group("D5").reflections()
    a, b = refl[0], refl[1]
    c = compose(a, b)
    assert c.kind == ROTATIONAL
    assert c.mapping in {x.mapping for x in e.group("D5")}


def test_axial_hint_on_high_order_is_rejected(petersen):
    with pytest.raises(KindMismatch):
        validate_automorphism(petersen, rot5(), kind=AXIAL)
    with pytest.raises(KindMismatch):
        validate_automorphism(petersen, rot5(), k=4)


def test_half_turn_with_two_fixed_points_cannot_be_rotational():
    # swapping the ends of one edge fixes both vertices of the other
    g = Graph(4, [(0, 1), (2, 3)])
    swap = [1, 0, 2, 3]
    with pytest.raises(KindMismatch):
        validate_automorphism(g, swap, kind=ROTATIONAL)
    assert validate_automorphism(g, swap).kind == AXIAL


def test_element_count_must_match_size(petersen):
    phi = validate_automorphism(petersen, rot5())
    with pytest.raises(ValidationError):
        AutomorphismGroup(petersen, (phi, compose(phi, phi)), "cyclic", 3)


def test_group_not_closed_detected():
    # 4-cycle: half-turn plus two reflections that do not commute into the set
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    half = validate_automorphism(g, [2, 3, 0, 1], kind=ROTATIONAL)
    s1 = validate_automorphism(g, [1, 0, 3, 2])
    s2 = validate_automorphism(g, [0, 3, 2, 1])
    with pytest.raises(GroupNotClosed):
        AutomorphismGroup(g, (half, s1, s2), "dihedral", 4)


def test_generated_dihedral_group_sizes():
    e = entry("petersen")
    grp = e.group("D5")
    assert grp.group_kind == "dihedral" and grp.size == 10
    assert len(grp.reflections()) == 5
    assert grp.rotation_order == 5


def test_graph_construction_errors():
    with pytest.raises(ValidationError):
        Graph(0)
    with pytest.raises(ValidationError):
        Graph(2, [(0, 0)])
    with pytest.raises(ValidationError):
        Graph(2, [(0, 2)])
    with pytest.raises(ValidationError):
        Graph(2, [(0, 1), (1, 0)])


def test_drawing_validation(petersen):
    with pytest.raises(GraphMismatch):
        Drawing(petersen, np.zeros((9, 2)))
    with pytest.raises(NonFinite):
        Drawing(petersen, np.full((10, 2), np.nan))


# -- io ---------------------------------------------------------------------


def test_load_petersen_file():
    data = json.dumps({"name": "petersen", "n": 10, "edges": [list(e) for e in PETERSEN_EDGES]})
    g = io.load_graph(data)
    assert (g.n, g.m) == (10, 15)


def test_trivial_graph_loads():
    g = io.load_graph('{"n": 1, "edges": []}')
    assert g.n == 1 and g.m == 0


def test_duplicate_edge_is_parse_error():
    with pytest.raises(ParseError):
        io.load_graph('{"n": 3, "edges": [[0, 1], [1, 0]]}')


@pytest.mark.parametrize("bad", ['{"n": 3}', '{"n": "3", "edges": []}', "[1, 2", '{"n": 2, "edges": [[0, 1.5]]}'])
def test_malformed_graph_files(bad):
    with pytest.raises(ParseError):
        io.load_graph(bad)


def test_drawing_for_other_graph_is_mismatch(petersen):
    with pytest.raises(GraphMismatch):
        io.load_drawing('{"graph": "other", "positions": []}', petersen)


@pytest.mark.parametrize("e", catalog(), ids=lambda e: e.name)
def test_round_trip(e):
    g = e.graph
    g2 = io.load_graph(io.dumps(g))
    assert g2 == g and io.dumps(g2) == io.dumps(g)
    for grp in e.groups.values():
        grp2 = io.load_group(io.dumps(grp), g)
        assert io.group_to_dict(grp2) == io.group_to_dict(grp)
        phi = grp.elements[0]
        assert io.load_automorphism(io.dumps(phi), g) == phi


def test_dumps_digits_rounds_to_nine_significant():
    assert io.dumps({"x": 1 / 3}, digits=9) == '{"x": 0.333333333}'


# -- properties ---------------------------------------------------------------


def _catalog_elements():
    return [(e.name, el) for e in catalog() for grp in e.groups.values() for el in grp.elements]


@pytest.mark.parametrize("name,phi", _catalog_elements()[:60], ids=lambda x: x if isinstance(x, str) else "")
def test_orbit_size_powers_return_to_start(name, phi):
    for orb in phi.orbits:
        v = orb[0]
        w = v
        for _ in range(len(orb)):
            w = phi(w)
        assert w == v
    assert sum(len(o) for o in phi.orbits) == phi.graph.n


@pytest.mark.parametrize("e", catalog(), ids=lambda e: e.name)
def test_small_groups_closed_exhaustively(e):
    for grp in e.groups.values():
        if grp.size > 24:
            continue
        maps = {x.mapping for x in grp.elements} | {tuple(range(e.graph.n))}
        for a in grp.elements:
            for b in grp.elements:
                assert tuple(a.mapping[v] for v in b.mapping) in maps


@settings(max_examples=60, deadline=None)
@given(st.permutations(list(range(9))))
def test_cycles_partition_any_permutation(p):
    cs = cycles(p)
    assert sorted(v for c in cs for v in c) == list(range(9))
    for c in cs:
        for i, v in enumerate(c):
            assert p[v] == c[(i + 1) % len(c)]


def test_generalized_petersen_sizes():
    g, r, s = generalized_petersen(10, 2, "gp")
    assert (g.n, g.m) == (20, 30)
