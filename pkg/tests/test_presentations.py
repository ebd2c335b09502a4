from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from prodquot.catalog import GroupId, identify, parse_catalog, validate_catalog
from prodquot.constructors import (
    PermGenSet,
    alternating,
    cyclic,
    dihedral,
    direct_product,
    group_from_permutations,
    metacyclic,
    quaternion8,
    semidirect_product,
    symmetric,
)
from prodquot.errors import CapExceeded, GroupError, InvalidParameters, PresentationSyntaxError
from prodquot.morphisms import are_isomorphic, automorphism_group
from prodquot.presentation import (
    Presentation,
    format_presentation,
    free_reduce,
    parse_presentation,
    presentation_from_file,
)
from prodquot.todd_coxeter import coset_enumeration, group_from_presentation

PRES_DIR = resources.files("prodquot") / "data" / "presentations"

SHIPPED = {
    "d283.pres": (16, 8),
    "d285.pres": (16, 6),
    "z4_z2z2.pres": (16, 3),
    "g32_5.pres": (32, 5),
    "g64_33.pres": (64, 33),
    "g64_35.pres": (64, 35),
    "g64_37.pres": (64, 37),
}


def test_parse_metacyclic_presentation():
    p = parse_presentation("gens: x,y; rel: x^2=1; rel: y^8=1; rel: x*y*x^-1=y^3;")
    assert p.generators == ("x", "y")
    assert len(p.relators) == 3


def test_parse_trivial_and_klein():
    p = parse_presentation("gens: a; rel: a=1;")
    assert p.relators == (((0, 1),),)
    k = parse_presentation("gens: x,y; rel: [x,y]=1; rel: x^2=1; rel: y^2=1;")
    assert k.relators[0] == ((0, 1), (1, 1), (0, -1), (1, -1))
    assert group_from_presentation(k).order == 4


def test_chained_equalities_and_comments():
    p = parse_presentation("# comment\ngens: a, b;  # two\nrel: a^2 = b^3 = 1;\n")
    assert len(p.relators) == 2


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("gens: x;\nrel: x^2 = y;", 2, 12),
        ("gens: ;", 1, 7),
        ("gens: x;\nrel: x^ = 1;", 2, 9),
        ("gens: x, x;", 1, 10),
        ("rel: x = 1;", 1, 1),
    ],
)
def test_syntax_errors_report_position(text, line, column):
    with pytest.raises(PresentationSyntaxError) as err:
        parse_presentation(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_unknown_generator_is_named():
    with pytest.raises(PresentationSyntaxError, match="unknown generator 'y'"):
        parse_presentation("gens: x; rel: y = 1;")


letters = st.tuples(st.integers(0, 2), st.sampled_from([1, -1]))


@settings(max_examples=200)
@given(st.lists(st.lists(letters, min_size=1, max_size=12), max_size=5))
def test_format_parse_round_trip(words):
    rels = tuple(w for w in (free_reduce(w) for w in words) if w)
    p = Presentation(("a", "b", "c"), rels)
    assert parse_presentation(format_presentation(p)) == p


@pytest.mark.parametrize("name, gid", sorted(SHIPPED.items()))
def test_shipped_presentations(name, gid, catalog):
    p = presentation_from_file(PRES_DIR / name)
    perms = coset_enumeration(p)
    assert perms.degree == gid[0]
    G = group_from_presentation(p)
    assert G.order == gid[0]
    assert identify(G, catalog) == GroupId(*gid)


def test_trivial_presentation_has_one_coset(catalog):
    p = parse_presentation("gens: a; rel: a=1;")
    assert coset_enumeration(p).degree == 1
    assert identify(group_from_presentation(p), catalog) == GroupId(1, 1)


def test_coset_cap():
    free = parse_presentation("gens: a, b; rel: a^2 = 1;")
    with pytest.raises(CapExceeded):
        coset_enumeration(free, coset_cap=500)
    with pytest.raises(ValueError):
        coset_enumeration(free, coset_cap=0)


def test_presented_generators_are_recorded():
    p = parse_presentation("gens: x, y; rel: x^2 = y^8 = 1; rel: x*y*x^-1 = y^3;")
    G = group_from_presentation(p)
    x, y = G.generator_hint
    assert G.elem_order[x] == 2 and G.elem_order[y] == 8
    assert G.conjugate(x, y) == G.power(y, 3)


def test_group_from_permutations():
    Z3 = group_from_permutations(PermGenSet(3, ((1, 2, 0),)))
    assert Z3.order == 3 and Z3.is_abelian
    assert group_from_permutations(PermGenSet(4, ())).order == 1
    with pytest.raises(GroupError):
        group_from_permutations(PermGenSet(6, ((1, 0, 2, 3, 4, 5), (1, 2, 3, 4, 5, 0))), cap=100)
    with pytest.raises(GroupError):
        PermGenSet(3, ((0, 0, 1),))


def test_catalog_entry_24_5_is_metacyclic(catalog):
    e = catalog.entries[GroupId(24, 5)]
    G = group_from_permutations(e.perm_gens)
    assert identify(G, catalog) == (24, 5)
    assert are_isomorphic(G, metacyclic(2, 12, 5))


@pytest.mark.parametrize(
    "G, order",
    [
        (cyclic(9), 9),
        (dihedral(6), 12),
        (metacyclic(3, 7, 2), 21),
        (quaternion8(), 8),
        (symmetric(5), 120),
        (alternating(5), 60),
        (direct_product(symmetric(3), cyclic(4)), 24),
    ],
)
def test_constructor_orders(G, order):
    assert G.order == order
    assert G.verify_axioms()


def test_metacyclic_rejects_bad_parameters():
    with pytest.raises(InvalidParameters):
        metacyclic(2, 8, 2)


def test_named_constructors_identify(catalog):
    assert identify(metacyclic(2, 12, 5), catalog) == (24, 5)
    assert identify(dihedral(4), catalog) == (8, 3)
    assert identify(direct_product(cyclic(2), cyclic(4)), catalog) == (8, 2)
    assert identify(symmetric(4), catalog) == (24, 12)
    assert identify(cyclic(1), catalog) == (1, 1)
    K = direct_product(cyclic(2), cyclic(2))
    assert K.order == 4 and K.is_abelian


def test_semidirect_with_trivial_action_is_direct():
    A, B = cyclic(3), symmetric(3)
    ident = automorphism_group(B)[0]
    S = semidirect_product(A, B, [ident] * A.order)
    assert are_isomorphic(S, direct_product(B, A))


def test_semidirect_dihedral():
    A, B = cyclic(2), cyclic(5)
    neg = tuple((-x) % 5 for x in range(5))
    S = semidirect_product(A, B, [tuple(range(5)), neg])
    assert are_isomorphic(S, dihedral(5))
    with pytest.raises(InvalidParameters):
        semidirect_product(cyclic(3), B, [tuple(range(5)), neg, neg])


def test_catalog_round_trip(catalog):
    for order in (1, 8, 24, 36):
        for i in catalog.ids_of_order(order):
            G = group_from_permutations(catalog.entries[GroupId(order, i)].perm_gens)
            assert identify(G, catalog) == (order, i)


def _mini_catalog(lines):
    return parse_catalog(("\n".join(lines) + "\n").encode())


D4_LINE = '{"order":8,"id":3,"degree":4,"gens":[[2,3,4,1],[4,3,2,1]]}'


def test_validation_accepts_d4_entry():
    cat = _mini_catalog([D4_LINE])
    report = validate_catalog(cat)
    assert report.ok
    assert report.incomplete_orders == [8]


def test_validation_checks_manifest_counts(catalog):
    assert len(catalog.ids_of_order(36)) == catalog.manifest[36] == 14
    assert len(catalog.ids_of_order(24)) == catalog.manifest[24] == 15
    lines = [D4_LINE, '{"manifest":true,"order":8,"count":5}']
    report = validate_catalog(_mini_catalog(lines))
    assert not report.ok
    assert any("manifest declares 5" in e for e in report.errors)


def test_validation_finds_order_mismatch_and_duplicates():
    bad = '{"order":8,"id":1,"degree":4,"gens":[[2,1,3,4]]}'
    report = validate_catalog(_mini_catalog([bad]))
    assert any("order 2" in e for e in report.errors)
    dup = [
        '{"order":2,"id":1,"degree":2,"gens":[[2,1]]}',
        '{"order":2,"id":2,"degree":3,"gens":[[2,1,3]]}',
        '{"manifest":true,"order":2,"count":2}',
    ]
    report = validate_catalog(_mini_catalog(dup))
    assert any("isomorphic" in e for e in report.errors)


def test_validation_of_empty_catalog():
    report = validate_catalog(parse_catalog(b""))
    assert report.errors == ["catalog is empty"]


def test_identify_requires_complete_order():
    from prodquot.errors import OrderIncomplete

    cat = _mini_catalog([D4_LINE])
    with pytest.raises(OrderIncomplete):
        identify(dihedral(4), cat)
