from itertools import combinations, product

import pytest

from wgc.categories import (
    BoundExceeded, CategoryId, EasyGroupId, category_name, category_of, closure,
    enumerate_category, member, parse_category, parse_group,
)
from wgc.partitions import (
    BLACK, WHITE, Partition, basic_crossing, enumerate_partitions, half_crossing, interval,
    kernel, parse_partition, parse_word, signature,
)


def two_row_partitions(max_points: int, colored: bool = False) -> list[Partition]:
    out = []
    for n in range(max_points + 1):
        for p in enumerate_partitions(n):
            for upper in range(n + 1):
                if colored:
                    for colors in product((WHITE, BLACK), repeat=n):
                        out.append(Partition(p.labels, upper, colors))
                else:
                    out.append(Partition(p.labels, upper))
    return out


def coarsenings(p: Partition) -> list[Partition]:
    return interval(p, Partition((0,) * p.size, p.upper, p.colors)) if p.size else [p]


def subpartitions(p: Partition) -> list[Partition]:
    """Restrictions of p to unions of some of its blocks, kept in clockwise order."""
    cw = p.clockwise()
    out = []
    for r in range(1, p.n_blocks + 1):
        for chosen in combinations(range(p.n_blocks), r):
            out.append(Partition.from_labels(p.labels[q] for q in cw if p.labels[q] in chosen))
    return out


# ------------------------------------------------------------ enumeration

def test_spec_counts():
    w = parse_word
    assert len(enumerate_category(CategoryId("NC2"), w("oooo"))) == 2
    assert len(enumerate_category(CategoryId("NC2"), w("oxox"))) == 2
    assert len(enumerate_category(CategoryId("NC2colored"), w("oxox"))) == 2
    assert len(enumerate_category(CategoryId("NC2colored"), w("ooxx"))) == 1
    assert len(enumerate_category(CategoryId("Peven"), w("oooooo"))) == 31


def test_orthogonal_categories_ignore_colors():
    c = CategoryId("P2")
    assert [p.labels for p in enumerate_category(c, parse_word("oxxo"))] == \
        [p.labels for p in enumerate_category(c, parse_word("oooo"))]


@pytest.mark.parametrize("tag", ["P", "NC", "P2", "NC2", "P2star", "Peven", "NCeven",
                                 "PevenStar", "PevenInfty", "P12", "NC12"])
def test_enumeration_equals_member_filter(tag):
    c = CategoryId(tag)
    for k in range(7):
        expected = [p for p in enumerate_partitions(k) if member(c, p)]
        assert enumerate_category(c, (0,) * k) == expected


def test_colored_enumeration_equals_member_filter():
    for tag in ("P2colored", "NC2colored", "P2starColored", "PevenColored", "P2bar"):
        c = CategoryId(tag)
        for word in product((0, 1), repeat=4):
            expected = [p.with_colors(word) for p in enumerate_partitions(4)
                        if member(c, p.with_colors(word))]
            assert enumerate_category(c, word) == expected


def test_bound():
    with pytest.raises(BoundExceeded):
        enumerate_category(CategoryId("P2"), (0,) * 14)


def test_bound_from_environment(monkeypatch):
    monkeypatch.setenv("WGC_MAX_POINTS", "4")
    with pytest.raises(BoundExceeded):
        enumerate_category(CategoryId("NC2"), (0,) * 6)


# -------------------------------------------------------------- inclusions

@pytest.mark.parametrize("small, big", [
    ("NC2", "P2star"), ("P2star", "P2"), ("P2", "Peven"), ("NC2", "NCeven"),
    ("NCeven", "PevenInfty"), ("PevenInfty", "PevenStar"), ("PevenStar", "Peven"),
    ("P2star", "PevenStar"), ("NC12", "P12"), ("P12", "P"), ("NC", "P"), ("NCeven", "NC"),
    ("NC2colored", "P2starColored"), ("P2starColored", "P2colored"),
    ("P2colored", "P2bar"), ("P2colored", "PevenColored"),
])
def test_lattice_inclusions(small, big):
    colored = CategoryId(small).colored
    for q in two_row_partitions(5 if colored else 7, colored):
        if member(CategoryId(small), q):
            assert member(CategoryId(big), q)


def test_p2_mod_limits():
    for p in two_row_partitions(6):
        for w in product((0, 1), repeat=p.size):
            q = p.with_colors(w)
            if q.is_pairing:
                assert member(CategoryId("P2mod", 1), q) == member(CategoryId("P2"), q)
                assert member(CategoryId("P2mod", None), q) == member(CategoryId("P2bar"), q)


def test_peven_block_mod_limits():
    for p in enumerate_partitions(6, "even"):
        for w in product((0, 1), repeat=p.size):
            q = p.with_colors(w)
            assert member(CategoryId("PevenBlockMod", 2), q) == member(CategoryId("Peven"), q)
            assert member(CategoryId("PevenBlockMod", None), q) == \
                member(CategoryId("PevenColored"), q)


def test_half_crossing_in_p2star():
    assert member(CategoryId("P2star"), half_crossing())
    assert not member(CategoryId("P2star"), basic_crossing())


# ---------------------------------------------- signature characterisations

def all_even(max_points: int) -> list[Partition]:
    return [p for p in two_row_partitions(max_points) if p.is_even]


def test_peven_star_by_two_block_signatures():
    """Up to six points membership equals: every two-block coarsening has signature one."""
    star = CategoryId("PevenStar")
    for p in all_even(6):
        oracle = all(signature(t) == 1 for t in coarsenings(p) if t.n_blocks == 2)
        assert member(star, p) == oracle


def test_peven_infty_by_signatures():
    """Up to six points membership equals: every coarsening has signature one."""
    infty = CategoryId("PevenInfty")
    for p in all_even(6):
        assert member(infty, p) == all(signature(t) == 1 for t in coarsenings(p))


def test_peven_infty_by_subpartitions():
    star, infty = CategoryId("PevenStar"), CategoryId("PevenInfty")
    for p in enumerate_partitions(8, "even"):
        assert member(infty, p) == all(member(star, s) for s in subpartitions(p))


def test_signatures_do_not_characterise_on_eight_points():
    """Two interleaved fourfold blocks: every coarsening has signature one, yet the
    word abababab is not trivial in Z2 * Z2 and each block is unbalanced under the
    alternating labelling.  In the half-classical 2x2 model x = [[0, z], [z*, 0]] the
    relation it encodes fails, so membership follows the block rules."""
    p = parse_partition("1357|2468")
    assert all(signature(t) == 1 for t in coarsenings(p))
    assert not member(CategoryId("PevenStar"), p)
    assert not member(CategoryId("PevenInfty"), p)
    bad = [q for q in all_even(8)
           if member(CategoryId("PevenInfty"), q) != all(signature(t) == 1
                                                          for t in coarsenings(q))]
    assert {Partition.from_labels(q.labels[n] for n in q.clockwise()) for q in bad} == {p}


# ----------------------------------------------------------------- closure

def members_up_to(c: CategoryId, max_points: int, colored: bool = False) -> set[Partition]:
    return {p for p in two_row_partitions(max_points, colored) if member(c, p)}


def test_closure_of_nothing_is_nc2():
    got = closure([], max_points=8)
    assert len(got) == 175
    assert set(got) == members_up_to(CategoryId("NC2"), 8)


def test_closure_of_crossing_is_p2():
    assert set(closure([basic_crossing()], max_points=6)) == members_up_to(CategoryId("P2"), 6)


def test_closure_of_half_crossing_is_p2star():
    got = set(closure([half_crossing()], max_points=6))
    assert got == members_up_to(CategoryId("P2star"), 6)


def test_closure_of_fourfold_block_is_nceven():
    fork = Partition((0, 0, 0, 0), 2)
    assert set(closure([fork], max_points=6)) == members_up_to(CategoryId("NCeven"), 6)


def test_closure_of_half_crossing_and_fork_is_peven_star():
    fork = Partition((0, 0, 0, 0), 2)
    got = set(closure([half_crossing(), fork], max_points=6))
    assert got == members_up_to(CategoryId("PevenStar"), 6)


def test_closure_of_eta_is_peven_infty():
    eta = kernel((1, 1, 2), (2, 1, 1))
    assert set(closure([eta], max_points=6)) == members_up_to(CategoryId("PevenInfty"), 6)


def test_closure_singleton_gives_nc12():
    single = Partition((0,), 0)
    assert set(closure([single], max_points=5)) == members_up_to(CategoryId("NC12"), 5)


def test_closure_singleton_and_fork_gives_nc():
    single, fork = Partition((0,), 0), Partition((0, 0, 0), 2)
    assert set(closure([single, fork], max_points=4)) == members_up_to(CategoryId("NC"), 4)


def test_colored_closure_is_colored_nc2():
    got = set(closure([], max_points=4, colored=True))
    assert got == members_up_to(CategoryId("NC2colored"), 4, colored=True)


def test_colored_closure_of_crossings_is_colored_p2():
    crossings = [basic_crossing().with_colors(w + w[::-1]) for w in product((0, 1), repeat=2)]
    got = set(closure(crossings, max_points=4, colored=True))
    assert got == members_up_to(CategoryId("P2colored"), 4, colored=True)


def test_closure_is_fixed_point():
    first = closure([half_crossing()], max_points=6)
    assert closure(first, max_points=6) == first


# ------------------------------------------------------------- easy groups

@pytest.mark.parametrize("group, tag", [
    (("O", "classical"), "P2"), (("O", "free"), "NC2"), (("S", "free"), "NC"),
    (("H", "half"), "PevenStar"), (("U", "classical"), "P2colored"),
    (("K", "half"), "PevenStarColored"), (("B", "classical"), "P12"),
])
def test_category_of(group, tag):
    assert category_of(EasyGroupId(*group)) == CategoryId(tag)


def test_missing_half_liberations():
    for family in ("S", "B"):
        with pytest.raises(ValueError):
            EasyGroupId(family, "half")


@pytest.mark.parametrize("name", ["p2", "nc2", "p2*", "p2bar", "p2^r=3", "peven", "nceven",
                                  "peven[inf]", "peven(s=4)", "p", "nc", "p12", "nc12",
                                  "peven^r=2", "p2^r=inf", "cpeven*"])
def test_category_names_round_trip(name):
    assert category_name(parse_category(name)) == name


@pytest.mark.parametrize("alias", ["o", "o*", "o+", "u", "u*", "u+", "h", "h+", "k", "k+",
                                   "s", "s+", "b", "b+"])
def test_group_aliases(alias):
    g = parse_group(alias)
    assert str(g) == alias
    assert parse_category(alias) == category_of(g)
    assert parse_group("~" + alias).twisted


def test_bad_names():
    for bad in ("q2", "p2^r=0", "peven(s=3)", "s*", "peven(s=4"):
        with pytest.raises(ValueError):
            parse_category(bad)


def test_text_of_members():
    assert str(enumerate_category(CategoryId("NC2"), (0,) * 4)[1]) == "14|23"
    assert parse_partition("ab/ba") == basic_crossing()
