"""Tests for the Bruhat-Tits tree: edges, action, paths, open sets."""

import random

import pytest

from padicbianchi import btree as bt
from padicbianchi import field as fld
from padicbianchi import msymb as ms
from padicbianchi.field import QuadInt


def qi(a, b=0):
    return QuadInt(a, b, 1)


@pytest.fixture(scope="module")
def tree11():
    return bt.Tree(fld.split_prime(11, 1))


@pytest.fixture(scope="module")
def tree3():
    return bt.Tree(fld.split_prime(3, 1))


def random_glmat(rng):
    while True:
        g = (
            (qi(rng.randint(-9, 9), rng.randint(-9, 9)),
             qi(rng.randint(-9, 9), rng.randint(-9, 9))),
            (qi(rng.randint(-9, 9), rng.randint(-9, 9)),
             qi(rng.randint(-9, 9), rng.randint(-9, 9))),
        )
        if fld.mat_det(g):
            return g


class TestAction:
    def test_identity(self, tree11):
        e = tree11.standard_edge()
        ident = ((qi(1), qi(0)), (qi(0), qi(1)))
        assert bt.act(ident, e) == e

    def test_alpha_reverses_standard_edge(self, tree11):
        e = tree11.standard_edge()
        assert bt.act(tree11.alpha(), e) == e.reverse()

    def test_singular_rejected(self, tree11):
        zero = ((qi(0), qi(0)), (qi(0), qi(0)))
        with pytest.raises(ValueError):
            bt.act(zero, tree11.standard_edge())

    def test_composition_and_parity(self, tree11):
        rng = random.Random(1)
        e = tree11.standard_edge()
        for i in range(100):
            g, h = random_glmat(rng), random_glmat(rng)
            assert bt.act(fld.mat_mul(g, h), e) == bt.act(g, bt.act(h, e))
            vdet = tree11.val(fld.mat_det(g))
            assert bt.act(g, e).parity() == (e.parity() + vdet) % 2
            if i % 7 == 0:
                e = bt.act(g, e)

    def test_equality_via_canonical_forms(self, tree11):
        # scalars and Iwahori elements stabilize e_*
        e = tree11.standard_edge()
        scalar = ((qi(3, 1), qi(0)), (qi(0), qi(3, 1)))
        iwahori = ((qi(2), qi(5, 3)), (qi(11), qi(1, 2)))
        assert fld.mat_det(iwahori)
        assert bt.act(scalar, e) == e
        assert bt.act(iwahori, e) == e


class TestNeighbors:
    def test_count_inert_3(self, tree3):
        nb = bt.neighbors_with_target(tree3.standard_vertex())
        assert len(nb) == 10
        assert len(set(x.key() for x in nb)) == 10
        assert all(x.target() == tree3.standard_vertex() for x in nb)

    def test_count_split(self):
        t = bt.Tree(fld.split_prime(5, 1))
        assert len(bt.neighbors_with_target(t.standard_vertex())) == 6

    def test_partition(self, tree3):
        # the open sets U(e), t(e) = v_*, partition P^1
        nb = bt.neighbors_with_target(tree3.standard_vertex())
        rng = random.Random(2)
        pts = [(qi(1), qi(0))]
        while len(pts) < 60:
            n = qi(rng.randint(-200, 200), rng.randint(-200, 200))
            d = qi(rng.randint(-200, 200), rng.randint(-200, 200))
            if n or d:
                pts.append((n, d))
        for n, d in pts:
            assert sum(1 for e in nb if e.contains(n, d)) == 1

    def test_partition_depth2(self, tree3):
        # same at every vertex at distance <= 2 from v_*
        rng = random.Random(3)
        level1 = [e.source() for e in bt.neighbors_with_target(tree3.standard_vertex())]
        for v in level1[:4]:
            nb = bt.neighbors_with_target(v)
            for _ in range(30):
                n = qi(rng.randint(-100, 100), rng.randint(-100, 100))
                d = qi(rng.randint(-100, 100), rng.randint(-100, 100))
                if n or d:
                    assert sum(1 for e in nb if e.contains(n, d)) == 1

    def test_up_coset_edges(self, tree11):
        # the inverses of the U_p coset representatives move e_* onto
        # exactly the child edges of v_*
        es = tree11.standard_edge()
        reps = ms.hecke_reps(tree11.pi, qi(11), 1)
        moved = set()
        for dlt in reps:
            (a, b), (c, d) = dlt
            inv = ((d, -b), (-c, a))
            moved.add(bt.act(inv, es).key())
        vs = tree11.standard_vertex()
        children = set(
            x.key() for x in bt.neighbors_with_target(vs) if x != es.reverse()
        )
        assert moved == children


class TestPaths:
    def test_trivial(self, tree11):
        v = tree11.standard_vertex()
        assert bt.path(v, v) == []
        e = tree11.standard_edge()
        assert bt.path(v, e.target()) == [e]

    def test_chain(self, tree11):
        v = tree11.standard_vertex()
        w = tree11.vertex(3, qi(5, 2), qi(1))
        pth = bt.path(v, w)
        assert len(pth) == bt.distance(v, w) == 3
        assert pth[0].source() == v and pth[-1].target() == w
        for a, b in zip(pth, pth[1:]):
            assert a.target() == b.source()

    def test_reversal(self, tree11):
        v = tree11.standard_vertex()
        w = tree11.vertex(2, qi(7, 1), qi(3))
        fwd = bt.path(v, w)
        back = bt.path(w, v)
        assert [x.key() for x in back] == [x.reverse().key() for x in reversed(fwd)]


class TestCuspPairPath:
    # for c = (3), v = 1 the order of 11 mod 3 is 1, so s = 2 and the
    # embedding matrix is [[1, 40], [0, 121]] modulo scalars
    GAMMA = ((qi(1), qi(40)), (qi(0), qi(121)))

    def test_shift_by_s(self, tree11):
        ej = bt.cusp_pair_path(tree11, qi(3), qi(1), -3, 5)
        ejd = dict(zip(range(-3, 6), ej))
        for j in range(-3, 4):
            assert bt.act(self.GAMMA, ejd[j]) == ejd[j + 2]

    def test_membership_levels(self, tree11):
        ej = bt.cusp_pair_path(tree11, qi(3), qi(1), -3, 5)
        ejd = dict(zip(range(-3, 6), ej))
        for j in range(-2, 4):
            # t with val(3t + 1) exactly -j
            if j <= 0:
                tn, td = qi(11 ** (-j) - 1), qi(3)
            else:
                tn, td = qi(1 - 11 ** j), qi(3 * 11 ** j)
            assert ejd[j].contains(tn, td)
            assert not ejd[j - 1].contains(tn, td)

    def test_geodesic_length(self, tree11):
        v = tree11.standard_vertex()
        assert bt.distance(v, bt.act_vertex(self.GAMMA, v)) == 2

    def test_coprimality_checked(self, tree11):
        with pytest.raises(ValueError):
            bt.cusp_pair_path(tree11, qi(11), qi(1), 0, 1)
        with pytest.raises(ValueError):
            bt.cusp_pair_path(tree11, qi(9), qi(3), 0, 1)


def test_dot_output(tree3):
    out = bt.dot_neighborhood(tree3, 2)
    assert out.startswith("graph btree {")
    assert out.count("--") == 10 + 10 * 9
    with pytest.raises(ValueError):
        bt.dot_neighborhood(tree3, 4)
