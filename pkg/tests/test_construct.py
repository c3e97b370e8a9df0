import itertools
import random

import pytest

from digifreeze.construct import (
    CubeDecomposition,
    CubeSpec,
    boundary_minimality_witness,
    c1_freezing_set,
    close_neighbor_witness,
    close_neighbors,
    cn_freezing_set,
    corners,
    is_close_neighbor,
    mandatory_certificates,
    mandatory_points,
    trivial_decomposition,
    validate_decomposition,
)
from digifreeze.errors import DecompositionError, DisconnectedImageError, PreconditionError
from digifreeze.lattice import DigitalImage, boundary, closed_neighbors, is_connected, neighbors
from digifreeze.maps import apply_iso_to_set, fixed_points, is_continuous

from conftest import CORPUS, cube
from test_maps import random_iso


def brute_mandatory(X):
    """All-pairs scan of the close-neighbor definition."""
    out = set()
    for p in X.points:
        for q in X.points:
            if q != p and neighbors(X, p) <= closed_neighbors(X, q):
                out.add(p)
                break
    return out


def cavity_decomposition():
    six = [
        ((0, 0, 0), (6, 1, 6)), ((0, 5, 0), (6, 6, 6)),
        ((5, 0, 0), (6, 6, 6)), ((0, 0, 0), (1, 6, 6)),
        ((0, 0, 0), (6, 6, 1)), ((0, 0, 5), (6, 6, 6)),
    ]
    return CubeDecomposition(tuple(CubeSpec(lo, hi) for lo, hi in six))


def cavity_image(u=1):
    pts = [p for p in itertools.product(range(7), repeat=3) if not all(2 <= c <= 4 for c in p)]
    return DigitalImage(pts, u=u)


class TestCubeSpec:
    def test_rejects_inverted(self):
        with pytest.raises(DecompositionError):
            CubeSpec((0, 3), (1, 2))

    def test_points(self):
        assert sorted(CubeSpec((0, 5), (1, 5)).points()) == [(0, 5), (1, 5)]
        assert CubeSpec((0, 0, 0), (2, 3, 0)).size() == 12


class TestCorners:
    def test_square(self):
        assert corners(CubeSpec((0, 0), (4, 4))) == set(itertools.product((0, 4), repeat=2))

    def test_degenerate_axis(self):
        assert corners(CubeSpec((0, 0), (0, 3))) == {(0, 0), (0, 3)}

    def test_cube(self):
        assert len(corners(CubeSpec((0, 0, 0), (6, 6, 6)))) == 8

    @pytest.mark.parametrize("lo,hi", [((0, 0, 0), (3, 2, 1)), ((1, 1), (4, 1)), ((0,), (5,)), ((2, 2, 2), (2, 2, 2))])
    def test_count_and_nesting(self, lo, hi):
        K = CubeSpec(lo, hi)
        assert len(corners(K)) == 2 ** len(K.nondegenerate_axes())
        if len(K.nondegenerate_axes()) == K.dim:
            assert corners(K) <= boundary(K.image()) <= set(K.points())

    @pytest.mark.parametrize("seed", range(10))
    def test_iso_invariance(self, seed):
        rng = random.Random(seed)
        lo = tuple(rng.randint(-3, 3) for _ in range(3))
        hi = tuple(a + rng.randint(0, 3) for a in lo)
        T = random_iso(rng, 3)
        image = apply_iso_to_set(T, set(CubeSpec(lo, hi).points()))
        lo2 = tuple(min(p[k] for p in image) for k in range(3))
        hi2 = tuple(max(p[k] for p in image) for k in range(3))
        assert corners(CubeSpec(lo2, hi2)) == apply_iso_to_set(T, corners(CubeSpec(lo, hi)))


class TestDecompositions:
    def test_cavity_six_slabs(self):
        assert validate_decomposition(cavity_image(), cavity_decomposition())

    def test_cube_exceeds(self):
        X = cube((0, 0), (2, 2))
        assert not validate_decomposition(X, CubeDecomposition((CubeSpec((0, 0), (3, 3)),)))

    def test_union_misses(self):
        X = cube((0, 0), (2, 2))
        assert not validate_decomposition(X, CubeDecomposition((CubeSpec((0, 0), (1, 2)),)))

    def test_trivial(self):
        X = DigitalImage([(1, 2)])
        assert trivial_decomposition(X).cubes == (CubeSpec((1, 2), (1, 2)),)
        assert len(trivial_decomposition(cube((0,), (1,)))) == 2

    @pytest.mark.parametrize("name,X", CORPUS, ids=[n for n, _ in CORPUS])
    def test_trivial_corner_set_is_everything(self, name, X):
        D = trivial_decomposition(X)
        assert validate_decomposition(X, D)
        if is_connected(X.with_adjacency(1)):
            assert c1_freezing_set(D, X) == set(X.points)

    def test_empty(self):
        with pytest.raises(DecompositionError):
            CubeDecomposition(())


class TestC1Construction:
    def test_two_slabs_give_twelve(self):
        D = CubeDecomposition((CubeSpec((0, 0, 0), (4, 4, 2)), CubeSpec((0, 0, 2), (4, 4, 4))))
        A = c1_freezing_set(D)
        assert A == set(itertools.product((0, 4), (0, 4), (0, 2, 4)))
        assert len(A) == 12

    def test_single_cube_gives_eight(self):
        assert len(c1_freezing_set(CubeDecomposition((CubeSpec((0, 0, 0), (4, 4, 4)),)))) == 8

    def test_wedge(self):
        K1, K2 = CubeSpec((0, 0), (2, 2)), CubeSpec((2, 2), (4, 4))
        A = c1_freezing_set(CubeDecomposition((K1, K2)))
        assert A == corners(K1) | corners(K2)
        assert len(A) == 7

    def test_disconnected(self):
        D = CubeDecomposition((CubeSpec((0, 0), (1, 1)), CubeSpec((3, 3), (4, 4))))
        with pytest.raises(DisconnectedImageError):
            c1_freezing_set(D)

    def test_invalid(self):
        D = CubeDecomposition((CubeSpec((0, 0), (1, 1)),))
        with pytest.raises(DecompositionError):
            c1_freezing_set(D, cube((0, 0), (2, 2)))

    def test_cavity_corners(self):
        A = c1_freezing_set(cavity_decomposition(), cavity_image())
        assert set(itertools.product((0, 6), repeat=3)) <= A


class TestCnConstruction:
    def test_cube_boundary(self):
        A = cn_freezing_set(CubeDecomposition((CubeSpec((0, 0, 0), (2, 2, 2)),)))
        assert len(A) == 26 and (1, 1, 1) not in A

    def test_unit_square(self):
        assert len(cn_freezing_set(CubeDecomposition((CubeSpec((0, 0), (1, 1)),)))) == 4

    def test_abutting_squares(self):
        K1, K2 = CubeSpec((0, 0), (2, 2)), CubeSpec((2, 0), (4, 2))
        # union of the two boundaries computed point by point from the definition
        expected = set()
        for K in (K1, K2):
            pts = set(K.points())
            for p in pts:
                if any(p[:k] + (p[k] + s,) + p[k + 1:] not in pts for k in range(2) for s in (-1, 1)):
                    expected.add(p)
        A = cn_freezing_set(CubeDecomposition((K1, K2)))
        assert A == expected
        assert len(A) == 13

    def test_uses_standalone_boundaries(self):
        # (2, 1) is interior to X but on the boundary of both cubes
        A = cn_freezing_set(CubeDecomposition((CubeSpec((0, 0), (2, 2)), CubeSpec((2, 0), (4, 2)))))
        assert (2, 1) in A and (2, 1) not in boundary(cube((0, 0), (4, 2)))

    def test_disconnected(self):
        D = CubeDecomposition((CubeSpec((0, 0), (0, 0)), CubeSpec((2, 2), (2, 2))))
        with pytest.raises(DisconnectedImageError):
            cn_freezing_set(D)


class TestMandatory:
    def test_close_corners_c3(self):
        X = cube((0, 0, 0), (3, 4, 5), u=3)
        assert set(itertools.product((0, 3), (0, 4), (0, 5))) <= mandatory_points(X)

    def test_segment(self):
        assert mandatory_points(cube((0,), (1,))) == {(0,), (1,)}

    def test_square_c1(self):
        X = cube((0, 0), (2, 2))
        assert brute_mandatory(X) == {(0, 0), (0, 2), (2, 0), (2, 2)}
        assert mandatory_points(X) == brute_mandatory(X)

    @pytest.mark.parametrize("name,X", CORPUS, ids=[n for n, _ in CORPUS])
    def test_matches_all_pairs_scan(self, name, X):
        assert mandatory_points(X) == brute_mandatory(X)
        for p in X.points:
            assert close_neighbors(X, p) == [q for q in X.points if is_close_neighbor(X, p, q)]

    @pytest.mark.parametrize("X", [cube((0, 0, 0), (3, 3, 3), u=3), cube((0, 0), (4, 3), u=2),
                                   cube((0, 0, 0), (2, 3, 2), u=2), DigitalImage([(0, 0), (5, 5)])])
    def test_matches_all_pairs_scan_larger(self, X):
        assert mandatory_points(X) == brute_mandatory(X)

    def test_isolated_points_are_mandatory(self):
        X = DigitalImage([(0, 0), (3, 3)])
        assert mandatory_points(X) == set(X.points)


class TestCloseNeighborWitness:
    def test_segment(self):
        f = close_neighbor_witness(cube((0,), (1,)), (0,), (1,))
        assert f.as_dict() == {(0,): (1,), (1,): (1,)}

    def test_cube_corner(self):
        X = cube((0, 0, 0), (2, 2, 2), u=3)
        f = close_neighbor_witness(X, (0, 0, 0), (1, 1, 1))
        assert is_continuous(f) and not f.is_identity()
        assert fixed_points(f) == set(X.points) - {(0, 0, 0)}

    def test_square_corner_collapses_to_center(self):
        # N((0,0)) = {(1,0),(0,1)} lies inside N*((1,1)) under c1
        X = cube((0, 0), (2, 2))
        f = close_neighbor_witness(X, (0, 0), (1, 1))
        assert is_continuous(f) and fixed_points(f) == set(X.points) - {(0, 0)}

    @pytest.mark.parametrize("p,q", [((0, 0), (2, 2)), ((1, 1), (0, 0)), ((0, 0), (0, 0))])
    def test_precondition(self, p, q):
        with pytest.raises(PreconditionError):
            close_neighbor_witness(cube((0, 0), (2, 2)), p, q)

    @pytest.mark.parametrize("name,X", CORPUS, ids=[n for n, _ in CORPUS])
    def test_every_mandatory_point_has_a_valid_witness(self, name, X):
        for p, q in mandatory_certificates(X).items():
            f = close_neighbor_witness(X, p, q)
            assert is_continuous(f) and not f.is_identity()
            assert fixed_points(f) == set(X.points) - {p}


class TestBoundaryWitness:
    def test_face_center(self):
        f = boundary_minimality_witness(CubeSpec((0, 0, 0), (2, 2, 2)), (0, 1, 1), 1)
        assert f.moved() == [((0, 1, 1), (1, 1, 1))]
        assert is_continuous(f)

    def test_segment(self):
        f = boundary_minimality_witness(CubeSpec((0,), (1,)), (0,), 1)
        assert f.as_dict() == {(0,): (1,), (1,): (1,)}

    def test_upper_side(self):
        f = boundary_minimality_witness(CubeSpec((0, 0), (3, 3)), (3, 1), 1)
        assert f.moved() == [((3, 1), (2, 1))]

    def test_interior_point(self):
        with pytest.raises(PreconditionError):
            boundary_minimality_witness(CubeSpec((0, 0), (2, 2)), (1, 1), 1)

    def test_axis_not_extremal(self):
        with pytest.raises(PreconditionError):
            boundary_minimality_witness(CubeSpec((0, 0), (2, 2)), (0, 1), 2)

    def test_degenerate_axis(self):
        with pytest.raises(PreconditionError):
            boundary_minimality_witness(CubeSpec((0, 0), (0, 2)), (0, 1), 1)

    @pytest.mark.parametrize("hi", [(1,), (3,), (1, 1), (2, 3), (3, 3), (1, 1, 1), (2, 2, 2), (3, 2, 1), (3, 3, 3)])
    def test_all_boundary_points(self, hi):
        K = CubeSpec((0,) * len(hi), hi)
        X = K.image(u=K.dim)
        bd = boundary(X)
        for x0 in bd:
            for i in range(1, K.dim + 1):
                if x0[i - 1] not in (0, hi[i - 1]):
                    continue
                f = boundary_minimality_witness(K, x0, i)
                assert f.image == X and is_continuous(f) and not f.is_identity()
                assert fixed_points(f) >= bd - {x0}
