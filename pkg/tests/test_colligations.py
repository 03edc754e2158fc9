import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pontryagin_triplets import (NotRegular, PontryaginSpace, UnitaryColligation,
                                 block_weyl, char_function, char_function_block,
                                 char_function_resolvent, compress, compress_coresolvent,
                                 construct_triplet, coresolvent, exceptional_sets,
                                 exit_extension, generalized_resolvent, gres_from_theta,
                                 is_simple_colligation, lift_residuals, lift_triplet,
                                 max_neg_squares, minimal_compression_residual, minimal_decompose,
                                 moebius_context, moebius_exit_extension, moebius_theta,
                                 random_instance, random_simple_colligation, resolvent,
                                 verify_colligation, weyl, with_isolated_block)
from pontryagin_triplets.colligations import ExitSpace

E0 = PontryaginSpace.euclidean(0)
E1 = PontryaginSpace.euclidean(1)


def flip():
    return UnitaryColligation.from_blocks(E1, E1, E1, [[0]], [[1]], [[1]], [[0]])


def rotation():
    c = np.sqrt(3) / 2
    return UnitaryColligation.from_blocks(E1, E1, E1, [[0.5]], [[c]], [[c]], [[-0.5]])


def test_flip_is_unitary_and_simple():
    D = flip()
    assert verify_colligation(D).passed
    assert is_simple_colligation(D)
    for lam in (0.3, -2j, 5):
        assert char_function(D, lam)[0, 0] == pytest.approx(lam)


def test_perturbed_colligation_fails():
    D = rotation()
    rep = verify_colligation(D.with_blocks(H=2 * D.H))
    assert not rep.passed
    assert rep.residuals["cross-isometric"] > 1e-3


def test_rotation_characteristic_function():
    D = rotation()
    assert char_function(D, 0)[0, 0] == pytest.approx(-0.5)
    for lam in (0.2, -0.7, 0.5j, 1.5 + 1j, -3):
        expected = -0.5 + (3 * lam / 4) / (1 - lam / 2)
        assert char_function(D, lam)[0, 0] == pytest.approx(expected)
        assert char_function_block(D, lam)[0, 0] == pytest.approx(expected)
        assert char_function_resolvent(D, lam)[0, 0] == pytest.approx(expected)


def test_isolated_block_is_not_simple():
    D = with_isolated_block(flip(), np.array([[1j]]), np.eye(1))
    assert verify_colligation(D).passed
    assert not is_simple_colligation(D)


def test_generator_examples():
    D = random_simple_colligation(0, 0, 1, 1, seed=11)
    assert D.p == 0 and abs(abs(D.H[0, 0]) - 1) < 1e-12
    D = random_simple_colligation(1, 0, 1, 1, seed=7)
    assert verify_colligation(D).passed and is_simple_colligation(D)
    D = random_simple_colligation(1, 1, 1, 1, seed=7)
    np.testing.assert_array_equal(D.state.gram, [[-1]])
    pool = [0.7 * np.exp(2j * np.pi * (k + 0.5) / 10) for k in range(10)]
    est = max_neg_squares(lambda z: char_function(D, z), pool, D.input, D.output)
    assert est.count == 1


def test_lift_of_shift2(shift2):
    L = lift_triplet(shift2, E1)
    np.testing.assert_allclose(weyl(L.triplet, 1, 3), np.diag([1 / 3, 1 / 9]), atol=1e-12)
    np.testing.assert_allclose(block_weyl(L, 1, 3), np.diag([1 / 3, 1 / 9]), atol=1e-12)
    assert L.triplet.space.neg_index == 0


def test_trivial_lift(shift2):
    L = lift_triplet(shift2, E0)
    for lam in (3, 0.5):
        j = 1 if lam > 1 else 2
        np.testing.assert_allclose(weyl(L.triplet, j, lam), weyl(shift2, j, lam), atol=1e-12)


def test_negative_exit_space(shift2):
    L = lift_triplet(shift2, PontryaginSpace([[-1.0]]))
    assert L.triplet.space.neg_index == 1
    assert max(lift_residuals(L, 2.5).values()) < 1e-12


def test_exit_extension_of_shift2(shift2_file, shift2):
    D = shift2_file.colligation
    L = lift_triplet(shift2, D.state)
    Vt = exit_extension(L, D)
    A = Vt.matrix()
    np.testing.assert_allclose(A, [[0, 0, 1], [1, 0, 0], [0, 1, 0]], atol=1e-12)
    # exit block first, so H is the trailing 2 x 2 block
    expected = np.linalg.inv(A - 3 * np.eye(3))[1:, 1:]
    np.testing.assert_allclose(compress(Vt, 3, L.exit), expected, atol=1e-12)
    np.testing.assert_allclose(generalized_resolvent(shift2, D, 3), expected, atol=1e-12)


def test_compression_without_exit_space(shift2):
    D = UnitaryColligation(E0, shift2.N2, shift2.N1, [[1j]])
    L = lift_triplet(shift2, E0)
    Vt = exit_extension(L, D)
    np.testing.assert_allclose(compress(Vt, 3, L.exit), resolvent(Vt, 3), atol=1e-12)
    lam = 1 / 3
    direct = np.linalg.inv(np.eye(2) - lam * Vt.matrix())
    np.testing.assert_allclose(coresolvent(shift2, D, lam), direct, atol=1e-12)


@pytest.mark.parametrize("lam", [1 / 3, 3, 0.2 + 0.5j, -2j])
def test_coresolvent_shift2(shift2_file, shift2, lam):
    D = shift2_file.colligation
    L = lift_triplet(shift2, D.state)
    Vt = exit_extension(L, D)
    np.testing.assert_allclose(coresolvent(shift2, D, lam),
                               compress_coresolvent(Vt, lam, L.exit), atol=1e-9)


def test_minimal_decomposition(shift2_file, shift2):
    D = shift2_file.colligation
    L = lift_triplet(shift2, D.state)
    dec = minimal_decompose(exit_extension(L, D), L.exit)
    assert dec.is_minimal and dec.Vu.dim == 0

    D2 = with_isolated_block(D, np.array([[1j]]), np.eye(1))
    L2 = lift_triplet(shift2, D2.state)
    Vt2 = exit_extension(L2, D2)
    dec = minimal_decompose(Vt2, L2.exit)
    assert dec.Hm.dim == 3 and dec.Hu.dim == 1
    assert dec.invariance < 1e-12
    for lam in (3, 0.5j):
        assert minimal_compression_residual(Vt2, dec, L2.exit, lam) < 1e-9


def test_negative_isolated_block_is_not_regular(shift2_file, shift2):
    D = with_isolated_block(shift2_file.colligation, np.array([[1j]]), -np.eye(1))
    L = lift_triplet(shift2, D.state)
    with pytest.raises(NotRegular):
        minimal_decompose(exit_extension(L, D), L.exit)


def test_moebius_route(shift2_file, shift2):
    D = shift2_file.colligation
    ctx = moebius_context(shift2, 2)
    Vt, exit = moebius_exit_extension(ctx, D.state, D)
    theta = moebius_theta(D, 2)
    for lam in (3, -2.5j, 0.5, 0.3j):
        np.testing.assert_allclose(gres_from_theta(shift2, theta, lam),
                                   compress(Vt, lam, exit), atol=1e-10)


def test_exit_space_embedding():
    ex = ExitSpace(E1, PontryaginSpace.euclidean(2))
    x = np.array([1.0, 2.0])
    np.testing.assert_allclose(ex.project(ex.embed(x)).ravel(), x)
    assert ex.Htilde.dim == 3


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**16), data=st.data())
def test_generalized_resolvents_random(seed, data):
    dim = data.draw(st.integers(2, 4))
    kappa = data.draw(st.integers(0, min(1, dim - 1)))
    dom = data.draw(st.integers(1, dim - 1))
    nu = data.draw(st.integers(0, 1))
    t = construct_triplet(random_instance(dim, kappa, dom, seed=seed))
    D = random_simple_colligation(1 + nu, nu, t.N2.dim, t.N1.dim, seed,
                                  input_space=t.N2, output_space=t.N1)
    assert verify_colligation(D).passed
    L = lift_triplet(t, D.state)
    Vt = exit_extension(L, D)
    ex = exceptional_sets(t)
    for lam in (2.2 + 0.7j, -0.4 + 0.3j):
        if not (ex.in_D1(lam) or ex.in_D2(lam)):
            continue
        try:
            ref = compress(Vt, lam, L.exit)
        except Exception:
            continue  # eigenvalue of the exit extension
        R = generalized_resolvent(t, D, lam, ex=ex)
        assert np.linalg.norm(R - ref, 2) <= 1e-8 * max(1, np.linalg.norm(ref, 2))
        assert max(lift_residuals(L, lam).values()) <= 1e-9
