import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pontryagin_triplets import (LinearRelation, PontryaginSpace, RegionError,
                                 SingularShift, classify, construct_triplet,
                                 extension, inverse_param_map, inverse_transform_relation,
                                 moebius_context, param_map, random_instance,
                                 random_unitary_in, regular_point_agreement,
                                 resolvent_transfer_residual, transform_laws,
                                 transform_operator, transform_relation, verify_triplet,
                                 weyl)
from pontryagin_triplets.boundary import IsometryInstance


def test_parameter_map_values():
    assert param_map(3, 2) == pytest.approx(-5)
    assert inverse_param_map(-5, 2) == pytest.approx(3)


@settings(max_examples=50, deadline=None)
@given(r=st.floats(0.05, 0.95), phi=st.floats(0, 6.28), z0=st.complex_numbers(min_magnitude=1.2,
                                                                                 max_magnitude=5))
def test_parameter_map_preserves_regions(r, phi, z0):
    lam = r * np.exp(1j * phi)
    zeta = param_map(lam, z0)
    assert abs(zeta) < 1
    assert abs(param_map(1 / np.conj(lam), z0)) > 1
    assert inverse_param_map(zeta, z0) == pytest.approx(lam)


def test_identity_maps_to_identity():
    E = PontryaginSpace.euclidean(1)
    V0 = transform_relation(LinearRelation.identity(E), 2)
    assert V0.matrix()[0, 0] == pytest.approx(1)


def test_shift2_transform(shift2_file, shift2):
    inst0 = transform_operator(shift2_file.instance, 2)
    assert inst0.V.dim == 1
    # V0 = -3 (V - 2)^{-1} - 2 applied to (V - 2) e1 = (-2, 1)
    assert inst0.V.contains_pairs([-2, 1], [-3 + 4, -2])
    assert classify(inst0.V).isometric
    assert inverse_transform_relation(inst0.V, 2).same(shift2_file.instance.V)
    ctx = moebius_context(shift2, 2)
    assert verify_triplet(ctx.triplet0).passed


def test_shift2_weyl_law(shift2):
    ctx = moebius_context(shift2, 2)
    # zeta = -5 corresponds to lam = 3, where M1 = 1/9
    assert weyl(ctx.triplet0, 1, -5)[0, 0] == pytest.approx(1 / 9)
    laws = transform_laws(ctx, 3)
    assert laws["weyl"] < 1e-12 and laws["gamma"] < 1e-12


def test_z0_too_close_to_circle(shift2_file):
    with pytest.raises(RegionError):
        transform_operator(shift2_file.instance, 1.05)


def test_z0_at_eigenvalue():
    t = np.log(2.0)
    W = np.array([[np.cosh(t), np.sinh(t)], [np.sinh(t), np.cosh(t)]])
    inst = IsometryInstance.from_map(PontryaginSpace.diagonal([1, -1]), np.eye(2), W)
    with pytest.raises(SingularShift):
        transform_operator(inst, 2)


def test_resolvent_transfer_unitary_extension():
    rng = np.random.default_rng(4)
    H = PontryaginSpace.canonical(3, 1)
    Vt = LinearRelation.from_matrix(random_unitary_in(H, rng), H)
    assert resolvent_transfer_residual(Vt, 2, 3) <= 1e-10
    assert regular_point_agreement(Vt, 2, 3) == (True, True)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**16), data=st.data())
def test_transform_laws_random(seed, data):
    dim = data.draw(st.integers(2, 5))
    kappa = data.draw(st.integers(0, min(2, dim - 1)))
    dom = data.draw(st.integers(1, dim - 1))
    t = construct_triplet(random_instance(dim, kappa, dom, seed=seed))
    try:
        ctx = moebius_context(t, 2)
    except SingularShift:
        return
    assert verify_triplet(ctx.triplet0).passed
    for lam in (3, -2.5j, 0.4, -0.3 + 0.5j):
        try:
            laws = transform_laws(ctx, lam)
        except Exception:
            continue  # exceptional point on one side
        assert laws["weyl"] <= 1e-9 and laws["gamma"] <= 1e-9
    rng = np.random.default_rng(seed)
    m1, m2 = t.N1.dim, t.N2.dim
    U = rng.standard_normal((m1, m2)) + 1j * rng.standard_normal((m1, m2))
    Vt = extension(t, LinearRelation.from_matrix(U, t.N2, t.N1))
    a, b = regular_point_agreement(Vt, 2, 3)
    assert a == b
    if a:
        assert resolvent_transfer_residual(Vt, 2, 3) <= 1e-10
