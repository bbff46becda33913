import numpy as np
import pytest
from hypothesis import given, strategies as st

from bsdlab.domain import (
    GroupElement,
    KEndo,
    SingularityError,
    basis,
    bergman_apply,
    bergman_operator,
    d_endo,
    frame,
    h_poly,
    identity_endo,
    inner_product,
    jacobian_factor,
    make_domain,
    matrix_unit,
    max_tripotent,
    moebius_apply,
    moebius_differential,
    polar,
    q_map,
    quadratic_map,
    quasi_inverse,
    quasi_inverse_defining,
    random_point,
    sample_group_element,
    triple_product,
)

from conftest import domains, points, rand_matrix


@pytest.mark.parametrize("r,b,expected", [
    (1, 0, dict(a=0, n=1, p=2, q=1)),
    (2, 0, dict(a=2, n=4, p=4, q=2)),
    (2, 1, dict(a=2, n=6, p=5, q=3)),
])
def test_make_domain_constants(r, b, expected):
    dom = make_domain(r, b)
    assert {k: getattr(dom, k) for k in expected} == expected
    assert dom.tube == (b == 0)


def test_make_domain_rejects_rank_zero():
    with pytest.raises(ValueError):
        make_domain(0, 1)
    with pytest.raises(ValueError):
        make_domain(1, -1)


@given(st.integers(1, 6), st.integers(0, 6))
def test_structure_constants(r, b):
    dom = make_domain(r, b)
    assert dom.n == r * (r + b)
    assert dom.q * dom.r == dom.n
    if r >= 2:
        assert dom.p == 2 * r + b


def test_triple_product_examples():
    dom = make_domain(2, 0)
    e11, e22 = matrix_unit(dom, 0, 0), matrix_unit(dom, 1, 1)
    assert np.allclose(triple_product(e11, e11, e11), 2 * e11)
    assert np.allclose(triple_product(e11, e22, e11), 0)


def test_triple_product_shape_mismatch():
    with pytest.raises(ValueError):
        triple_product(np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)))


@given(domains(), st.integers(0, 2**32 - 1))
def test_triple_product_symmetric(dom, seed):
    rng = np.random.default_rng(seed)
    x, y, z = (rand_matrix(rng, dom.shape) for _ in range(3))
    assert np.allclose(triple_product(x, y, z), triple_product(z, y, x))


def test_d_endo_examples():
    dom = make_domain(2, 0)
    e = max_tripotent(dom)
    w = rand_matrix(np.random.default_rng(0), dom.shape)
    assert np.allclose(d_endo(e, e).apply(w), 2 * w)
    e11, e12 = matrix_unit(dom, 0, 0), matrix_unit(dom, 0, 1)
    assert np.allclose(d_endo(e11, e11).apply(e12), e12)


@given(domains(), st.integers(0, 2**32 - 1))
def test_d_endo_matches_triple_product_and_is_trace_free(dom, seed):
    rng = np.random.default_rng(seed)
    z, v, w = (rand_matrix(rng, dom.shape) for _ in range(3))
    x = d_endo(z, v)
    assert np.allclose(x.apply(w), triple_product(z, v, w))
    assert abs(x.trace) < 1e-12 * max(1.0, x.max_abs())
    assert np.allclose(x.as_operator() @ w.ravel(), x.apply(w).ravel())


def test_quadratic_map_examples(rng):
    dom = make_domain(2, 1)
    e11 = matrix_unit(dom, 0, 0)
    assert np.allclose(quadratic_map(e11, e11), e11)
    v = rand_matrix(rng, dom.shape)
    assert np.allclose(quadratic_map(np.zeros(dom.shape), v), 0)


@given(domains(), st.integers(0, 2**32 - 1))
def test_polarization_identity(dom, seed):
    rng = np.random.default_rng(seed)
    z, w, v = (rand_matrix(rng, dom.shape) for _ in range(3))
    pol = quadratic_map(z + w, v) - quadratic_map(z, v) - quadratic_map(w, v)
    assert np.max(np.abs(d_endo(z, v).apply(w) - pol)) <= 1e-12 * max(1, np.max(np.abs(pol)))


def test_bergman_identity_at_zero(rng):
    dom = make_domain(2, 1)
    v = rand_matrix(rng, dom.shape)
    zero = np.zeros(dom.shape, complex)
    assert np.allclose(bergman_apply(zero, zero, v), v)


@given(domains(), st.integers(0, 2**32 - 1))
def test_bergman_matches_jordan_form(dom, seed):
    rng = np.random.default_rng(seed)
    z, w, v = (rand_matrix(rng, dom.shape, 0.5) for _ in range(3))
    jordan = v - d_endo(z, w).apply(v) + quadratic_map(z, quadratic_map(w, v))
    assert np.max(np.abs(bergman_apply(z, w, v) - jordan)) <= 1e-12


@given(domains(), st.integers(0, 2**32 - 1))
def test_det_bergman_is_h_power(dom, seed):
    rng = np.random.default_rng(seed)
    z, w = random_point(rng, dom, 0.9), random_point(rng, dom, 0.9)
    lhs = np.linalg.det(bergman_operator(z, w))
    rhs = h_poly(z, w) ** dom.p
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


def test_bergman_on_frame():
    dom = make_domain(2, 1)
    t = [0.3, 0.7]
    z = sum(tj * ej for tj, ej in zip(t, frame(dom)))
    for tj, ej in zip(t, frame(dom)):
        assert np.allclose(bergman_apply(z, z, ej), (1 - tj**2) ** 2 * ej)


def test_h_poly_examples(rng):
    dom = make_domain(2, 1)
    w = rand_matrix(rng, dom.shape)
    assert np.isclose(h_poly(np.zeros(dom.shape), w), 1)
    t = [0.3, 0.6]
    z = sum(tj * ej for tj, ej in zip(t, frame(dom)))
    assert np.isclose(h_poly(z, z), np.prod([1 - x**2 for x in t]))


@given(domains(), st.integers(0, 2**32 - 1))
def test_h_poly_hermitian(dom, seed):
    rng = np.random.default_rng(seed)
    z, w = rand_matrix(rng, dom.shape, 0.4), rand_matrix(rng, dom.shape, 0.4)
    assert np.isclose(h_poly(z, w), np.conj(h_poly(w, z)), atol=1e-13)
    assert abs(np.imag(h_poly(z, z))) < 1e-13


def test_quasi_inverse_examples(rng):
    dom = make_domain(2, 1)
    w = rand_matrix(rng, dom.shape, 0.3)
    assert np.allclose(quasi_inverse(w, np.zeros(dom.shape)), w)
    w1, z1 = np.array([[0.3 + 0.2j]]), np.array([[0.5 - 0.1j]])
    assert np.isclose(quasi_inverse(w1, z1)[0, 0], w1[0, 0] / (1 - w1[0, 0] * np.conj(z1[0, 0])))


def test_quasi_inverse_singular():
    e = np.eye(2, dtype=complex)
    with pytest.raises(SingularityError):
        quasi_inverse(e, e)


@given(domains(), st.integers(0, 2**32 - 1))
def test_quasi_inverse_defining_form(dom, seed):
    rng = np.random.default_rng(seed)
    w, z = random_point(rng, dom, 0.8), random_point(rng, dom, 0.8)
    assert np.max(np.abs(quasi_inverse(w, z) - quasi_inverse_defining(w, z))) <= 1e-12


def test_q_map_examples(rng):
    dom = make_domain(1, 0)
    assert np.allclose(q_map(np.zeros((2, 2))), 0)
    z = np.array([[0.4 - 0.3j]])
    assert np.isclose(q_map(z)[0, 0], np.conj(z[0, 0]) / (1 - abs(z[0, 0]) ** 2))
    dom = make_domain(2, 0)
    for _ in range(10):
        z = random_point(rng, dom, 0.9)
        lhs = np.conj(np.linalg.det(z)) / h_poly(z, z)
        assert abs(lhs - np.linalg.det(q_map(z))) <= 1e-10


def test_inner_product_examples(rng):
    dom = make_domain(2, 1)
    e11 = matrix_unit(dom, 0, 0)
    assert inner_product(e11, e11) == 1
    z, w = rand_matrix(rng, dom.shape), rand_matrix(rng, dom.shape)
    trace_v = sum(inner_product(d_endo(z, w).apply(e), e) for e in basis(dom))
    assert abs(trace_v / dom.p - inner_product(z, w)) <= 1e-12 * abs(inner_product(z, w))
    assert np.isclose(inner_product(z, w), np.conj(inner_product(w, z)))


def test_polar_examples(rng):
    dom = make_domain(2, 0)
    s, inside = polar(0.5 * matrix_unit(dom, 0, 0) + 0.2 * matrix_unit(dom, 1, 1))
    assert np.allclose(s, [0.5, 0.2]) and inside
    s, inside = polar(max_tripotent(dom))
    assert np.allclose(s, [1, 1]) and not inside


@given(domains(), st.integers(0, 2**32 - 1))
def test_polar_unitary_invariance(dom, seed):
    from scipy.stats import unitary_group

    rng = np.random.default_rng(seed)
    z = rand_matrix(rng, dom.shape)
    k = unitary_group.rvs(dom.r, random_state=rng) if dom.r > 1 else np.exp(1j * rng.uniform(0, 7)) * np.eye(1)
    u = unitary_group.rvs(dom.q, random_state=rng) if dom.q > 1 else np.exp(1j * rng.uniform(0, 7)) * np.eye(1)
    assert np.allclose(polar(k @ z @ u)[0], polar(z)[0])


def test_peirce_spectrum():
    dom = make_domain(2, 0)
    for j, ej in enumerate(frame(dom)):
        eig = np.sort(np.linalg.eigvals(d_endo(ej, ej).as_operator()).real)
        # V_jj -> 2, V_jk -> 1 (two of them: row j and column j), the rest -> 0
        assert np.allclose(eig, [0, 1, 1, 2])


@given(domains())
def test_sum_over_basis_is_genus_times_identity(dom):
    total = KEndo.zero(dom)
    for e in basis(dom):
        total = total + d_endo(e, e)
    assert np.allclose(total.as_operator(), dom.p * np.eye(dom.n), atol=1e-12)
    if dom.tube:
        assert dom.p == 2 * dom.n / dom.r


def test_identity_endo_acts_as_identity(rng):
    for r, b in [(1, 0), (2, 0), (2, 1), (3, 2)]:
        dom = make_domain(r, b)
        w = rand_matrix(rng, dom.shape)
        ident = identity_endo(dom)
        assert np.allclose(ident.apply(w), w)
        assert abs(ident.trace) < 1e-14


def test_frame_is_orthogonal_tripotents():
    dom = make_domain(3, 1)
    fr = frame(dom)
    for j, ej in enumerate(fr):
        assert np.allclose(quadratic_map(ej, ej), ej)
        for k, ek in enumerate(fr):
            if j != k:
                assert np.allclose(ej @ ek.conj().T, 0)


def test_keendo_from_pair_normalises():
    x = KEndo.from_pair(np.eye(2), np.zeros((3, 3)))
    assert abs(x.trace) < 1e-15
    w = np.arange(6).reshape(2, 3).astype(complex)
    assert np.allclose(x.apply(w), w)


# ---------------------------------------------------------------- group action


def test_moebius_identity(rng):
    dom = make_domain(2, 1)
    g = GroupElement.identity(dom)
    z = random_point(rng, dom)
    assert np.allclose(moebius_apply(g, z), z)
    assert np.isclose(jacobian_factor(g, z), 1)
    assert np.allclose(sample_group_element(rng, dom, 0.0).matrix, np.eye(2 * 2 + 1))


def test_moebius_block_diagonal_unitary(rng):
    from scipy.stats import unitary_group

    dom = make_domain(2, 1)
    a = unitary_group.rvs(2, random_state=rng)
    d = unitary_group.rvs(3, random_state=rng)
    mat = np.zeros((5, 5), complex)
    mat[:2, :2], mat[2:, 2:] = a, d
    g = GroupElement(mat, 2)
    z = random_point(rng, dom)
    assert np.allclose(moebius_apply(g, z), a @ z @ np.linalg.inv(d))
    assert np.isclose(abs(jacobian_factor(g, z)), 1)


@given(domains(), st.integers(0, 2**32 - 1))
def test_composition_and_cocycle(dom, seed):
    rng = np.random.default_rng(seed)
    g, h = sample_group_element(rng, dom), sample_group_element(rng, dom)
    z = random_point(rng, dom, 0.6)
    assert np.max(np.abs(moebius_apply(g @ h, z) - moebius_apply(g, moebius_apply(h, z)))) <= 1e-10
    lhs = jacobian_factor(g @ h, z)
    rhs = jacobian_factor(g, moebius_apply(h, z)) * jacobian_factor(h, z)
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)
    assert np.allclose((g @ g.inverse()).matrix, np.eye(dom.r + dom.q), atol=1e-12)


def test_group_samples_are_pseudo_unitary(rng):
    dom = make_domain(2, 1)
    for _ in range(100):
        g = sample_group_element(rng, dom, 0.5)
        assert g.pseudo_unitarity_residual() <= 1e-10
        assert abs(abs(np.linalg.det(g.matrix)) - 1) <= 1e-10


@given(domains(), st.integers(0, 2**32 - 1), st.floats(0.05, 1.0))
def test_group_preserves_domain(dom, seed, scale):
    rng = np.random.default_rng(seed)
    g = sample_group_element(rng, dom, scale)
    assert polar(moebius_apply(g, np.zeros(dom.shape, complex)))[1]
    assert polar(moebius_apply(g, random_point(rng, dom, 0.95)))[1]


@given(domains(), st.integers(0, 2**32 - 1))
def test_h_covariance(dom, seed):
    rng = np.random.default_rng(seed)
    g = sample_group_element(rng, dom)
    z = random_point(rng, dom, 0.8)
    gz = moebius_apply(g, z)
    ratio = h_poly(gz, gz) / h_poly(z, z)
    assert abs(ratio - abs(np.linalg.det(g.C @ z + g.D)) ** -2) <= 1e-10 * abs(ratio)


def test_jacobian_matches_fd_determinant(rng):
    from bsdlab.experiments import fd_differential

    for r, b in [(1, 0), (2, 0), (2, 1)]:
        dom = make_domain(r, b)
        g = sample_group_element(rng, dom)
        z = random_point(rng, dom, 0.5)
        m = fd_differential(g, z, dom)
        assert abs(np.linalg.det(m) - jacobian_factor(g, z)) <= 1e-8 * abs(jacobian_factor(g, z))
        p, q = moebius_differential(g, z)
        assert np.max(np.abs(m - np.kron(p, q.T))) <= 1e-8


def test_moebius_singular():
    mat = np.zeros((2, 2), complex)
    mat[0, 1] = mat[1, 0] = 1
    g = GroupElement(mat, 1)
    with pytest.raises(SingularityError):
        moebius_apply(g, np.zeros((1, 1), complex))
