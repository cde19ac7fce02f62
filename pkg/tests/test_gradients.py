import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgehist.gradients import grad, grad_adjoint, grad_magnitude, gram_eigenvalues

from oracles import diff_matrix, power_iteration


def test_constant_image_has_zero_gradient():
    assert not np.any(grad(np.full((4, 5), 37.0)))


def test_row_example():
    g = grad(np.array([[1.0, 4.0, 9.0]]))
    np.testing.assert_array_equal(g[0], [[-8.0, 3.0, 5.0]])
    np.testing.assert_array_equal(g[1], [[0.0, 0.0, 0.0]])


def test_column_example():
    g = grad(np.array([[2.0], [2.0], [7.0]]))
    np.testing.assert_array_equal(g[1].ravel(), [-5.0, 0.0, 5.0])
    np.testing.assert_array_equal(g[0].ravel(), [0.0, 0.0, 0.0])


@pytest.mark.parametrize("shape", [(1, 1), (1, 5), (4, 1), (3, 7), (6, 6)])
def test_grad_matches_explicit_matrix(shape):
    rng = np.random.default_rng(0)
    x = rng.uniform(0, 255, shape)
    np.testing.assert_allclose(grad(x).ravel(), diff_matrix(*shape) @ x.ravel(), atol=1e-12)


@pytest.mark.parametrize("shape", [(1, 1), (2, 3), (5, 7), (8, 8)])
def test_adjoint_matches_matrix_transpose(shape):
    rng = np.random.default_rng(1)
    g = rng.standard_normal((2,) + shape)
    np.testing.assert_allclose(
        grad_adjoint(g).ravel(), diff_matrix(*shape).T @ g.ravel(), atol=1e-12
    )


def test_adjoint_of_zero_field():
    assert not np.any(grad_adjoint(np.zeros((2, 3, 4))))


def test_adjoint_of_constant_gradient():
    assert not np.any(grad_adjoint(grad(np.full((5, 7), 9.0))))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 16), st.integers(1, 16), st.integers(0, 2**32 - 1))
def test_adjoint_identity(m, n, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((m, n))
    g = rng.standard_normal((2, m, n))
    lhs = np.vdot(grad(x), g)
    rhs = np.vdot(x, grad_adjoint(g))
    scale = np.linalg.norm(x) * np.linalg.norm(g) + 1e-300
    assert abs(lhs - rhs) <= 1e-10 * scale


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10), st.integers(1, 10), st.floats(-3, 3), st.floats(-3, 3))
def test_grad_linear(m, n, a, b):
    rng = np.random.default_rng(m * 100 + n)
    x, y = rng.standard_normal((2, m, n))
    np.testing.assert_allclose(grad(a * x + b * y), a * grad(x) + b * grad(y), atol=1e-12)


def test_gram_eigenvalues_single_pixel():
    np.testing.assert_array_equal(gram_eigenvalues(1, 1), [[0.0]])


def test_gram_eigenvalues_2x2():
    formula = np.sort(gram_eigenvalues(2, 2).ravel())
    np.testing.assert_allclose(formula, [0.0, 4.0, 4.0, 8.0], atol=1e-12)
    A = diff_matrix(2, 2)
    brute = np.sort(np.linalg.eigvalsh(A.T @ A))
    np.testing.assert_allclose(formula, brute, atol=1e-12)


@pytest.mark.parametrize("shape", [(3, 5), (4, 4), (7, 2), (6, 9)])
def test_gram_eigenvalues_full_spectrum(shape):
    A = diff_matrix(*shape)
    brute = np.sort(np.linalg.eigvalsh(A.T @ A))
    np.testing.assert_allclose(np.sort(gram_eigenvalues(*shape).ravel()), brute, atol=1e-10)


def test_gram_eigenvalues_diagonalize_in_fft_order():
    rng = np.random.default_rng(3)
    x = rng.standard_normal((5, 6))
    via_fft = np.fft.ifft2(np.fft.fft2(x) * gram_eigenvalues(5, 6)).real
    np.testing.assert_allclose(via_fft, grad_adjoint(grad(x)), atol=1e-10)


@pytest.mark.parametrize("shape", [(2, 2), (5, 3), (8, 8), (16, 11)])
def test_spectral_bound_power_iteration(shape):
    A = diff_matrix(*shape)
    est = power_iteration(A.T @ A)
    exact = gram_eigenvalues(*shape).max()
    assert est <= 8.0 + 1e-9
    assert abs(est - exact) <= 1e-6


def test_grad_magnitude():
    x = np.array([[0.0, 3.0], [4.0, 0.0]])
    g = grad(x)
    np.testing.assert_allclose(grad_magnitude(x), np.sqrt(g[0] ** 2 + g[1] ** 2))


def test_bad_shapes():
    with pytest.raises(ValueError):
        grad(np.zeros(4))
    with pytest.raises(ValueError):
        grad_adjoint(np.zeros((3, 2, 2)))
    with pytest.raises(ValueError):
        gram_eigenvalues(0, 3)
