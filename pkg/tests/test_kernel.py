import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fock_oracle import normally_ordered, product_dict, two_mode_dict
from qlitho import (
    DomainError,
    KernelSpec,
    TwoModeState,
    deposition_four_mode_oracle,
    deposition_two_mode_oracle,
    kernel_1d,
    kernel_1d_closed,
    kernel_2d,
    normalized_four_mode_oracle,
    normalized_two_mode_oracle,
    pixel_center,
    pixel_state,
    propagate,
    reciprocal_binomial,
)


def test_peak_is_one():
    assert kernel_1d(KernelSpec(6, 3), 2.5 / 14) == pytest.approx(1.0, abs=1e-15)


def test_zero_at_foreign_center():
    assert kernel_1d(KernelSpec(6, 3), 4.5 / 14) <= 1e-12


def test_n1_reduces_to_cosine_squared():
    spec = KernelSpec(1, 1)
    assert kernel_1d(spec, 3 / 8) <= 1e-30
    x = np.linspace(-1, 1, 2001)
    np.testing.assert_allclose(kernel_1d(spec, x), np.cos(2 * np.pi * (x - 1 / 8)) ** 2, atol=1e-14)


def test_array_shape_is_kept():
    x = np.linspace(0, 0.5, 12).reshape(3, 4)
    assert kernel_1d(KernelSpec(3, 2), x).shape == (3, 4)
    assert isinstance(kernel_1d(KernelSpec(3, 2), 0.1), float)


def test_closed_matches_sum_at_generic_point():
    spec = KernelSpec(6, 1)
    assert kernel_1d_closed(spec, 0.25) == pytest.approx(kernel_1d(spec, 0.25), rel=1e-12)


@pytest.mark.parametrize("N", [1, 2, 6, 11])
def test_closed_form_singularity_fallback(N):
    for ell in range(1, N + 2):
        spec = KernelSpec(N, ell)
        assert kernel_1d_closed(spec, spec.center) == pytest.approx(1.0, abs=1e-15)
        assert kernel_1d_closed(spec, spec.center + 0.5) == pytest.approx(1.0, abs=1e-14)


def test_kernel_2d_factorizes():
    assert kernel_2d(6, 2, 1, 0.2, 0.1) == kernel_1d(KernelSpec(6, 2), 0.2) * kernel_1d(KernelSpec(6, 1), 0.1)
    assert kernel_2d(6, 2, 5, pixel_center(6, 2), pixel_center(6, 5)) == pytest.approx(1.0, abs=1e-15)
    assert kernel_2d(6, 2, 5, pixel_center(6, 4), 0.123) <= 1e-12


def test_kernel_spec_validation():
    with pytest.raises(DomainError):
        KernelSpec(0, 1)
    with pytest.raises(DomainError):
        KernelSpec(3, float("nan"))


@given(
    st.integers(1, 30),
    st.floats(-40, 40),
    st.floats(-3, 3, allow_nan=False),
)
def test_range_and_periodicity(N, ell, x):
    spec = KernelSpec(N, ell)
    k = kernel_1d(spec, x)
    assert 0.0 <= k <= 1.0 + 1e-15
    assert abs(kernel_1d(spec, x + 0.5) - k) <= 1e-12


@pytest.mark.parametrize("N", range(1, 11))
def test_orthogonal_center_zeros(N):
    m = N + 1
    for ell in range(1, m + 1):
        spec = KernelSpec(N, ell)
        for other in range(-m, 2 * m + 1):
            if (other - ell) % m:
                assert kernel_1d(spec, pixel_center(N, other)) <= 1e-12


# -- oracles -----------------------------------------------------------------


def test_two_mode_oracle_single_photon():
    # |1, 0>: amplitude index n=1
    assert deposition_two_mode_oracle(TwoModeState(1, [0, 1])) == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_two_mode_oracle_matches_brute_force(N):
    rng = np.random.default_rng(N)
    for _ in range(5):
        c = rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)
        state = TwoModeState(N, c / np.linalg.norm(c))
        coeffs = [2**-0.5, 2**-0.5]
        expected = normally_ordered(two_mode_dict(state), coeffs, N)
        assert deposition_two_mode_oracle(state) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("N", [1, 2])
def test_four_mode_oracle_matches_brute_force(N):
    rng = np.random.default_rng(10 + N)
    for _ in range(3):
        states = []
        for _ in range(2):
            c = rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)
            states.append(TwoModeState(N, c / np.linalg.norm(c)))
        expected = normally_ordered(product_dict(*states), [0.5] * 4, 2 * N)
        assert deposition_four_mode_oracle(*states) == pytest.approx(expected, rel=1e-12)


def test_reciprocal_binomial_peak_normalizes_to_one():
    assert normalized_two_mode_oracle(1, 1, pixel_center(1, 1)) == pytest.approx(1.0, rel=1e-15)
    assert normalized_two_mode_oracle(1, 1, 0.3) == pytest.approx(kernel_1d(KernelSpec(1, 1), 0.3), rel=1e-12)


def test_propagated_state_proportional_to_kernel():
    # phases exp(i 2 pi x (2n - N)) on the bare reciprocal binomial state
    N = 6
    rng = np.random.default_rng(6)
    xs = rng.uniform(0, 1, 100)
    raw = np.array([deposition_two_mode_oracle(propagate(reciprocal_binomial(N), x)) for x in xs])
    # the bare state peaks at x = 0, i.e. pixel ell = 1/2
    spec = KernelSpec(N, 0.5)
    const = deposition_two_mode_oracle(reciprocal_binomial(N))
    np.testing.assert_allclose(raw / const, kernel_1d(spec, xs), rtol=1e-9, atol=1e-12)


def test_oracle_domain_errors():
    with pytest.raises(DomainError):
        deposition_two_mode_oracle(reciprocal_binomial(21))
    with pytest.raises(DomainError):
        deposition_four_mode_oracle(reciprocal_binomial(5), reciprocal_binomial(5))
    with pytest.raises(DomainError):
        deposition_four_mode_oracle(reciprocal_binomial(2), reciprocal_binomial(3))


def test_four_mode_at_pixel_centers():
    assert normalized_four_mode_oracle(3, 2, 4, pixel_center(3, 2), pixel_center(3, 4)) == pytest.approx(1.0)
    sx = pixel_state(3, 2, pixel_center(3, 3))
    sy = pixel_state(3, 4, 0.17)
    assert deposition_four_mode_oracle(sx, sy) <= 1e-9


def test_four_mode_generic_point_n2():
    value = normalized_four_mode_oracle(2, 1, 3, 0.137, 0.411)
    assert value == pytest.approx(kernel_2d(2, 1, 3, 0.137, 0.411), rel=1e-9)


@settings(max_examples=50)
@given(st.integers(1, 10), st.data())
def test_three_way_equivalence_property(N, data):
    ell = data.draw(st.integers(1, N + 1))
    x = data.draw(st.floats(0, 1, exclude_max=True))
    spec = KernelSpec(N, ell)
    k = kernel_1d(spec, x)
    for other in (kernel_1d_closed(spec, x), normalized_two_mode_oracle(N, ell, x)):
        assert other == pytest.approx(k, rel=1e-9, abs=1e-12)
