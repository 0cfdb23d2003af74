import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.exceptions import CompletenessError, DomainError
from src.spectra_closed import (
    circle_spectrum,
    count_up_to,
    explicit_spectrum,
    first_values,
    flat_torus_spectrum,
    point_spectrum,
    spectrum_from_record,
    truncate_below,
)


def test_unit_circle_values():
    spec = circle_spectrum(2.0 * math.pi, 4)
    np.testing.assert_allclose(spec.values, [0.0, 1.0, 4.0, 9.0])
    assert spec.multiplicities.tolist() == [1, 2, 2, 2]
    assert spec.complete_up_to == pytest.approx(9.0)
    assert spec.zero_multiplicity == 1
    assert spec.first_nonzero == pytest.approx(1.0)


def test_short_circle_doubles_frequencies():
    spec = circle_spectrum(math.pi, 3)
    np.testing.assert_allclose(spec.values, [0.0, 4.0, 16.0])


@settings(max_examples=50, deadline=None)
@given(
    length=st.floats(min_value=0.1, max_value=20.0),
    count=st.integers(min_value=1, max_value=40),
)
def test_circle_formula(length, count):
    spec = circle_spectrum(length, count)
    j = np.arange(count)
    np.testing.assert_allclose(spec.values, (2.0 * math.pi * j / length) ** 2, rtol=1e-14)
    assert spec.multiplicities[0] == 1
    assert np.all(spec.multiplicities[1:] == 2)
    assert np.all(np.diff(spec.values) > 0.0)


def test_square_torus_multiplicities():
    spec = flat_torus_spectrum(2.0 * math.pi, 2.0 * math.pi, 4)
    np.testing.assert_allclose(spec.values, [0.0, 1.0, 2.0, 4.0])
    assert spec.multiplicities.tolist() == [1, 4, 4, 4]
    assert spec.volume == pytest.approx(4.0 * math.pi ** 2)


def test_rectangular_torus_counts_lattice_points():
    spec = flat_torus_spectrum(2.0 * math.pi, math.pi, 3)
    # (2 pi a / 2 pi)^2 + (2 pi b / pi)^2 = a^2 + 4 b^2
    np.testing.assert_allclose(spec.values, [0.0, 1.0, 4.0])
    assert spec.multiplicities.tolist() == [1, 2, 4]


def test_truncate_and_count():
    spec = circle_spectrum(2.0 * math.pi, 4)
    assert count_up_to(spec, 4.0) == 5
    assert truncate_below(spec, 1.5).values.tolist() == [0.0, 1.0]
    np.testing.assert_allclose(first_values(spec, 4), [0.0, 1.0, 1.0, 4.0])


def test_truncation_beyond_known_values_raises():
    spec = circle_spectrum(2.0 * math.pi, 4)
    with pytest.raises(CompletenessError):
        truncate_below(spec, 10.0)
    with pytest.raises(CompletenessError):
        first_values(spec, 8)


def test_point_spectrum():
    spec = point_spectrum()
    assert spec.values.tolist() == [0.0]
    assert spec.volume == 1.0
    assert math.isinf(spec.complete_up_to)
    with pytest.raises(CompletenessError):
        _ = spec.first_nonzero


def test_explicit_spectrum_checks_entries():
    with pytest.raises(DomainError):
        explicit_spectrum([(1.0, 1), (0.5, 1)])
    with pytest.raises(DomainError):
        explicit_spectrum([(-1.0, 1)])
    with pytest.raises(DomainError):
        explicit_spectrum([(0.0, 0)])
    with pytest.raises(DomainError):
        explicit_spectrum([])


def test_explicit_volume_is_optional():
    spec = explicit_spectrum([(0.0, 1), (2.0, 3)], complete=True, volume=5.0)
    assert spec.volume == 5.0
    assert math.isinf(spec.complete_up_to)
    with pytest.raises(DomainError):
        _ = explicit_spectrum([(0.0, 1)]).volume


def test_from_record():
    spec = spectrum_from_record({'kind': 'circle', 'length': 2.0 * math.pi, 'count': 3})
    np.testing.assert_allclose(spec.values, [0.0, 1.0, 4.0])
    spec = spectrum_from_record({'kind': 'explicit', 'entries': [[0.0, 1], [3.0, 2]], 'complete': True})
    assert spec.multiplicities.tolist() == [1, 2]
    assert spectrum_from_record({'kind': 'point'}).kind == 'point'
    with pytest.raises(DomainError):
        spectrum_from_record({'kind': 'sphere'})


def test_extended_regenerates():
    spec = circle_spectrum(2.0 * math.pi, 3).extended(6)
    assert len(spec.entries) == 6
    assert spec.complete_up_to == pytest.approx(25.0)
