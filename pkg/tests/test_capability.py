import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trustalloc import CapabilitySpace, DimensionMismatch, OutOfRange, validate_vector


class TestCapabilitySpace:
    @pytest.mark.parametrize("n, G", [(0, 11), (2, 1), (-1, 5)])
    def test_rejects_bad_shape(self, n, G):
        with pytest.raises(ValueError):
            CapabilitySpace(n, G)

    @pytest.mark.parametrize("G", [2, 3, 11, 101, 257])
    def test_grid_points_exact(self, G):
        grid = CapabilitySpace(1, G).grid()
        assert grid.size == G
        for k in range(G):
            assert grid[k] == k / (G - 1)
        assert grid[0] == 0.0 and grid[-1] == 1.0


class TestValidateVector:
    def test_valid(self, space2):
        v = validate_vector([0.5, 0.5], space2)
        assert tuple(v) == (0.5, 0.5)

    def test_wrong_length(self, space2):
        with pytest.raises(DimensionMismatch):
            validate_vector([0.5], space2)

    def test_out_of_range(self, space2):
        with pytest.raises(OutOfRange):
            validate_vector([1.2, 0.3], space2)

    def test_nan_rejected(self, space2):
        with pytest.raises(OutOfRange):
            validate_vector([float("nan"), 0.3], space2)

    @given(st.lists(st.floats(allow_nan=False, allow_infinity=False, min_value=-2, max_value=2), min_size=3, max_size=3))
    def test_accepted_vectors_in_unit_cube(self, values):
        space = CapabilitySpace(3, 5)
        try:
            v = validate_vector(values, space)
        except OutOfRange:
            assert any(x < 0 or x > 1 for x in values)
        else:
            assert all(0.0 <= x <= 1.0 for x in v)
            assert np.array_equal(v.as_array(), np.asarray(values))
