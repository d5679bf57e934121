"""Tests for decorators."""

import pytest

from nilsub.census import census
from nilsub.decorators import (
    observe,
    _argument_attributes,
    _capture_arguments,
    _domain_attributes,
    _serialize_value,
    _MAX_ATTRIBUTE_LENGTH,
)
from nilsub.nilmod import make_pair
from nilsub.types import NilsubAttributes, OperationKind, OperationStatus


class TestSerializeValue:
    """Tests for _serialize_value helper."""

    def test_serialize_dict(self):
        """Test serializing a dictionary."""
        result = _serialize_value({"n": 6})
        assert result == '{"n": 6}'

    def test_serialize_list(self):
        """Test serializing a list."""
        result = _serialize_value([6, 4, 2])
        assert result == "[6, 4, 2]"

    def test_serialize_non_serializable(self):
        """Test serializing an object without a JSON form."""
        class Custom:
            def __str__(self):
                return "custom-object"

        result = _serialize_value(Custom())
        assert "custom-object" in result

    def test_serialize_truncates_long_values(self):
        """Test that large values are capped."""
        result = _serialize_value("x" * (3 * _MAX_ATTRIBUTE_LENGTH))
        assert len(result) == _MAX_ATTRIBUTE_LENGTH
        assert result.endswith("...")


class TestCaptureArguments:
    """Tests for _capture_arguments helper."""

    def test_capture_positional_args(self):
        """Test capturing positional arguments."""
        def func(field, n, bound):
            pass

        result = _capture_arguments(func, (2, 4, 8), {})
        assert result == {"field": 2, "n": 4, "bound": 8}

    def test_capture_mixed_args_with_defaults(self):
        """Test capturing mixed arguments with defaults applied."""
        def func(field, n, bound=8):
            pass

        result = _capture_arguments(func, (2,), {"n": 3})
        assert result == {"field": 2, "n": 3, "bound": 8}


class TestObserveWithoutTracer:
    """Tests for observe when no tracer exists."""

    def test_bare_decorator(self):
        """Test @observe without arguments."""
        @observe
        def rank_profile(values):
            return sorted(values)

        assert rank_profile([3, 1, 2]) == [1, 2, 3]

    def test_decorator_with_arguments(self):
        """Test @observe(...) with a name and kind."""
        @observe(name="census", kind=OperationKind.CENSUS, capture_output=False)
        def census(n):
            return n * 2

        assert census(3) == 6

    def test_preserves_function_name(self):
        """Test decorator preserves function name."""
        @observe(name="other")
        def decompose():
            pass

        assert decompose.__name__ == "decompose"

    def test_exception_propagation(self):
        """Test exceptions are propagated."""
        @observe
        def failing():
            raise ValueError("test error")

        with pytest.raises(ValueError, match="test error"):
            failing()


class TestObserveWithTracer:
    """Tests for observe with an enabled (mocked) tracer."""

    def test_span_name_and_operation(self, enabled_tracer):
        """Test that the span carries the given name and operation kind."""
        _, mock, mock_span = enabled_tracer

        @observe(name="hom", kind=OperationKind.HOM)
        def hom_dim(a, b):
            return a * b

        assert hom_dim(2, 3) == 6
        assert mock.start_as_current_span.call_args.kwargs["name"] == "hom"
        mock_span.set_attribute.assert_any_call(NilsubAttributes.OPERATION, OperationKind.HOM.value)
        mock_span.set_attribute.assert_any_call(NilsubAttributes.RESULT, "6")
        mock_span.set_attribute.assert_any_call(NilsubAttributes.STATUS, OperationStatus.OK.value)

    def test_arguments_captured(self, enabled_tracer):
        """Test that inputs are recorded as a JSON attribute."""
        _, _, mock_span = enabled_tracer

        @observe
        def shift(ell, amount=1):
            return ell + amount

        shift(4)
        mock_span.set_attribute.assert_any_call(NilsubAttributes.ARGUMENTS, '{"ell": 4, "amount": 1}')

    def test_output_not_captured(self, enabled_tracer):
        """Test capture_output=False keeps the result off the span."""
        _, _, mock_span = enabled_tracer

        @observe(capture_output=False)
        def big():
            return list(range(10))

        big()
        keys = [c.args[0] for c in mock_span.set_attribute.call_args_list]
        assert NilsubAttributes.RESULT not in keys
        assert NilsubAttributes.DURATION_MS in keys

    def test_error_recorded(self, enabled_tracer):
        """Test that errors are recorded on the span and re-raised."""
        _, _, mock_span = enabled_tracer

        @observe
        def failing():
            raise RuntimeError("boom")

        with pytest.raises(RuntimeError, match="boom"):
            failing()
        mock_span.set_attribute.assert_any_call(NilsubAttributes.STATUS, OperationStatus.ERROR.value)
        mock_span.set_attribute.assert_any_call(NilsubAttributes.ERROR_TYPE, "RuntimeError")
        mock_span.record_exception.assert_called_once()

    def test_pair_attributes(self, enabled_tracer, f3):
        """Test field, nilpotency, partition and dimension pair of a pair argument."""
        _, _, mock_span = enabled_tracer

        @observe(capture_input=False, capture_output=False)
        def identity(x):
            return x

        identity(make_pair(f3, 3, [3, 1], [[0, 1, 0, 0]]))
        mock_span.set_attribute.assert_any_call(NilsubAttributes.FIELD, "F_3")
        mock_span.set_attribute.assert_any_call(NilsubAttributes.NILPOTENCY, 3)
        mock_span.set_attribute.assert_any_call(NilsubAttributes.PARTITION, "3 1")
        mock_span.set_attribute.assert_any_call(NilsubAttributes.DIM_PAIR, "(4,2)")


class TestDomainAttributes:
    """Tests for the attribute helpers."""

    def test_field_and_n_arguments(self, f2):
        """Test a (field, n, ...) signature yields field and nilpotency."""
        found = _argument_attributes({"field": f2, "n": 4, "bound": 8})
        assert found == {NilsubAttributes.FIELD: str(f2), NilsubAttributes.NILPOTENCY: 4}

    def test_plain_values(self):
        """Test values without domain attributes give nothing."""
        assert _domain_attributes([1, 2]) == {}
        assert _argument_attributes({"a": 1}) == {}

    def test_census_counters(self, f2):
        """Test a census report exposes its counters."""
        report = census(f2, 2, 2)
        found = _domain_attributes(report)
        assert found[NilsubAttributes.CENSUS_INDECOMPOSABLES] == 5
        assert found[NilsubAttributes.CENSUS_PARTITIONS] == report.partitions
        assert found[NilsubAttributes.NILPOTENCY] == 2
