"""Pytest configuration and fixtures."""

import os
import pytest
from unittest.mock import MagicMock, patch

# Set test environment variables before importing the package
os.environ["NILSUB_SEED"] = "1234"
os.environ["NILSUB_FIELD"] = "2"
os.environ["NILSUB_SERVICE_NAME"] = "test-service"
os.environ["NILSUB_TRACING_ENABLED"] = "false"  # Disable span export in tests
os.environ["NILSUB_JOBS"] = "1"


@pytest.fixture(autouse=True)
def reset_tracer():
    """Reset the NilsubTracer singleton before each test."""
    from nilsub.tracing import NilsubTracer
    NilsubTracer.reset()
    yield
    NilsubTracer.reset()


@pytest.fixture
def mock_tracer():
    """Create a mock tracer for testing."""
    mock = MagicMock()
    mock_span = MagicMock()
    mock_span.__enter__ = MagicMock(return_value=mock_span)
    mock_span.__exit__ = MagicMock(return_value=False)
    mock.start_as_current_span.return_value = mock_span
    return mock, mock_span


@pytest.fixture
def enabled_tracer(mock_tracer):
    """Create a tracer with export enabled but mocked."""
    from nilsub.tracing import NilsubTracer

    mock, mock_span = mock_tracer

    with patch.dict(os.environ, {"NILSUB_TRACING_ENABLED": "true"}):
        with patch("nilsub.tracing.OTLPSpanExporter"):
            with patch("nilsub.tracing.BatchSpanProcessor"):
                with patch("nilsub.tracing.TracerProvider"):
                    with patch("nilsub.tracing.trace") as mock_trace:
                        mock_trace.get_tracer.return_value = mock
                        tracer = NilsubTracer()
                        tracer._tracer = mock
                        yield tracer, mock, mock_span


@pytest.fixture
def f2():
    from nilsub.exactla import Field
    return Field.prime(2)


@pytest.fixture
def f3():
    from nilsub.exactla import Field
    return Field.prime(3)


@pytest.fixture
def f5():
    from nilsub.exactla import Field
    return Field.prime(5)


@pytest.fixture
def rationals():
    from nilsub.exactla import Field
    return Field.rationals()
