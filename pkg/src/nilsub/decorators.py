"""Decorators for tracing nilsub operations."""

from __future__ import annotations

import functools
import inspect
import json
import time
from typing import Any, Callable, Dict, Optional, TypeVar, Union, overload

from opentelemetry import trace
from opentelemetry.trace import Status, StatusCode

from nilsub.types import NilsubAttributes, OperationKind, OperationStatus

F = TypeVar("F", bound=Callable[..., Any])

# Span attributes are capped; pair objects can print as large matrices.
_MAX_ATTRIBUTE_LENGTH = 2048


def _serialize_value(value: Any) -> str:
    """Safely serialize a value to string for span attributes."""
    try:
        text = json.dumps(value, default=str)
    except (TypeError, ValueError):
        text = str(value)
    if len(text) > _MAX_ATTRIBUTE_LENGTH:
        return text[: _MAX_ATTRIBUTE_LENGTH - 3] + "..."
    return text


def _get_tracer_client() -> Any:
    """Get the nilsub tracer instance, if one was created."""
    from nilsub.tracing import NilsubTracer
    return NilsubTracer.get_instance()


def _capture_arguments(func: Callable[..., Any], args: tuple, kwargs: dict) -> dict:
    """Capture function arguments as a dictionary."""
    sig = inspect.signature(func)
    bound = sig.bind_partial(*args, **kwargs)
    bound.apply_defaults()
    return dict(bound.arguments)


def _domain_attributes(value: Any) -> Dict[str, Any]:
    """Small span attributes read off pair objects, covers and census reports."""
    out: Dict[str, Any] = {}
    field = getattr(value, "field", None)
    n = getattr(value, "n", None)
    if field is not None and isinstance(n, int):
        out[NilsubAttributes.FIELD] = str(field)
        out[NilsubAttributes.NILPOTENCY] = n
    dim_pair = getattr(value, "dim_pair", None)
    if dim_pair is not None:
        out[NilsubAttributes.DIM_PAIR] = str(dim_pair)
    parts = getattr(getattr(value, "partition", None), "parts", None)
    if parts is not None:
        out[NilsubAttributes.PARTITION] = " ".join(map(str, parts))
    if hasattr(value, "indecomposables") and isinstance(getattr(value, "partitions", None), int):
        out[NilsubAttributes.CENSUS_PARTITIONS] = value.partitions
        out[NilsubAttributes.CENSUS_CLASSES] = value.objects
        out[NilsubAttributes.CENSUS_INDECOMPOSABLES] = len(value.indecomposables)
    return out


def _argument_attributes(arguments: Dict[str, Any]) -> Dict[str, Any]:
    """Domain attributes of the first argument that has any, else of ``field``/``n``."""
    for value in arguments.values():
        found = _domain_attributes(value)
        if found:
            return found
    if "field" in arguments and isinstance(arguments.get("n"), int):
        return {
            NilsubAttributes.FIELD: str(arguments["field"]),
            NilsubAttributes.NILPOTENCY: arguments["n"],
        }
    return {}


def _record_error(span: trace.Span, error: Exception) -> None:
    """Record an error on a span."""
    span.set_attribute(NilsubAttributes.STATUS, OperationStatus.ERROR.value)
    span.set_attribute(NilsubAttributes.ERROR_MESSAGE, str(error))
    span.set_attribute(NilsubAttributes.ERROR_TYPE, type(error).__name__)
    span.set_status(Status(StatusCode.ERROR, str(error)))
    span.record_exception(error)


@overload
def observe(func: F) -> F: ...


@overload
def observe(
    name: Optional[str] = None,
    *,
    kind: OperationKind = OperationKind.INTERNAL,
    capture_input: bool = True,
    capture_output: bool = True,
) -> Callable[[F], F]: ...


def observe(
    func: Optional[F] = None,
    name: Optional[str] = None,
    *,
    kind: OperationKind = OperationKind.INTERNAL,
    capture_input: bool = True,
    capture_output: bool = True,
) -> Union[F, Callable[[F], F]]:
    """Trace a computation in an OpenTelemetry span.

    Without a :class:`~nilsub.tracing.NilsubTracer` instance the function runs
    untouched. Field, nilpotency, dimension pair and partition of pair-like
    arguments and results are recorded even when ``capture_input`` and
    ``capture_output`` are off; census reports add their counters.

    Example:
        >>> @observe
        ... def rank_profile(x):
        ...     ...

        >>> @observe(name="census", kind=OperationKind.CENSUS, capture_output=False)
        ... def census(field, n, bound):
        ...     ...
    """
    def decorator(fn: F) -> F:
        span_name = name or fn.__name__

        @functools.wraps(fn)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            client = _get_tracer_client()
            if client is None:
                return fn(*args, **kwargs)

            with client.tracer.start_as_current_span(name=span_name, kind=trace.SpanKind.INTERNAL) as span:
                started = time.perf_counter()
                span.set_attribute(NilsubAttributes.OPERATION, kind.value)
                try:
                    arguments = _capture_arguments(fn, args, kwargs)
                except TypeError:
                    arguments = {}
                for key, value in _argument_attributes(arguments).items():
                    span.set_attribute(key, value)
                if capture_input and arguments:
                    span.set_attribute(NilsubAttributes.ARGUMENTS, _serialize_value(arguments))

                try:
                    result = fn(*args, **kwargs)
                except Exception as e:
                    _record_error(span, e)
                    raise
                finally:
                    span.set_attribute(NilsubAttributes.DURATION_MS, (time.perf_counter() - started) * 1000)

                for key, value in _domain_attributes(result).items():
                    span.set_attribute(key, value)
                if capture_output:
                    span.set_attribute(NilsubAttributes.RESULT, _serialize_value(result))
                span.set_attribute(NilsubAttributes.STATUS, OperationStatus.OK.value)
                span.set_status(Status(StatusCode.OK))
                return result

        return wrapper  # type: ignore

    if func is not None:
        return decorator(func)
    return decorator
