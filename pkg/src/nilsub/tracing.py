"""Process-wide OpenTelemetry tracer for nilsub computations.

Spans go out over OTLP/HTTP only when ``NILSUB_TRACING_ENABLED`` is set.
Otherwise :attr:`NilsubTracer.tracer` is the API's no-op tracer and the
``observe`` decorator adds nothing but a function call.
"""

from __future__ import annotations

import atexit
import logging
from contextlib import contextmanager
from typing import Any, Dict, Iterator, Optional

from opentelemetry import trace
from opentelemetry.exporter.otlp.proto.http.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk.resources import SERVICE_NAME, Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor
from opentelemetry.semconv.resource import ResourceAttributes

from nilsub import __version__
from nilsub.config import NilsubConfig
from nilsub.types import NilsubAttributes

logger = logging.getLogger(__name__)

_TRACER_NAME = "nilsub"
_LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"

def configure_logging(debug: bool) -> None:
    """Send debug records of the ``nilsub`` loggers to stderr when ``debug`` is set."""
    if not debug:
        return
    logging.basicConfig(level=logging.DEBUG, format=_LOG_FORMAT)
    logging.getLogger("nilsub").setLevel(logging.DEBUG)

def build_resource(config: NilsubConfig) -> Resource:
    """Attributes attached to every exported span: service, version, field, seed and data."""
    return Resource.create({
        SERVICE_NAME: config.service_name,
        ResourceAttributes.SERVICE_VERSION: __version__,
        NilsubAttributes.FIELD: config.default_field,
        NilsubAttributes.SEED: config.seed,
        NilsubAttributes.DATA_DIR: str(config.data_dir),
    })

def build_provider(config: NilsubConfig) -> TracerProvider:
    """Tracer provider batching spans to ``<endpoint>/v1/traces``."""
    provider = TracerProvider(resource=build_resource(config))
    exporter = OTLPSpanExporter(endpoint=config.endpoint.rstrip("/") + "/v1/traces")
    provider.add_span_processor(BatchSpanProcessor(exporter))
    return provider

class NilsubTracer:
    """One tracer per process, created by the CLI or by library users.

    Censuses and verification runs can take minutes, so their spans are the
    main thing worth exporting; everything below them is nested through
    :func:`nilsub.decorators.observe`.

    Example:
        >>> from nilsub.tracing import NilsubTracer
        >>> tracer = NilsubTracer()
        >>> with tracer.start_span("census") as span:
        ...     span.set_attribute("nilsub.nilpotency", 4)
    """

    _instance: Optional["NilsubTracer"] = None
    _initialized: bool = False

    def __new__(cls, *args: Any, **kwargs: Any) -> "NilsubTracer":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self, config: Optional[NilsubConfig] = None) -> None:
        """Create the tracer; later calls return the first instance unchanged.

        Args:
            config: Configuration to use. Read from the environment when omitted.
        """
        if self._initialized:
            return

        self.config = config if config is not None else NilsubConfig.from_env()
        configure_logging(self.config.debug)

        self._provider: Optional[TracerProvider] = None
        self._tracer: Optional[trace.Tracer] = None
        if self.config.tracing_enabled:
            self._provider = build_provider(self.config)
            trace.set_tracer_provider(self._provider)
            self._tracer = trace.get_tracer(_TRACER_NAME, __version__)
            logger.debug(f"exporting spans of {self.config.service_name} to {self.config.endpoint}")

        self._initialized = True
        atexit.register(self.shutdown)

    @property
    def enabled(self) -> bool:
        """Whether spans are exported."""
        return self._tracer is not None

    @property
    def tracer(self) -> trace.Tracer:
        """The exporting tracer, or the no-op tracer when disabled."""
        if self._tracer is None:
            return trace.get_tracer(f"{_TRACER_NAME}-noop")
        return self._tracer

    def start_span(self, name: str, attributes: Optional[Dict[str, Any]] = None) -> Any:
        """Start ``name`` as the current span; use as a context manager."""
        return self.tracer.start_as_current_span(
            name=name,
            kind=trace.SpanKind.INTERNAL,
            attributes=attributes,
        )

    @contextmanager
    def command_span(self, command: str, field: str, n: Optional[int] = None) -> Iterator[Any]:
        """Span around one CLI command, tagged with its field and nilpotency bound."""
        attributes: Dict[str, Any] = {
            NilsubAttributes.OPERATION: command,
            NilsubAttributes.FIELD: field,
        }
        if n is not None:
            attributes[NilsubAttributes.NILPOTENCY] = n
        with self.start_span(f"nilsub.cli.{command}", attributes) as span:
            yield span

    def flush(self) -> None:
        """Export pending spans now."""
        if self._provider is not None:
            self._provider.force_flush()

    def shutdown(self) -> None:
        """Flush and release the exporter; safe to call twice."""
        provider, self._provider = self._provider, None
        if provider is not None:
            provider.shutdown()
            logger.debug("nilsub tracer shut down")

    @classmethod
    def get_instance(cls) -> Optional["NilsubTracer"]:
        return cls._instance

    @classmethod
    def reset(cls) -> None:
        """Drop the current instance; used between tests."""
        if cls._instance is not None:
            cls._instance.shutdown()
        cls._instance = None
        cls._initialized = False
