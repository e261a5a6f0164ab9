"""LLM caption-rewriting pipeline: prompts, validation, providers, jobs."""

from .cache import CacheEntry, CacheKey, ResponseCache
from .job import AugmentJob, JobReport, pending_request_count, plan_items, run_job
from .mock import MALFORMED, TIMEOUT, MockProvider, http_error, ok
from .policy import DEFAULT_POLICY, CaptionVerdict, ValidationPolicy, validate_caption
from .providers import (
    ProviderConfig,
    RetryPolicy,
    SlidingWindowLimiter,
    TransportError,
    extract_text,
    http_transport,
    load_provider_configs,
)
from .templates import (
    IMAGE_CAPTION,
    MOLECULE_CAPTION,
    MOLECULE_DESCRIPTION,
    TEMPLATES,
    PromptTemplate,
    build_prompt,
    render_message,
)

__all__ = [
    "AugmentJob",
    "CacheEntry",
    "CacheKey",
    "CaptionVerdict",
    "DEFAULT_POLICY",
    "IMAGE_CAPTION",
    "JobReport",
    "MALFORMED",
    "MOLECULE_CAPTION",
    "MOLECULE_DESCRIPTION",
    "MockProvider",
    "PromptTemplate",
    "ProviderConfig",
    "ResponseCache",
    "RetryPolicy",
    "SlidingWindowLimiter",
    "TEMPLATES",
    "TIMEOUT",
    "TransportError",
    "ValidationPolicy",
    "build_prompt",
    "extract_text",
    "http_error",
    "http_transport",
    "load_provider_configs",
    "ok",
    "pending_request_count",
    "plan_items",
    "render_message",
    "run_job",
    "validate_caption",
]
