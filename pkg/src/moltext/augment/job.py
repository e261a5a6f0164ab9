"""The rewriting job runner.

For every training record and every (provider, round) the runner consults
the response cache, and only on a miss sends one request, validates the
returned caption, and retries rejected or failed attempts with exponential
backoff before recording a permanent failure. Everything lands in the
cache first, so rerunning an interrupted job is idempotent and a warm
rerun issues zero requests.
"""

from __future__ import annotations

import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

from ..dataset import AugmentedRecord, CaptionRewrite, CorpusSplit, MoleculeRecord
from ..errors import AllProvidersFailed, BudgetExhausted
from .cache import CacheEntry, CacheKey, ResponseCache
from .policy import DEFAULT_POLICY, ValidationPolicy, validate_caption
from .providers import (
    ProviderConfig,
    RetryPolicy,
    SlidingWindowLimiter,
    TransportError,
    extract_text,
    http_transport,
)
from .templates import MOLECULE_CAPTION, PromptTemplate, render_message


@dataclass(frozen=True)
class AugmentJob:
    corpus: tuple[MoleculeRecord, ...]
    split: CorpusSplit
    k: int
    providers: tuple[tuple[ProviderConfig, int], ...]  # (config, rounds)
    cache_dir: str
    template: PromptTemplate = MOLECULE_CAPTION
    policy: ValidationPolicy = DEFAULT_POLICY
    budget: int | None = None
    strict_failures: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        total = sum(rounds for _, rounds in self.providers)
        if total != self.k:
            raise ValueError(f"provider rounds sum to {total}, expected k={self.k}")

    def train_records(self) -> list[MoleculeRecord]:
        wanted = set(self.split.train)
        return [r for r in self.corpus if r.id in wanted]


@dataclass(frozen=True)
class WorkItem:
    record: MoleculeRecord
    config: ProviderConfig
    round: int  # per-provider round, 1-based


@dataclass
class JobReport:
    cached: int = 0
    fetched: int = 0  # network requests issued
    rejected: int = 0  # responses that failed caption validation
    failed: int = 0  # permanently failed (record, provider, round) items
    retries: int = 0
    estimated_tokens: int = 0
    failures: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "cached": self.cached,
            "fetched": self.fetched,
            "rejected": self.rejected,
            "failed": self.failed,
            "retries": self.retries,
            "estimated_tokens": self.estimated_tokens,
            "failures": sorted(
                self.failures,
                key=lambda f: (f["record_id"], f["provider"], f["round"]),
            ),
        }


def plan_items(job: AugmentJob) -> list[WorkItem]:
    items = []
    for record in job.train_records():
        for config, rounds in job.providers:
            for round_idx in range(1, rounds + 1):
                items.append(WorkItem(record, config, round_idx))
    return items


def pending_request_count(job: AugmentJob) -> int:
    """How many requests a run would issue right now (dry run)."""
    cache = ResponseCache(job.cache_dir)
    return sum(
        1
        for item in plan_items(job)
        if cache.get(_key_for(job, item)) is None
    )


def _key_for(job: AugmentJob, item: WorkItem) -> CacheKey:
    return CacheKey(
        record_id=item.record.id,
        provider=item.config.name,
        model=item.config.model,
        template_hash=job.template.content_hash(),
        round=item.round,
    )


class _Stats:
    def __init__(self, budget):
        self.lock = threading.Lock()
        self.report = JobReport()
        self.budget = budget

    def reserve_request(self) -> None:
        with self.lock:
            if self.budget is not None and self.report.fetched >= self.budget:
                raise BudgetExhausted(self.budget)
            self.report.fetched += 1

    def add(self, **deltas) -> None:
        with self.lock:
            for name, delta in deltas.items():
                setattr(self.report, name, getattr(self.report, name) + delta)

    def record_failure(self, item: WorkItem, reason: str) -> None:
        with self.lock:
            self.report.failed += 1
            self.report.failures.append(
                {
                    "record_id": item.record.id,
                    "provider": item.config.name,
                    "round": item.round,
                    "reason": reason,
                }
            )


def run_job(
    job: AugmentJob,
    transport=http_transport,
    clock=time.monotonic,
    sleep=time.sleep,
    retry_rng=None,
) -> tuple[list[AugmentedRecord], JobReport]:
    cache = ResponseCache(job.cache_dir)
    stats = _Stats(job.budget)
    items = plan_items(job)
    by_provider: dict[str, list[WorkItem]] = {}
    for item in items:
        by_provider.setdefault(item.config.name, []).append(item)

    limiters = {
        name: SlidingWindowLimiter(
            provider_items[0].config.requests_per_minute, clock=clock, sleep=sleep
        )
        for name, provider_items in by_provider.items()
    }

    def process(item: WorkItem) -> None:
        key = _key_for(job, item)
        entry = cache.get(key)
        if entry is not None:
            stats.add(cached=1)
            if entry.status == "failed":
                stats.record_failure(item, entry.reason or "unknown")
            return
        config = item.config
        retry = RetryPolicy(
            max_retries=config.max_retries, sleep=sleep, rng=retry_rng or random.Random()
        )
        message = render_message(job.template, item.record)
        body = {
            "model": config.model,
            "messages": [
                {"role": "system", "content": job.template.instruction},
                {"role": "user", "content": message},
            ],
            "temperature": config.temperature,
            "round": item.round,
        }
        attempts = 0
        last_reason = "unknown"
        while True:
            stats.reserve_request()
            limiters[config.name].acquire()
            try:
                payload = transport(config, body)
                text = extract_text(payload, config.response_path)
            except TransportError as exc:
                last_reason = f"transport: {exc}"
            else:
                stats.add(
                    estimated_tokens=(
                        len(job.template.instruction) + len(message) + len(text)
                    )
                    // 4
                )
                verdict = validate_caption(text, item.record, job.policy)
                if verdict.accepted:
                    cache.put(
                        CacheEntry(
                            key=key,
                            status="ok",
                            text=verdict.text,
                            reason=None,
                            attempts=attempts + 1,
                            created_at=datetime.now(timezone.utc).isoformat(),
                        )
                    )
                    return
                stats.add(rejected=1)
                last_reason = verdict.reason or "rejected"
            attempts += 1
            if attempts > config.max_retries:
                cache.put(
                    CacheEntry(
                        key=key,
                        status="failed",
                        text=None,
                        reason=last_reason,
                        attempts=attempts,
                        created_at=datetime.now(timezone.utc).isoformat(),
                    )
                )
                stats.record_failure(item, last_reason)
                return
            stats.add(retries=1)
            retry.wait(attempts - 1)

    first_error: list[BaseException] = []
    pools = []
    futures = []
    try:
        for name, provider_items in by_provider.items():
            pool = ThreadPoolExecutor(
                max_workers=provider_items[0].config.max_concurrency,
                thread_name_prefix=f"augment-{name}",
            )
            pools.append(pool)
            futures.extend(pool.submit(process, item) for item in provider_items)
        for future in futures:
            try:
                future.result()
            except BudgetExhausted as exc:
                if not first_error:
                    first_error.append(exc)
    finally:
        for pool in pools:
            pool.shutdown(wait=True)
    if first_error:
        raise first_error[0]

    records = _assemble(job, cache)
    if job.strict_failures:
        for record in job.train_records():
            accepted = next(r for r in records if r.base.id == record.id).rewrites
            if job.k >= 1 and not accepted:
                raise AllProvidersFailed(record.id)
    return records, stats.report


def _assemble(job: AugmentJob, cache: ResponseCache) -> list[AugmentedRecord]:
    out = []
    for record in job.train_records():
        rewrites = []
        for config, rounds in job.providers:
            for round_idx in range(1, rounds + 1):
                key = _key_for(job, WorkItem(record, config, round_idx))
                entry = cache.get(key)
                if entry is not None and entry.status == "ok" and entry.text:
                    rewrites.append(
                        CaptionRewrite(
                            text=entry.text,
                            provider=config.name,
                            round=round_idx,
                            created_at=datetime.fromisoformat(entry.created_at),
                        )
                    )
        out.append(AugmentedRecord(record, tuple(rewrites)))
    return out
