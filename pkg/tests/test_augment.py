import json

import pytest

from moltext.dataset import CorpusSplit, MoleculeRecord
from moltext.errors import BudgetExhausted, CacheCorrupt, UnresolvedPlaceholder
from moltext.augment import (
    AugmentJob,
    IMAGE_CAPTION,
    MOLECULE_CAPTION,
    MOLECULE_DESCRIPTION,
    MockProvider,
    ProviderConfig,
    ResponseCache,
    SlidingWindowLimiter,
    TIMEOUT,
    build_prompt,
    http_transport,
    load_provider_configs,
    ok,
    pending_request_count,
    run_job,
    validate_caption,
)
from moltext.augment.cache import CacheEntry, CacheKey
from moltext.sampledata import make_corpus, rewrite_responder

RECORD = MoleculeRecord(
    "X1", "CCO", "The molecule is a primary alcohol that is ethane with a hydroxy group."
)

CLEAN = "An elaborate, descriptive and concise caption highlighting structural features."


def _cfg(**kw):
    base = dict(
        name="prov",
        endpoint="mock://",
        auth_env="MOLTEXT_TEST_KEY",
        model="test-model",
        max_retries=3,
        requests_per_minute=10_000,
    )
    base.update(kw)
    return ProviderConfig(**base)


def _job(records, cache_dir, providers, k=None, **kw):
    split = CorpusSplit(train=tuple(r.id for r in records), valid=(), test=())
    total = sum(r for _, r in providers)
    return AugmentJob(
        corpus=tuple(records),
        split=split,
        k=k if k is not None else total,
        providers=tuple(providers),
        cache_dir=str(cache_dir),
        **kw,
    )


# --- prompts -------------------------------------------------------------------

def test_molecule_prompt_contains_role_sentence():
    prompt = build_prompt(MOLECULE_CAPTION, RECORD)
    assert "You are now a chemical specialist in rewriting captions" in prompt
    assert "do not include the input SMILES" in prompt
    assert prompt.count("CCO") == 1
    assert RECORD.caption in prompt


def test_description_prompt_variant():
    prompt = build_prompt(MOLECULE_DESCRIPTION, RECORD)
    assert "rewriting descriptions for a molecule" in prompt
    assert "Description of the molecule:" in prompt


def test_image_prompt_variant():
    prompt = build_prompt(IMAGE_CAPTION, RECORD)
    assert "rewriting descriptions for an image" in prompt
    assert "CCO" not in prompt.split("Description of the image:")[0]


def test_unresolved_placeholder():
    from moltext.augment import PromptTemplate

    template = PromptTemplate("bad", "inst", "value: {unknown}")
    with pytest.raises(UnresolvedPlaceholder):
        build_prompt(template, RECORD)


def test_template_placeholders_unique():
    from moltext.augment import PromptTemplate

    with pytest.raises(ValueError):
        PromptTemplate("dup", "inst", "{SMILES} and {SMILES}")


# --- caption validation -----------------------------------------------------------

def test_reject_smiles_leak():
    verdict = validate_caption(f"A caption embedding {RECORD.smiles} verbatim inside.", RECORD)
    assert not verdict.accepted and verdict.reason == "smiles_leak"


def test_reject_linebreaks_and_escapes():
    assert validate_caption("first line\nsecond line of text", RECORD).reason == "linebreak"
    assert validate_caption("contains a literal \\n escape form", RECORD).reason == "linebreak"
    assert validate_caption("contains a literal \\t escape form", RECORD).reason == "linebreak"


def test_reject_empty_and_lengths():
    assert validate_caption("   ", RECORD).reason == "empty"
    assert validate_caption("too few words", RECORD).reason == "too_short"
    long_text = " ".join(["word"] * 600)
    assert validate_caption(long_text, RECORD).reason == "too_long"


def test_accept_trims_quotes():
    verdict = validate_caption(f'  "{CLEAN}"  ', RECORD)
    assert verdict.accepted
    assert verdict.text == CLEAN


# --- cache ------------------------------------------------------------------------

def test_cache_roundtrip_and_corruption(tmp_path):
    cache = ResponseCache(tmp_path)
    key = CacheKey("r1", "prov", "m", "hash", 1)
    entry = CacheEntry(key, "ok", "text", None, 1, "2025-01-01T00:00:00+00:00")
    cache.put(entry)
    assert cache.get(key) == entry
    (tmp_path / key.filename()).write_text("{broken", encoding="utf-8")
    with pytest.raises(CacheCorrupt):
        cache.get(key)


# --- job runner --------------------------------------------------------------------

def test_cold_run_request_count_and_idempotence(tmp_path):
    corpus = make_corpus(10, seed=1)
    mock = MockProvider(responder=rewrite_responder(corpus))
    providers = [(_cfg(name="provA"), 1), (_cfg(name="provB", model="other"), 1)]
    job = _job(corpus, tmp_path, providers)
    records, report = run_job(job, transport=mock.transport(), sleep=lambda s: None)
    assert len(mock.requests) == 20
    assert report.fetched == 20 and report.cached == 0 and report.failed == 0
    assert all(len(r.rewrites) == 2 for r in records)
    assert [rw.provider for rw in records[0].rewrites] == ["provA", "provB"]
    # immediate rerun: zero requests, byte-identical output
    records2, report2 = run_job(job, transport=mock.transport(), sleep=lambda s: None)
    assert len(mock.requests) == 20
    assert report2.fetched == 0 and report2.cached == 20
    assert records2 == records


def test_wire_contract_body(tmp_path):
    corpus = make_corpus(2, seed=2)
    mock = MockProvider(responder=rewrite_responder(corpus))
    job = _job(corpus, tmp_path, [(_cfg(temperature=0.7), 2)])
    run_job(job, transport=mock.transport(), sleep=lambda s: None)
    body = mock.requests[0]
    assert set(body) == {"model", "messages", "temperature", "round"}
    assert body["model"] == "test-model"
    assert body["temperature"] == 0.7
    assert body["messages"][0]["role"] == "system"
    assert body["messages"][0]["content"].startswith("You are now a chemical specialist")
    assert body["messages"][1]["role"] == "user"
    assert "SMILES string of target molecule:" in body["messages"][1]["content"]
    rounds = sorted(b["round"] for b in mock.requests[:2] + mock.requests[2:])
    assert rounds == [1, 1, 2, 2]


def test_rejected_leak_retries_then_fails(tmp_path):
    leaky = f"A rewrite that still contains {RECORD.smiles} every single time."
    cfg = _cfg(max_retries=3)
    mock = MockProvider(script=[ok(leaky)] * 10)
    job = _job([RECORD], tmp_path, [(cfg, 1)])
    records, report = run_job(job, transport=mock.transport(), sleep=lambda s: None)
    assert len(mock.requests) == 4  # initial + max_retries
    assert report.retries == 3
    assert report.rejected == 4
    assert report.failed == 1
    assert report.failures[0]["reason"] == "smiles_leak"
    assert records[0].rewrites == ()
    # the failure is cached: a rerun stays quiet
    _, report2 = run_job(job, transport=mock.transport(), sleep=lambda s: None)
    assert len(mock.requests) == 4
    assert report2.failed == 1 and report2.cached == 1


def test_transport_failure_then_recovery(tmp_path):
    mock = MockProvider(script=[TIMEOUT, ok(CLEAN)])
    job = _job([RECORD], tmp_path, [(_cfg(), 1)])
    records, report = run_job(job, transport=mock.transport(), sleep=lambda s: None)
    assert report.retries == 1
    assert report.fetched == 2
    assert records[0].rewrites[0].text == CLEAN


def test_budget_exhausted_is_resumable(tmp_path):
    corpus = make_corpus(6, seed=4)
    mock = MockProvider(responder=rewrite_responder(corpus))
    job = _job(corpus, tmp_path, [(_cfg(), 1)], budget=4)
    with pytest.raises(BudgetExhausted):
        run_job(job, transport=mock.transport(), sleep=lambda s: None)
    assert len(mock.requests) == 4
    # resume with a budget that covers the rest
    job2 = _job(corpus, tmp_path, [(_cfg(), 1)], budget=10)
    records, report = run_job(job2, transport=mock.transport(), sleep=lambda s: None)
    assert report.cached == 4 and report.fetched == 2
    assert all(len(r.rewrites) == 1 for r in records)


def test_split_safety(tmp_path):
    corpus = make_corpus(8, seed=5)
    train_ids = tuple(r.id for r in corpus[:3])
    split = CorpusSplit(train=train_ids, valid=(corpus[3].id,), test=tuple(r.id for r in corpus[4:]))
    mock = MockProvider(responder=rewrite_responder(corpus))
    job = AugmentJob(
        corpus=tuple(corpus), split=split, k=1, providers=((_cfg(), 1),), cache_dir=str(tmp_path)
    )
    records, _ = run_job(job, transport=mock.transport(), sleep=lambda s: None)
    assert {r.base.id for r in records} == set(train_ids)
    seen_smiles = set()
    for body in mock.requests:
        message = body["messages"][1]["content"]
        seen_smiles.add(message.split("SMILES string of target molecule: ")[1].split(".\n")[0])
    assert seen_smiles == {r.smiles for r in corpus[:3]}


def test_dry_run_counts(tmp_path):
    corpus = make_corpus(5, seed=6)
    job = _job(corpus, tmp_path, [(_cfg(), 2)])
    assert pending_request_count(job) == 10
    mock = MockProvider(responder=rewrite_responder(corpus))
    run_job(job, transport=mock.transport(), sleep=lambda s: None)
    assert pending_request_count(job) == 0


def test_rate_limiter_sliding_window_simulated_clock():
    clock_now = [0.0]

    def clock():
        return clock_now[0]

    def sleep(seconds):
        clock_now[0] += seconds

    limiter = SlidingWindowLimiter(rate=5, window=60.0, clock=clock, sleep=sleep)
    stamps = []
    for _ in range(23):
        limiter.acquire()
        stamps.append(clock())
        clock_now[0] += 1.0  # one second of work between requests
    for i, start in enumerate(stamps):
        inside = [t for t in stamps if start <= t < start + 60.0]
        assert len(inside) <= 5, f"window starting at {start} holds {len(inside)}"


def test_job_through_rate_limiter_simulated_clock(tmp_path):
    corpus = make_corpus(12, seed=8)
    clock_now = [0.0]

    def clock():
        return clock_now[0]

    def sleep(seconds):
        clock_now[0] += seconds

    mock = MockProvider(responder=rewrite_responder(corpus), clock=clock)
    cfg = _cfg(requests_per_minute=4, max_concurrency=1)
    job = _job(corpus, tmp_path, [(cfg, 1)])
    run_job(job, transport=mock.transport(), clock=clock, sleep=sleep)
    times = mock.request_times
    assert len(times) == 12
    for start in times:
        inside = [t for t in times if start <= t < start + 60.0]
        assert len(inside) <= 4


def test_http_server_end_to_end(tmp_path, monkeypatch):
    corpus = make_corpus(3, seed=9)
    mock = MockProvider(responder=rewrite_responder(corpus))
    url, server = mock.serve_http()
    monkeypatch.setenv("MOLTEXT_TEST_KEY", "sekret")
    try:
        cfg = _cfg(endpoint=url, timeout=10.0)
        job = _job(corpus, tmp_path, [(cfg, 1)])
        records, report = run_job(job, transport=http_transport, sleep=lambda s: None)
        assert report.fetched == 3
        assert all(len(r.rewrites) == 1 for r in records)
        assert mock.auth_headers[0] == "Bearer sekret"
    finally:
        server.close()


def test_provider_config_file(tmp_path):
    payload = {
        "providers": [
            {
                "name": "gpt",
                "endpoint": "https://api.example/v1/chat",
                "auth_env": "KEY_A",
                "model": "gpt-3.5-turbo",
                "rounds": 1,
                "requests_per_minute": 60,
            },
            {
                "name": "gemini",
                "endpoint": "https://api.example/v2/chat",
                "auth_env": "KEY_B",
                "model": "gemini-pro",
                "rounds": 1,
            },
        ]
    }
    path = tmp_path / "providers.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    configs = load_provider_configs(path)
    assert [(c.name, rounds) for c, rounds in configs] == [("gpt", 1), ("gemini", 1)]


def test_job_requires_rounds_summing_to_k(tmp_path):
    with pytest.raises(ValueError):
        _job([RECORD], tmp_path, [(_cfg(), 1)], k=2)


def test_accepted_rewrites_pass_validation(tmp_path):
    corpus = make_corpus(15, seed=10)
    mock = MockProvider(responder=rewrite_responder(corpus))
    job = _job(corpus, tmp_path, [(_cfg(), 2)])
    records, _ = run_job(job, transport=mock.transport(), sleep=lambda s: None)
    for record in records:
        for rewrite in record.rewrites:
            verdict = validate_caption(rewrite.text, record.base)
            assert verdict.accepted
            assert record.base.smiles not in rewrite.text
