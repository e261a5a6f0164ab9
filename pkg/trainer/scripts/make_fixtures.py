#!/usr/bin/env python3
"""Regenerate the trainer's corpus fixtures from the moltext package.

Produces a fixed 200-record training subset with two rewrites per record
(through the mock provider pipeline) and a 40-record validation set, all
in the augmented JSONL interchange format. Run from the repository root:

    python trainer/scripts/make_fixtures.py
"""

import tempfile
from pathlib import Path

from moltext.augment import AugmentJob, MockProvider, ProviderConfig, run_job
from moltext.dataset import AugmentedRecord, CorpusSplit, save_augmented
from moltext.sampledata import make_corpus, rewrite_responder

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
SEED = 31415
N_TRAIN = 200
N_VALID = 40


def main():
    corpus = make_corpus(N_TRAIN + N_VALID, seed=SEED)
    train, valid = corpus[:N_TRAIN], corpus[N_TRAIN:]
    split = CorpusSplit(train=tuple(r.id for r in train), valid=tuple(r.id for r in valid), test=())

    mock = MockProvider(responder=rewrite_responder(corpus))
    providers = (
        (ProviderConfig(name="alpha", endpoint="mock://", auth_env="NONE",
                        model="alpha-chat", requests_per_minute=10**6), 1),
        (ProviderConfig(name="beta", endpoint="mock://", auth_env="NONE",
                        model="beta-chat", requests_per_minute=10**6), 1),
    )
    with tempfile.TemporaryDirectory() as cache_dir:
        job = AugmentJob(corpus=tuple(corpus), split=split, k=2,
                         providers=providers, cache_dir=cache_dir)
        records, report = run_job(job, transport=mock.transport(), sleep=lambda s: None)
    assert report.failed == 0, report.to_dict()
    assert all(len(r.rewrites) == 2 for r in records)

    FIXTURES.mkdir(exist_ok=True)
    save_augmented(records, FIXTURES / "train_aug.jsonl")
    save_augmented([AugmentedRecord(r, ()) for r in valid], FIXTURES / "valid.jsonl")
    print(f"wrote {len(records)} train and {len(valid)} valid records to {FIXTURES}")


if __name__ == "__main__":
    main()
