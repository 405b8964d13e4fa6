"""Deterministic derivation of per-stage seeds from one experiment seed."""

import hashlib


def derive_seed(seed: int, label: str) -> int:
    """Derive a decorrelated 63-bit child seed for a named pipeline stage.

    The same (seed, label) pair always yields the same child seed, so every
    stage of a run can own an independent RNG stream while the whole run
    stays reproducible from a single seed.
    """
    digest = hashlib.sha256(f"{seed}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
