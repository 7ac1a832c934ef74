import numpy as np


def seed_sequence(seed, *key):
    """Deterministic child stream of ``seed`` addressed by an integer ``key`` path.

    Unlike ``SeedSequence.spawn`` this is stateless, so the same (seed, key)
    always yields the same stream regardless of call order or threading.
    """
    if isinstance(seed, np.random.SeedSequence):
        base = seed
    else:
        base = np.random.SeedSequence(int(seed))
    return np.random.SeedSequence(base.entropy, spawn_key=tuple(base.spawn_key) + tuple(int(k) for k in key))


def rng(seed, *key):
    return np.random.default_rng(seed_sequence(seed, *key))
