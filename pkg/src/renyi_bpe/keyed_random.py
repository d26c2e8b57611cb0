"""Counter-based randomness: every draw is a keyed hash of its coordinates.

A draw depends only on ``(seed, purpose, *coordinates)``, never on call
order, so results are stable across platforms, processes and chunking.
"""

import hashlib

GENERATOR_NAME = "blake2b-keyed-v1"


def keyed_uint64(seed: int, purpose: str, *coords) -> int:
    """64-bit value for the given coordinates. ``seed`` is taken modulo 2**64."""
    h = hashlib.blake2b(digest_size=8, person=b"renyi-bpe-v1")
    h.update((seed % (1 << 64)).to_bytes(8, "little"))
    h.update(purpose.encode("utf-8"))
    for c in coords:
        data = c.encode("utf-8") if isinstance(c, str) else int(c).to_bytes(8, "little", signed=True)
        h.update(len(data).to_bytes(4, "little"))
        h.update(data)
    return int.from_bytes(h.digest(), "little")


def keyed_index(seed: int, purpose: str, k: int, *coords) -> int:
    """Uniform integer in ``1..k`` (bias below 2**-50 for any practical k)."""
    return 1 + keyed_uint64(seed, purpose, *coords) % k


def keyed_sample(items, k: int, seed: int, purpose: str) -> list:
    """Draw ``k`` distinct items uniformly without replacement.

    Items are ordered by their keyed hash (a seeded random permutation) and
    the first ``k`` are taken, so the draw is a pure function of the item set.
    """
    ordered = sorted(items, key=lambda it: (keyed_uint64(seed, purpose, it), it))
    return ordered[:k]
