"""Counter-based deterministic random streams.

Samples are produced in fixed-size blocks, each from a Philox generator
keyed by (seed, block index).  The draw for sample i therefore depends only
on (seed, i), never on how work is sharded, so estimates are bit-identical
under any execution layout.
"""

import hashlib

import numpy as np

BLOCK = 8192


def derive_seed(seed, *tags):
    """Stable sub-seed from a base seed and string/int tags."""
    h = hashlib.sha256(repr((int(seed),) + tuple(tags)).encode()).digest()
    return int.from_bytes(h[:8], "little")


def block_generator(seed, block):
    key = np.array([np.uint64(seed & (2 ** 64 - 1)), np.uint64(block)],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def blocks(seed, total):
    """Yield (offset, count, Generator) triples covering `total` samples."""
    done = 0
    b = 0
    while done < total:
        m = min(BLOCK, total - done)
        yield done, m, block_generator(seed, b)
        done += m
        b += 1
