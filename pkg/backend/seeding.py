import hashlib
import random
from typing import Any


def derive_rng(seed: int, *path: Any) -> random.Random:
    """Independent RNG stream for a path below a base seed.

    Uses sha256 of the path, never the builtin hash(), so streams are stable
    across processes and independent of the order in which they are created.
    """
    label = "/".join(str(part) for part in (seed, *path))
    digest = hashlib.sha256(label.encode("utf-8")).hexdigest()[:16]
    return random.Random(int(digest, 16))
