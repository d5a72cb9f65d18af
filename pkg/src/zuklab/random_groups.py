"""Random presentation samplers and the word combinatorics behind them.

Words are tuples of nonzero signed integers: i is the i-th generator,
-i its inverse.  Four samplers are provided: a fixed-count density
model, two independent-inclusion models over cyclically reduced words
(full length-l population, and concatenations of three positive-ended
pieces), and the positive triangular model whose relators are ordered
positive triples.  Independent inclusion is realized exactly as a
Binomial count followed by distinct uniform draws (exchangeability).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_DENSITY_COUNT_BITS = 48
_EXPECTED_COUNT_CAP = 2**31
_INT64_SAFE = 2**62


class DeskScaleError(RuntimeError):
    """Requested parameters produce counts beyond desk scale."""


@dataclass
class Presentation:
    """Group presentation data: alphabet size plus relator words.

    positive_only marks presentations whose relators are ordered
    positive triples (length 3, positive letters).
    """

    alphabet_size: int
    relators: tuple[tuple[int, ...], ...]
    positive_only: bool = False

    def __post_init__(self):
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be >= 1")
        rels = tuple(tuple(int(c) for c in w) for w in self.relators)
        for w in rels:
            for c in w:
                if c == 0 or abs(c) > self.alphabet_size:
                    raise ValueError(f"letter {c} outside alphabet of size {self.alphabet_size}")
            if self.positive_only:
                if len(w) != 3 or any(c < 0 for c in w):
                    raise ValueError(f"positive presentations need positive length-3 relators, got {w}")
        self.relators = rels

    def to_json_dict(self) -> dict:
        return {
            "alphabet": self.alphabet_size,
            "positive_only": self.positive_only,
            "relators": [list(w) for w in self.relators],
        }


def presentation_from_json(data: dict) -> Presentation:
    return Presentation(
        alphabet_size=int(data["alphabet"]),
        relators=tuple(tuple(int(c) for c in w) for w in data["relators"]),
        positive_only=bool(data.get("positive_only", False)),
    )


@dataclass
class ModelParams:
    """Sampler parameters; which fields apply depends on the model."""

    model: str
    seed: int
    k: int | None = None
    l: int | None = None
    d: float | None = None
    rho: float | None = None
    m: int | None = None
    alpha: float | None = None
    C: float | None = None

    _REQUIRED = {
        "density": ("k", "l", "d"),
        "binomial": ("k", "l", "rho"),
        "bprime": ("k", "l", "rho"),
        "mplus": ("m", "rho"),
    }

    def validate(self) -> None:
        if self.model not in self._REQUIRED:
            raise ValueError(f"unknown model {self.model!r}")
        for name in self._REQUIRED[self.model]:
            if getattr(self, name) is None:
                raise ValueError(f"model {self.model!r} requires parameter {name!r}")
        if self.d is not None and not (0.0 <= self.d <= 1.0):
            raise ValueError("d must lie in [0, 1]")
        if self.rho is not None and not (0.0 <= self.rho <= 1.0):
            raise ValueError("rho must lie in [0, 1]")
        if self.model == "bprime" and self.l is not None and self.l % 3 != 0:
            raise ValueError("bprime requires l divisible by 3")

    def to_dict(self) -> dict:
        out = {"model": self.model, "seed": self.seed}
        for name in ("k", "l", "d", "rho", "m", "alpha", "C"):
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        return out


def sample_from_params(params: ModelParams) -> Presentation:
    params.validate()
    if params.model == "density":
        return sample_density(params.k, params.l, params.d, params.seed)
    if params.model == "binomial":
        return sample_binomial(params.k, params.l, params.rho, params.seed)
    if params.model == "bprime":
        return sample_bprime(params.k, params.l, params.rho, params.seed)
    return sample_mplus(params.m, params.rho, params.seed)


def _rng(seed: int, *extra: int) -> np.random.Generator:
    entropy = [int(seed) % 2**64] + [int(e) % 2**64 for e in extra]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def is_reduced(word: tuple[int, ...]) -> bool:
    """No adjacent mutually inverse letters."""
    if any(c == 0 for c in word):
        return False
    return all(word[i + 1] != -word[i] for i in range(len(word) - 1))


def is_cyclically_reduced(word: tuple[int, ...]) -> bool:
    """Reduced, and first/last letters are not mutually inverse."""
    if not word:
        raise ValueError("empty word")
    return is_reduced(word) and word[0] != -word[-1]


def count_cyclically_reduced(k: int, l: int) -> int:
    """Number of cyclically reduced words of length l over k generators.

    Closed form: (2k-1)^l + 1 + (k-1)(1 + (-1)^l).
    """
    if k < 1 or l < 1:
        raise ValueError("need k >= 1 and l >= 1")
    return (2 * k - 1) ** l + 1 + (k - 1) * (1 + (-1) ** l)


def sample_cyclically_reduced(k: int, l: int, rng: np.random.Generator) -> tuple[int, ...]:
    """One uniform cyclically reduced word of length l.

    Builds a uniform reduced word letter by letter (every reduced prefix
    has equally many continuations) and rejects non-cyclically-reduced
    results; acceptance >= (2k-2)/(2k-1).
    """
    letters = list(range(1, k + 1)) + list(range(-1, -k - 1, -1))
    while True:
        word = [letters[rng.integers(0, 2 * k)]]
        for _ in range(l - 1):
            options = [c for c in letters if c != -word[-1]]
            word.append(options[rng.integers(0, 2 * k - 1)])
        if word[0] != -word[-1]:
            return tuple(word)


def _draw_distinct_words(
    k: int, l: int, count: int, rng: np.random.Generator
) -> tuple[tuple[int, ...], ...]:
    seen: set[tuple[int, ...]] = set()
    cap = 1000 * max(count, 1) + 100_000
    draws = 0
    while len(seen) < count:
        if draws >= cap:
            raise RuntimeError(f"distinct-word sampling stalled after {draws} draws")
        seen.add(sample_cyclically_reduced(k, l, rng))
        draws += 1
    return tuple(sorted(seen))


def sample_density(k: int, l: int, d: float, seed: int) -> Presentation:
    """Fixed-count model: floor((2k-1)^(d l)) distinct cyclically reduced words.

    Rejects parameter sets whose relator count exceeds 2^48 (desk-scale
    guard, checked in log space before any exponentiation).
    """
    if k < 2 or l < 3:
        raise ValueError("need k >= 2 and l >= 3")
    if not (0.0 <= d <= 1.0):
        raise ValueError("d must lie in [0, 1]")
    if d * l * math.log2(2 * k - 1) > _DENSITY_COUNT_BITS:
        raise DeskScaleError(
            f"relator count (2k-1)^(d*l) exceeds 2^{_DENSITY_COUNT_BITS}"
        )
    count = int(math.floor((2 * k - 1) ** (d * l)))
    rng = _rng(seed)
    return Presentation(
        alphabet_size=k,
        relators=_draw_distinct_words(k, l, count, rng),
        positive_only=False,
    )


def _binomial_count(rng: np.random.Generator, population: int, rho: float) -> int:
    """Binomial(population, rho) count with a desk-scale guard.

    Exact numpy binomial while the population fits int64; beyond that
    the count is drawn as Poisson(population*rho), whose total-variation
    distance from the Binomial is below population*rho^2, vanishing at
    every feasible scale.
    """
    if not (0.0 <= rho <= 1.0):
        raise ValueError("rho must lie in [0, 1]")
    if rho == 0.0 or population == 0:
        return 0
    log_expected = math.log(population) + math.log(rho)
    if log_expected > math.log(_EXPECTED_COUNT_CAP):
        raise DeskScaleError(
            f"expected relator count exceeds 2^31 (population {population}, rho {rho})"
        )
    if population <= _INT64_SAFE:
        return int(rng.binomial(population, rho))
    return min(int(rng.poisson(math.exp(log_expected))), population)


def sample_binomial(k: int, l: int, rho: float, seed: int) -> Presentation:
    """Independent inclusion of every cyclically reduced length-l word."""
    if k < 2 or l < 1:
        raise ValueError("need k >= 2 and l >= 1")
    rng = _rng(seed)
    population = count_cyclically_reduced(k, l)
    count = min(_binomial_count(rng, population, rho), population)
    return Presentation(
        alphabet_size=k,
        relators=_draw_distinct_words(k, l, count, rng),
        positive_only=False,
    )


def _uniform_below(rng: np.random.Generator, n: int) -> int:
    """Uniform integer in [0, n) for arbitrary-precision n."""
    if n <= 0:
        raise ValueError("n must be positive")
    if n <= _INT64_SAFE:
        return int(rng.integers(0, n))
    bits = n.bit_length()
    nbytes = (bits + 7) // 8
    mask = (1 << bits) - 1
    while True:
        val = int.from_bytes(rng.bytes(nbytes), "little") & mask
        if val < n:
            return val


def sample_bprime(k: int, l: int, rho: float, seed: int) -> Presentation:
    """Independent inclusion over concatenations of three W' pieces.

    The population is the set of ordered triples of reduced words of
    length l/3 with positive first and last letters; concatenation is
    injective (fixed piece length) and lands on cyclically reduced
    length-l words because piece boundaries never cancel.
    """
    if k < 2 or l < 3:
        raise ValueError("need k >= 2 and l >= 3")
    if l % 3 != 0:
        raise ValueError("l must be divisible by 3")
    t = l // 3
    piece_count = count_wprime(k, t)
    population = piece_count**3
    rng = _rng(seed)
    count = min(_binomial_count(rng, population, rho), population)
    indices: set[int] = set()
    cap = 1000 * max(count, 1) + 100_000
    draws = 0
    while len(indices) < count:
        if draws >= cap:
            raise RuntimeError(f"distinct-triple sampling stalled after {draws} draws")
        indices.add(_uniform_below(rng, population))
        draws += 1
    words = []
    for idx in indices:
        i3 = idx % piece_count
        i2 = (idx // piece_count) % piece_count
        i1 = idx // (piece_count * piece_count)
        words.append(
            unrank_wprime(k, t, i1) + unrank_wprime(k, t, i2) + unrank_wprime(k, t, i3)
        )
    return Presentation(
        alphabet_size=k,
        relators=tuple(sorted(words)),
        positive_only=False,
    )


def sample_mplus(m: int, rho: float, seed: int) -> Presentation:
    """Positive triangular model: each of the m^3 ordered triples w.p. rho."""
    if m < 2:
        raise ValueError("need m >= 2")
    if not (0.0 <= rho <= 1.0):
        raise ValueError("rho must lie in [0, 1]")
    if m**3 * rho > _EXPECTED_COUNT_CAP:
        raise DeskScaleError(f"m^3*rho = {m ** 3 * rho:.3g} exceeds 2^31")
    population = m**3
    rng = _rng(seed)
    count = min(_binomial_count(rng, population, rho), population)
    indices: set[int] = set()
    cap = 1000 * max(count, 1) + 100_000
    draws = 0
    while len(indices) < count:
        if draws >= cap:
            raise RuntimeError(f"distinct-triple sampling stalled after {draws} draws")
        indices.add(_uniform_below(rng, population))
        draws += 1
    relators = []
    for idx in indices:
        c = idx % m
        b = (idx // m) % m
        a = idx // (m * m)
        relators.append((a + 1, b + 1, c + 1))
    return Presentation(
        alphabet_size=m,
        relators=tuple(sorted(relators)),
        positive_only=True,
    )


# ---------------------------------------------------------------------------
# W' counting and unranking


_g_table_cache: dict[tuple[int, int], tuple[list[int], list[int]]] = {}


def _g_tables(k: int, t: int) -> tuple[list[int], list[int]]:
    """Continuation counts by remaining length and previous-letter sign.

    g_pos[r] (g_neg[r]) counts reduced continuations of length r ending
    in a positive letter, given the previous letter was positive
    (negative).  Exact integer arithmetic.
    """
    key = (k, t)
    if key in _g_table_cache:
        return _g_table_cache[key]
    g_pos = [0] * (t + 1)
    g_neg = [0] * (t + 1)
    g_pos[0] = 1
    g_neg[0] = 0
    for r in range(1, t + 1):
        g_pos[r] = k * g_pos[r - 1] + (k - 1) * g_neg[r - 1]
        g_neg[r] = (k - 1) * g_pos[r - 1] + k * g_neg[r - 1]
    _g_table_cache[key] = (g_pos, g_neg)
    return g_pos, g_neg


def _wprime_cache_path() -> Path | None:
    root = os.environ.get("ZUKLAB_CACHE")
    if not root:
        return None
    return Path(root) / "wprime_counts.json"


def count_wprime(k: int, t: int) -> int:
    """Number of reduced length-t words with positive first and last letter.

    Computed by exact dynamic programming over continuation counts; the
    result is memoized, optionally persistently under $ZUKLAB_CACHE
    (values stored as strings, they outgrow JSON numbers).
    """
    if k < 1 or t < 1:
        raise ValueError("need k >= 1 and t >= 1")
    path = _wprime_cache_path()
    cache_key = f"{k}:{t}"
    if path is not None and path.is_file():
        try:
            stored = json.loads(path.read_text())
            if cache_key in stored:
                return int(stored[cache_key])
        except (OSError, ValueError):
            pass
    g_pos, _ = _g_tables(k, t)
    count = k * g_pos[t - 1]
    if path is not None:
        try:
            stored = {}
            if path.is_file():
                stored = json.loads(path.read_text())
            stored[cache_key] = str(count)
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(stored, sort_keys=True))
            tmp.replace(path)
        except (OSError, ValueError):
            pass
    return count


def _letter_order(k: int) -> list[int]:
    return list(range(1, k + 1)) + list(range(-1, -k - 1, -1))


def unrank_wprime(k: int, t: int, index: int) -> tuple[int, ...]:
    """index-th word of W'_t in lexicographic order.

    Letters are ordered 1 < 2 < ... < k < -1 < -2 < ... < -k; prefix
    block sizes come from the exact continuation counts, making this a
    bijection {0..count-1} -> W'_t.
    """
    total = count_wprime(k, t)
    if not (0 <= index < total):
        raise ValueError(f"index {index} out of range [0, {total})")
    g_pos, g_neg = _g_tables(k, t)
    order = _letter_order(k)
    word: list[int] = []
    remaining = index
    for pos in range(t):
        r = t - 1 - pos
        if pos == 0:
            candidates = [c for c in order if c > 0]
        else:
            candidates = [c for c in order if c != -word[-1]]
        for c in candidates:
            block = g_pos[r] if c > 0 else g_neg[r]
            if remaining < block:
                word.append(c)
                break
            remaining -= block
        else:
            raise AssertionError("unrank walked past the last block")
    return tuple(word)


def rank_wprime(k: int, t: int, word: tuple[int, ...]) -> int:
    """Inverse of unrank_wprime; validates membership in W'_t."""
    if len(word) != t:
        raise ValueError(f"word length {len(word)} != {t}")
    if word[0] < 0 or word[-1] < 0:
        raise ValueError("first and last letters must be positive")
    if any(c == 0 or abs(c) > k for c in word):
        raise ValueError("letter outside alphabet")
    if not is_reduced(tuple(word)):
        raise ValueError("word is not reduced")
    g_pos, g_neg = _g_tables(k, t)
    order = _letter_order(k)
    index = 0
    for pos, letter in enumerate(word):
        r = t - 1 - pos
        if pos == 0:
            candidates = [c for c in order if c > 0]
        else:
            candidates = [c for c in order if c != -word[pos - 1]]
        for c in candidates:
            if c == letter:
                break
            index += g_pos[r] if c > 0 else g_neg[r]
        else:
            raise ValueError(f"letter {letter} not reachable at position {pos}")
    return index


def phi_expand(p: Presentation, k: int, l: int) -> Presentation:
    """Expand positive triples through the piece bijection.

    Each relator (i, j, k3) maps to the concatenation of the pieces with
    ranks i-1, j-1, k3-1 in W'_{l/3}, producing cyclically reduced
    length-l relators over k generators.
    """
    if not p.positive_only:
        raise ValueError("phi_expand needs a positive presentation")
    if l % 3 != 0:
        raise ValueError("l must be divisible by 3")
    t = l // 3
    total = count_wprime(k, t)
    if p.alphabet_size > total:
        raise ValueError(
            f"alphabet size {p.alphabet_size} exceeds |W'_{t}| = {total}"
        )
    words = []
    for i, j, k3 in p.relators:
        words.append(
            unrank_wprime(k, t, i - 1)
            + unrank_wprime(k, t, j - 1)
            + unrank_wprime(k, t, k3 - 1)
        )
    return Presentation(alphabet_size=k, relators=tuple(sorted(words)), positive_only=False)
