"""Local decoding: messages to node activations and back.

A message is a tuple of ``c`` symbols in ``[0, l)``.  An activation is a
boolean array of shape ``(c, l)``; batched activations carry extra leading
axes, ``(..., c, l)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from mvscn.core import NetworkConfig

Message = tuple[int, ...]

# A PartialMessage entry is an int (known symbol), ERASED, or a frozenset of
# candidate symbols (some bits of the sub-message are unknown).
ERASED = None


class Retrieval(enum.Enum):
    AMBIGUOUS = "AMBIGUOUS"
    EMPTY = "EMPTY"


def check_message(msg: Sequence[int], config: NetworkConfig) -> Message:
    msg = tuple(int(s) for s in msg)
    if len(msg) != config.c:
        raise ValueError(f"message has {len(msg)} symbols, expected c={config.c}")
    for s in msg:
        if not 0 <= s < config.l:
            raise ValueError(f"symbol {s} outside [0, {config.l})")
    return msg


@dataclass(frozen=True)
class PartialMessage:
    entries: tuple
    l: int

    def __post_init__(self):
        norm = []
        for e in self.entries:
            if e is ERASED:
                norm.append(ERASED)
            elif isinstance(e, (set, frozenset)):
                cand = frozenset(int(s) for s in e)
                if not cand:
                    raise ValueError("candidate set must not be empty")
                if any(not 0 <= s < self.l for s in cand):
                    raise ValueError(f"candidate outside [0, {self.l})")
                if len(cand) == 1:
                    norm.append(next(iter(cand)))
                elif len(cand) == self.l:
                    norm.append(ERASED)
                else:
                    norm.append(cand)
            else:
                s = int(e)
                if not 0 <= s < self.l:
                    raise ValueError(f"symbol {s} outside [0, {self.l})")
                norm.append(s)
        object.__setattr__(self, "entries", tuple(norm))

    @classmethod
    def known(cls, msg: Sequence[int], l: int) -> "PartialMessage":
        return cls(tuple(msg), l)

    def __len__(self):
        return len(self.entries)

    def candidates(self, i: int) -> frozenset:
        e = self.entries[i]
        if e is ERASED:
            return frozenset(range(self.l))
        if isinstance(e, frozenset):
            return e
        return frozenset((e,))

    def erased_positions(self) -> list[int]:
        return [i for i, e in enumerate(self.entries) if e is ERASED]


def bitmask_candidates(pattern: str) -> frozenset:
    """Symbols matching a bit pattern such as ``"1?0"`` (MSB first, ``?`` = erased bit)."""
    if not pattern or set(pattern) - set("01?"):
        raise ValueError(f"bad bit pattern {pattern!r}")
    out = [0]
    for ch in pattern:
        bits = (0, 1) if ch == "?" else (int(ch),)
        out = [(v << 1) | b for v in out for b in bits]
    return frozenset(out)


def local_decode(pm: PartialMessage, config: NetworkConfig) -> np.ndarray:
    if len(pm) != config.c or pm.l != config.l:
        raise ValueError("partial message does not fit this network")
    act = np.zeros((config.c, config.l), dtype=bool)
    for i in range(config.c):
        act[i, list(pm.candidates(i))] = True
    return act


def messages_to_activation(msgs: np.ndarray, config: NetworkConfig) -> np.ndarray:
    """One-hot activations for an ``(N, c)`` array of messages, shape ``(N, c, l)``."""
    msgs = np.asarray(msgs)
    return msgs[..., None] == np.arange(config.l)


def activation_to_message(act: np.ndarray, config: NetworkConfig) -> Message | Retrieval:
    act = np.asarray(act, dtype=bool).reshape(config.c, config.l)
    counts = act.sum(axis=1)
    if np.any(counts == 0):
        return Retrieval.EMPTY
    if np.any(counts > 1):
        return Retrieval.AMBIGUOUS
    return tuple(int(j) for j in act.argmax(axis=1))


def erase_count(ce: float, c: int) -> int:
    # round half up, so ce=0.5 on odd c erases the larger half
    return int(np.floor(ce * c + 0.5))


def _erased_clusters(n: int, k: int, c: int, rng: np.random.Generator) -> np.ndarray:
    return np.argsort(rng.random((n, c)), axis=1)[:, :k]


def erase(msg: Sequence[int], ce: float, rng: np.random.Generator, config: NetworkConfig) -> PartialMessage:
    msg = check_message(msg, config)
    if not 0.0 <= ce <= 1.0:
        raise ValueError(f"ce must be in [0, 1], got {ce}")
    k = erase_count(ce, config.c)
    drop = set(_erased_clusters(1, k, config.c, rng)[0].tolist()) if k else set()
    entries = tuple(ERASED if i in drop else s for i, s in enumerate(msg))
    return PartialMessage(entries, config.l)


def erase_batch(msgs: np.ndarray, ce: float, rng: np.random.Generator, config: NetworkConfig) -> np.ndarray:
    """Locally decoded activations for ``(N, c)`` messages with ``round(ce*c)`` random clusters erased each."""
    msgs = np.asarray(msgs)
    act = messages_to_activation(msgs, config)
    k = erase_count(ce, config.c)
    if k and len(msgs):
        order = _erased_clusters(len(msgs), k, config.c, rng)
        act[np.arange(len(msgs))[:, None], order, :] = True
    return act


# text form: whitespace-separated symbols, "?" for an erased sub-message

def parse_message(line: str, config: NetworkConfig) -> PartialMessage:
    toks = line.split()
    if len(toks) != config.c:
        raise ValueError(f"expected {config.c} symbols, got {len(toks)}: {line!r}")
    entries = []
    for t in toks:
        if t == "?":
            entries.append(ERASED)
        else:
            try:
                entries.append(int(t))
            except ValueError:
                raise ValueError(f"bad symbol {t!r} in {line!r}") from None
    return PartialMessage(tuple(entries), config.l)


def format_message(pm: PartialMessage | Sequence[int]) -> str:
    entries = pm.entries if isinstance(pm, PartialMessage) else pm
    out = []
    for e in entries:
        if e is ERASED:
            out.append("?")
        elif isinstance(e, frozenset):
            out.append("{" + ",".join(str(s) for s in sorted(e)) + "}")
        else:
            out.append(str(e))
    return " ".join(out)
