"""Storing and removing messages as cliques of saturating weights."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from mvscn.codec import check_message
from mvscn.core import NetworkConfig, WeightMatrix


def clique_pairs(msgs: np.ndarray, config: NetworkConfig) -> tuple[np.ndarray, np.ndarray]:
    """Flat node indices ``(a, b)`` of every ordered clique pair of each message.

    For ``N`` messages the result holds ``N * c * (c - 1)`` pairs, both
    orientations included.
    """
    msgs = np.asarray(msgs, dtype=np.int64).reshape(-1, config.c)
    nodes = msgs + np.arange(config.c) * config.l
    ii, kk = np.nonzero(~np.eye(config.c, dtype=bool))
    return nodes[:, ii].ravel(), nodes[:, kk].ravel()


def _pair_counts(msgs: np.ndarray, config: NetworkConfig) -> np.ndarray:
    a, b = clique_pairs(msgs, config)
    n = config.n
    return np.bincount(a * n + b, minlength=n * n).reshape(n, n)


def store_many(net: WeightMatrix, msgs: np.ndarray) -> None:
    """Store every message in ``msgs`` (shape ``(N, c)``).

    Equivalent to calling :func:`store` once per message: with only
    increments, saturation at w_max commutes with summation.
    """
    msgs = np.asarray(msgs)
    if msgs.size == 0:
        return
    _validate(msgs, net.config)
    counts = _pair_counts(msgs, net.config)
    net.weights[...] = np.minimum(net.weights + counts, net.config.w_max)


def delete_many(net: WeightMatrix, msgs: np.ndarray) -> None:
    """Delete every message in ``msgs``; equivalent to repeated :func:`delete`."""
    msgs = np.asarray(msgs)
    if msgs.size == 0:
        return
    _validate(msgs, net.config)
    counts = _pair_counts(msgs, net.config)
    net.weights[...] = np.maximum(net.weights.astype(np.int64) - counts, 0)


def store(net: WeightMatrix, msg: Sequence[int]) -> None:
    msg = check_message(msg, net.config)
    a, b = clique_pairs(np.array([msg]), net.config)
    w = net.weights
    w[a, b] = np.minimum(w[a, b] + 1, net.config.w_max)


def delete(net: WeightMatrix, msg: Sequence[int]) -> None:
    """Remove one occurrence of ``msg``'s clique (clamped at zero).

    The network cannot tell whether ``msg`` was ever stored.
    """
    msg = check_message(msg, net.config)
    a, b = clique_pairs(np.array([msg]), net.config)
    w = net.weights
    w[a, b] = np.maximum(w[a, b].astype(np.int16) - 1, 0)


def update(net: WeightMatrix, old: Sequence[int], new: Sequence[int]) -> None:
    delete(net, old)
    store(net, new)


def _validate(msgs: np.ndarray, config: NetworkConfig) -> None:
    if msgs.ndim != 2 or msgs.shape[1] != config.c:
        raise ValueError(f"messages must have shape (N, {config.c}), got {msgs.shape}")
    if msgs.min() < 0 or msgs.max() >= config.l:
        raise ValueError(f"message symbols outside [0, {config.l})")


def density_predicted(M: int, l: int) -> float:
    if M < 0:
        raise ValueError("M must be non-negative")
    return 1.0 - (1.0 - 1.0 / l**2) ** M


def messages_for_density(d: float, l: int) -> int:
    """Message count whose predicted density is closest to ``d``.

    Rounds to nearest (half up): d=0.4 at l=16 is 130.52 messages, giving 131.
    """
    if not 0.0 <= d < 1.0:
        raise ValueError(f"target density must be in [0, 1), got {d}")
    if d == 0:
        return 0
    return int(math.floor(math.log1p(-d) / math.log1p(-1.0 / l**2) + 0.5))


def density_measured(net: WeightMatrix) -> float:
    # both symmetric slots are set, so the full count is twice the unordered count
    used = int(np.count_nonzero(net.weights)) // 2
    return used / net.config.pair_count
