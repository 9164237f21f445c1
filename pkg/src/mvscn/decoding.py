"""Global decoding: the three architectures and the iteration controller.

Activations are boolean arrays of shape ``(..., c, l)``.  The step functions
also accept raw weight tables of shape ``(T, n, n)`` together with
activations of shape ``(T, Q, c, l)`` so that many independent networks can
be decoded in one pass; see :func:`decode_arrays`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from mvscn.core import NetworkConfig, WeightMatrix


class Arch(enum.Enum):
    """Global decoder variants.

    I   raw weights summed into scores, then winner-take-all
    II  weights normalized to 0/1, then winner-take-all
    III normalized weights, per-cluster OR then AND across clusters (no scores)
    """

    I = "I"
    II = "II"
    III = "III"

    @classmethod
    def parse(cls, value) -> "Arch":
        if isinstance(value, Arch):
            return value
        key = str(value).strip().upper()
        key = {"1": "I", "2": "II", "3": "III"}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown architecture {value!r}; expected I, II or III") from None


@dataclass
class DecodeResult:
    final: np.ndarray
    iterations_used: int
    converged: bool


def _flat(act: np.ndarray, config: NetworkConfig) -> np.ndarray:
    return act.reshape(*act.shape[:-2], config.n)


def _scores(weights: np.ndarray, act: np.ndarray, config: NetworkConfig) -> np.ndarray:
    # weights (n, n) or (T, n, n); act (..., c, l) with leading T matching when batched
    v = _flat(act, config).astype(np.float32)
    s = np.matmul(v, weights.astype(np.float32)) + config.gamma * v
    return s.astype(np.int64).reshape(act.shape)


def score_arch1(net: WeightMatrix, act: np.ndarray) -> np.ndarray:
    return _scores(net.weights, np.asarray(act, dtype=bool), net.config)


def score_arch2(net: WeightMatrix, act: np.ndarray) -> np.ndarray:
    return _scores(net.weights >= 1, np.asarray(act, dtype=bool), net.config)


def winner_take_all(scores: np.ndarray, act: np.ndarray | None, sigma: int) -> np.ndarray:
    """Keep, per cluster, every node reaching the cluster maximum if that maximum is >= sigma.

    ``act`` is only used for a shape check; the previous activation already
    enters through the memory-effect term of the scores.
    """
    scores = np.asarray(scores)
    if act is not None and np.shape(act) != scores.shape:
        raise ValueError("scores and activation differ in shape")
    smax = scores.max(axis=-1, keepdims=True)
    return (scores == smax) & (smax >= sigma)


def _pack_words(bits: np.ndarray) -> np.ndarray:
    """Pack the last axis of a boolean array into one unsigned integer per row.

    Rows longer than 64 bits come back as ``(..., nbytes)`` uint8 instead.
    """
    packed = np.packbits(bits, axis=-1, bitorder="little")
    nb = packed.shape[-1]
    for width in (1, 2, 4, 8):
        if nb <= width:
            if nb < width:
                pad = np.zeros(packed.shape[:-1] + (width - nb,), dtype=np.uint8)
                packed = np.concatenate([packed, pad], axis=-1)
            return np.ascontiguousarray(packed).view(f"<u{width}")[..., 0]
    return packed


def cluster_bitmaps(weights: np.ndarray, config: NetworkConfig) -> np.ndarray:
    """Per-node, per-cluster connection bitmaps of the normalized weights.

    Entry ``[..., a, k]`` has bit ``j`` set when node ``a`` connects to node
    ``(k, j)``.
    """
    psi = np.asarray(weights) >= 1
    return _pack_words(psi.reshape(*psi.shape[:-1], config.c, config.l))


def _own_cluster(config: NetworkConfig) -> np.ndarray:
    return np.repeat(np.arange(config.c), config.l)[:, None] == np.arange(config.c)[None, :]


def _step3_from_bitmaps(bitmaps: np.ndarray, act: np.ndarray, config: NetworkConfig) -> np.ndarray:
    # bitmaps (..., n, c[, nb]); act (..., Q, c, l)
    a = _pack_words(act)  # (..., Q, c[, nb])
    if a.ndim == act.ndim - 1:
        hit = (bitmaps[..., None, :, :] & a[..., :, None, :]) != 0  # (..., Q, n, c)
    else:
        hit = ((bitmaps[..., None, :, :, :] & a[..., :, None, :, :]) != 0).any(axis=-1)
    hit |= _own_cluster(config)
    support = hit.all(axis=-1).reshape(act.shape)
    return support & act


def step_arch3(net: WeightMatrix, act: np.ndarray) -> np.ndarray:
    act = np.asarray(act, dtype=bool)
    bm = cluster_bitmaps(net.weights, net.config)
    if act.ndim == 2:
        return _step3_from_bitmaps(bm, act[None], net.config)[0]
    return _step3_from_bitmaps(bm, act, net.config)


class _Stepper:
    """Precomputed per-network operands for repeated steps of one architecture."""

    def __init__(self, weights: np.ndarray, arch: Arch, config: NetworkConfig):
        self.arch = arch
        self.config = config
        if arch is Arch.I:
            self.op = weights.astype(np.float32)
        elif arch is Arch.II:
            self.op = (weights >= 1).astype(np.float32)
        else:
            self.op = cluster_bitmaps(weights, config)

    def __call__(self, act: np.ndarray) -> np.ndarray:
        cfg = self.config
        if self.arch is Arch.III:
            return _step3_from_bitmaps(self.op, act, cfg)
        v = _flat(act, cfg).astype(np.float32)
        s = (np.matmul(v, self.op) + cfg.gamma * v).reshape(act.shape)
        return winner_take_all(s, None, cfg.sigma)


def step(net: WeightMatrix, act: np.ndarray, arch) -> np.ndarray:
    arch = Arch.parse(arch)
    act = np.asarray(act, dtype=bool)
    if arch is Arch.I:
        return winner_take_all(score_arch1(net, act), act, net.config.sigma)
    if arch is Arch.II:
        return winner_take_all(score_arch2(net, act), act, net.config.sigma)
    return step_arch3(net, act)


def decode_arrays(weights: np.ndarray, acts: np.ndarray, arch, config: NetworkConfig,
                  max_iterations: int = 4) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Decode a batch of activations.

    ``weights`` is ``(n, n)`` with ``acts`` of shape ``(Q, c, l)``, or
    ``(T, n, n)`` with ``acts`` of shape ``(T, Q, c, l)``.  Returns the final
    activations plus per-query ``iterations_used`` and ``converged`` arrays.
    Queries that reach a fixed point early stay there, so running the whole
    batch for the same number of steps does not change any result.
    """
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    arch = Arch.parse(arch)
    stepper = _Stepper(weights, arch, config)
    cur = np.asarray(acts, dtype=bool)
    batch_shape = cur.shape[:-2]
    used = np.full(batch_shape, max_iterations, dtype=np.int64)
    conv = np.zeros(batch_shape, dtype=bool)
    for it in range(1, max_iterations + 1):
        nxt = stepper(cur)
        same = (nxt == cur).all(axis=(-2, -1))
        newly = same & ~conv
        used[newly] = it
        conv |= same
        cur = nxt
        if conv.all():
            break
    return cur, used, conv


def decode(net: WeightMatrix, initial: np.ndarray, arch, max_iterations: int = 4) -> DecodeResult:
    """Iterate one architecture's step until the activation stops changing."""
    initial = np.asarray(initial, dtype=bool)
    cfg = net.config
    if initial.shape != (cfg.c, cfg.l):
        raise ValueError(f"activation must have shape {(cfg.c, cfg.l)}, got {initial.shape}")
    final, used, conv = decode_arrays(net.weights, initial[None], arch, cfg, max_iterations)
    return DecodeResult(final[0], int(used[0]), bool(conv[0]))
