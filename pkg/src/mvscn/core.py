"""Network configuration and the multi-valued inter-cluster weight matrix.

Nodes are addressed either as ``(cluster, index)`` pairs or by their flat
position ``cluster * l + index``.  The full ``n x n`` table is held in memory
(both symmetric slots), one ``uint8`` per entry; the b-bit packing only
applies to snapshots and to :func:`memory_bits`.

Snapshot layout (all integers little-endian)::

    offset  size  field
    0       4     magic  b"MVSN"
    4       2     version (currently 1)
    6       2     c
    8       2     l
    10      2     w_max
    12      ...   packed weight table

The packed table enumerates every unordered inter-cluster pair once, in the
order ``for i < i2: for j: for j2:``, writing each weight with
``b = ceil(log2(w_max + 1))`` bits, least-significant bit first, into a
little-endian bit stream (bit k of the stream is bit ``k % 8`` of byte
``k // 8``).  The final byte is zero-padded.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SNAPSHOT_MAGIC = b"MVSN"
SNAPSHOT_VERSION = 1
_HEADER = struct.Struct("<4sHHHH")


@dataclass(frozen=True)
class NetworkConfig:
    """Shape and decoding constants of a sparse clustered network.

    ``sigma`` defaults to ``c`` when left as ``None``.
    """

    c: int
    l: int
    w_max: int = 1
    w_min: int = 0
    gamma: int = 1
    sigma: int | None = None

    def __post_init__(self):
        if self.c < 2:
            raise ValueError(f"need at least 2 clusters, got c={self.c}")
        if self.l < 2:
            raise ValueError(f"need at least 2 nodes per cluster, got l={self.l}")
        if self.w_min != 0:
            raise ValueError("w_min is fixed at 0")
        if self.w_max < 1:
            raise ValueError(f"w_max must be >= 1, got {self.w_max}")
        if self.w_max > 255:
            raise ValueError("w_max above 255 does not fit the uint8 weight table")
        if self.sigma is None:
            object.__setattr__(self, "sigma", self.c)

    @property
    def n(self) -> int:
        return self.c * self.l

    @property
    def bits_per_weight(self) -> int:
        return max(1, math.ceil(math.log2(self.w_max + 1)))

    @property
    def kappa(self) -> int | None:
        """Bits per sub-message, only defined when ``l`` is a power of two."""
        if self.l & (self.l - 1):
            return None
        return self.l.bit_length() - 1

    @property
    def pair_count(self) -> int:
        """Number of unordered inter-cluster node pairs."""
        return self.c * (self.c - 1) // 2 * self.l * self.l


def memory_bits(config: NetworkConfig) -> int:
    """Bits needed to hold every unordered inter-cluster weight."""
    return config.pair_count * config.bits_per_weight


def intra_cluster_mask(config: NetworkConfig) -> np.ndarray:
    """Boolean ``(n, n)`` mask that is True where both nodes share a cluster."""
    cl = np.repeat(np.arange(config.c), config.l)
    return cl[:, None] == cl[None, :]


def upper_pair_index(config: NetworkConfig) -> tuple[np.ndarray, np.ndarray]:
    """Flat node indices of every unordered inter-cluster pair, in snapshot order."""
    c, l = config.c, config.l
    rows, cols = [], []
    jj, jj2 = np.meshgrid(np.arange(l), np.arange(l), indexing="ij")
    for i in range(c):
        for i2 in range(i + 1, c):
            rows.append((i * l + jj).ravel())
            cols.append((i2 * l + jj2).ravel())
    return np.concatenate(rows), np.concatenate(cols)


@dataclass
class WeightMatrix:
    """Symmetric table of saturating integer weights between nodes of different clusters."""

    config: NetworkConfig
    weights: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        n = self.config.n
        if self.weights is None:
            self.weights = np.zeros((n, n), dtype=np.uint8)
        else:
            w = np.asarray(self.weights)
            if w.shape != (n, n):
                raise ValueError(f"weights must have shape {(n, n)}, got {w.shape}")
            if not np.array_equal(w, w.T):
                raise ValueError("weights must be symmetric")
            if w.min(initial=0) < 0 or w.max(initial=0) > self.config.w_max:
                raise ValueError("weights outside [0, w_max]")
            if np.any(w[intra_cluster_mask(self.config)]):
                raise ValueError("intra-cluster weights must be zero")
            self.weights = w.astype(np.uint8, copy=True)

    def _node(self, i: int, j: int) -> int:
        cfg = self.config
        if not (0 <= i < cfg.c and 0 <= j < cfg.l):
            raise IndexError(f"node ({i}, {j}) outside c={cfg.c}, l={cfg.l}")
        return i * cfg.l + j

    def get_weight(self, i: int, j: int, i2: int, j2: int) -> int:
        a, b = self._node(i, j), self._node(i2, j2)
        return int(self.weights[a, b])

    def set_weight(self, i: int, j: int, i2: int, j2: int, value: int) -> None:
        a, b = self._node(i, j), self._node(i2, j2)
        if i == i2:
            raise ValueError("no connections exist inside a cluster")
        if not (self.config.w_min <= value <= self.config.w_max):
            raise ValueError(f"weight {value} outside [0, {self.config.w_max}]")
        self.weights[a, b] = value
        self.weights[b, a] = value

    def normalized(self) -> np.ndarray:
        """Binary view of the weights (1 where a connection exists)."""
        return (self.weights >= 1).astype(np.uint8)

    def copy(self) -> "WeightMatrix":
        return WeightMatrix(self.config, self.weights.copy())

    def __eq__(self, other):
        if not isinstance(other, WeightMatrix):
            return NotImplemented
        return self.config == other.config and np.array_equal(self.weights, other.weights)

    # snapshots

    def to_bytes(self) -> bytes:
        cfg = self.config
        b = cfg.bits_per_weight
        rows, cols = upper_pair_index(cfg)
        vals = self.weights[rows, cols].astype(np.uint16)
        bits = ((vals[:, None] >> np.arange(b, dtype=np.uint16)) & 1).astype(np.uint8)
        packed = np.packbits(bits.ravel(), bitorder="little")
        header = _HEADER.pack(SNAPSHOT_MAGIC, SNAPSHOT_VERSION, cfg.c, cfg.l, cfg.w_max)
        return header + packed.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "WeightMatrix":
        if len(data) < _HEADER.size:
            raise ValueError("snapshot too short")
        magic, version, c, l, w_max = _HEADER.unpack_from(data)
        if magic != SNAPSHOT_MAGIC:
            raise ValueError(f"bad snapshot magic {magic!r}")
        if version != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported snapshot version {version}")
        cfg = NetworkConfig(c=c, l=l, w_max=w_max)
        b = cfg.bits_per_weight
        npairs = cfg.pair_count
        nbytes = (npairs * b + 7) // 8
        body = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size)
        if body.size != nbytes:
            raise ValueError(f"snapshot body has {body.size} bytes, expected {nbytes}")
        bits = np.unpackbits(body, bitorder="little")[: npairs * b].reshape(npairs, b)
        vals = (bits.astype(np.uint16) << np.arange(b, dtype=np.uint16)).sum(axis=1)
        if vals.max(initial=0) > w_max:
            raise ValueError("snapshot holds weights above w_max")
        w = np.zeros((cfg.n, cfg.n), dtype=np.uint8)
        rows, cols = upper_pair_index(cfg)
        w[rows, cols] = vals
        w[cols, rows] = vals
        return cls(cfg, w)

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path: str | Path) -> "WeightMatrix":
        return cls.from_bytes(Path(path).read_bytes())


def new_network(config: NetworkConfig) -> WeightMatrix:
    return WeightMatrix(config)
