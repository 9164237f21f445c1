"""Brute-force reference implementations, used as ground truth in tests.

Nothing here touches numpy arrays beyond reading inputs; every formula is a
plain nested loop over clusters and nodes.  Slow on purpose.
"""
from __future__ import annotations

from typing import Sequence

from mvscn.codec import PartialMessage


def _table(net) -> dict:
    """Every weight read once through the public accessor, keyed by node pair."""
    cfg = net.config
    return {
        (i, j, i2, j2): net.get_weight(i, j, i2, j2)
        for i in range(cfg.c) for j in range(cfg.l) for i2 in range(cfg.c) for j2 in range(cfg.l)
    }


def naive_scores(net, act, normalized: bool) -> list[list[int]]:
    cfg = net.config
    table = _table(net)
    v = [[bool(act[i][j]) for j in range(cfg.l)] for i in range(cfg.c)]
    out = []
    for i in range(cfg.c):
        row = []
        for j in range(cfg.l):
            s = 0
            for i2 in range(cfg.c):
                for j2 in range(cfg.l):
                    w = table[i, j, i2, j2]
                    if normalized:
                        w = 1 if w >= 1 else 0
                    s += w * v[i2][j2]
            s += cfg.gamma * v[i][j]
            row.append(s)
        out.append(row)
    return out


def naive_decode_step(net, act, arch) -> list[list[int]]:
    """One literal step of architecture ``"I"``, ``"II"`` or ``"III"``; returns a 0/1 grid."""
    cfg = net.config
    arch = getattr(arch, "value", str(arch))
    if arch in ("I", "II"):
        s = naive_scores(net, act, normalized=(arch == "II"))
        out = []
        for i in range(cfg.c):
            smax = max(s[i])
            out.append([1 if (s[i][j] == smax and smax >= cfg.sigma) else 0 for j in range(cfg.l)])
        return out
    if arch != "III":
        raise ValueError(f"unknown architecture {arch!r}")
    table = _table(net)
    out = []
    for i in range(cfg.c):
        row = []
        for j in range(cfg.l):
            ok = True
            for i2 in range(cfg.c):
                if i2 == i:
                    continue
                any_link = False
                for j2 in range(cfg.l):
                    if table[i, j, i2, j2] >= 1 and act[i2][j2]:
                        any_link = True
                ok = ok and any_link
            row.append(1 if (ok and act[i][j]) else 0)
        out.append(row)
    return out


def naive_decode(net, act, arch, max_iterations: int = 4):
    """Iterate :func:`naive_decode_step`; returns ``(final, iterations_used, converged)``."""
    cur = [[1 if x else 0 for x in row] for row in act]
    for it in range(1, max_iterations + 1):
        nxt = naive_decode_step(net, cur, arch)
        if nxt == cur:
            return nxt, it, True
        cur = nxt
    return cur, max_iterations, False


def candidate_set(stored: Sequence[Sequence[int]], pm: PartialMessage) -> list[tuple[int, ...]]:
    """Stored messages consistent with every known or partially known entry of ``pm``."""
    out = []
    for m in stored:
        if len(m) != len(pm):
            continue
        if all(m[i] in pm.candidates(i) for i in range(len(pm))):
            out.append(tuple(m))
    return out


def clique_counter(msgs: Sequence[Sequence[int]], c: int, l: int) -> dict:
    """How many of ``msgs`` contain each unordered inter-cluster pair."""
    counts = {}
    for m in msgs:
        for i in range(c):
            for i2 in range(i + 1, c):
                key = ((i, m[i]), (i2, m[i2]))
                counts[key] = counts.get(key, 0) + 1
    return counts
