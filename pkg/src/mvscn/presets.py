"""Parameter grids that regenerate each error-rate figure.

Every preset is a list of :class:`Job` (a base spec swept along one axis).
Common settings unless noted: c=8, l=16, ce=0.5, density target 0.4.

========  ==================================================================
preset    grid
========  ==================================================================
fig2      density 0.1..0.7; arch I/II/III x w_max {1,3} x it {1,4}; no deletion
fig3      deletion 0..0.9; arch II; w_max {1,3} x it {1,4}
fig4      w_max 1..8; arch I/II/III; deletion 0.5, addition 0; it 4
fig5      as fig4 with addition 0.5
fig6      deletion 0..0.9; arch I/II/III x w_max {1,3}; it 1
fig7      as fig6 with it 4
fig8      deletion 0..0.9; arch II; (w_max 3, l 16) and its equal-memory
          binary twin (w_max 1, l 23, same M); it 4
fig9      as fig8 with arch III
========  ==================================================================
"""
from __future__ import annotations

from dataclasses import dataclass

from mvscn.core import NetworkConfig
from mvscn.experiment import ExperimentSpec, equal_memory_binary_spec

DENSITIES = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]
DELETIONS = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
W_MAXES = [1, 2, 3, 4, 5, 6, 7, 8]
ARCHS = ["I", "II", "III"]


@dataclass(frozen=True)
class Job:
    spec: ExperimentSpec
    axis: str
    values: tuple


def _base(trials, seed, **kw) -> ExperimentSpec:
    cfg = NetworkConfig(c=8, l=16, w_max=kw.pop("w_max", 1))
    kw.setdefault("density_target", 0.4)
    return ExperimentSpec(config=cfg, ce=0.5, trials=trials, master_seed=seed, **kw)


def preset_jobs(name: str, trials: int | None = None, seed: int = 0) -> list[Job]:
    if name == "fig2":
        return [
            Job(_base(trials, seed, arch=a, w_max=w, iterations=it), "density", tuple(DENSITIES))
            for a in ARCHS for w in (1, 3) for it in (1, 4)
        ]
    if name == "fig3":
        return [
            Job(_base(trials, seed, arch="II", w_max=w, iterations=it), "deletion_rate", tuple(DELETIONS))
            for w in (1, 3) for it in (1, 4)
        ]
    if name in ("fig4", "fig5"):
        add = 0.0 if name == "fig4" else 0.5
        return [
            Job(_base(trials, seed, arch=a, deletion_rate=0.5, addition_rate=add, iterations=4),
                "w_max", tuple(W_MAXES))
            for a in ARCHS
        ]
    if name in ("fig6", "fig7"):
        it = 1 if name == "fig6" else 4
        return [
            Job(_base(trials, seed, arch=a, w_max=w, iterations=it), "deletion_rate", tuple(DELETIONS))
            for a in ARCHS for w in (1, 3)
        ]
    if name in ("fig8", "fig9"):
        arch = "II" if name == "fig8" else "III"
        mv = _base(trials, seed, arch=arch, w_max=3, iterations=4)
        return [
            Job(mv, "deletion_rate", tuple(DELETIONS)),
            Job(equal_memory_binary_spec(mv), "deletion_rate", tuple(DELETIONS)),
        ]
    raise ValueError(f"unknown preset {name!r}; expected fig2..fig9")


PRESETS = tuple(f"fig{k}" for k in range(2, 10))

