"""Node-removal attacks and the robustness measures read off their curves.

An attack removes alive nodes one at a time until none remain, recording
after every removal the largest (s1) and second-largest (s2) component
sizes as fractions of the starting node count. Strategies:

rb  - recompute betweenness, remove the current maximum (ties: smallest id)
id  - remove by descending initial degree (ties: smallest id), order fixed
      before any removal
rf  - seeded uniform random permutation
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph, degrees

_KINDS = ("rb", "id", "rf")


@dataclass(frozen=True)
class AttackStrategy:
    kind: str
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"attack kind must be one of {_KINDS}, got {self.kind!r}")
        if self.kind == "rf" and self.seed is None:
            raise ValueError("random-failure attacks need a seed")


@dataclass(frozen=True)
class AttackCurve:
    """Result of one attack run on a graph with n starting nodes.

    s1, s2: length n+1 fractions, entry i taken after i removals;
    removal_order: the n node ids in removal order.
    """

    n: int
    kind: str
    seed: int | None
    removal_order: np.ndarray
    s1: np.ndarray
    s2: np.ndarray

    def __post_init__(self):
        order = np.asarray(self.removal_order, dtype=np.int64)
        s1 = np.asarray(self.s1, dtype=np.float64)
        s2 = np.asarray(self.s2, dtype=np.float64)
        if len(order) != self.n or len(s1) != self.n + 1 or len(s2) != self.n + 1:
            raise ValueError("curve arrays disagree with n")
        if len(np.unique(order)) != self.n:
            raise ValueError("removal order must not repeat nodes")
        if (np.diff(s1) > 0).any():
            raise ValueError("s1 must be non-increasing")
        if (s2 > s1).any():
            raise ValueError("s2 cannot exceed s1")
        if s1[-1] != 0:
            raise ValueError("s1 must end at 0 (all nodes removed)")
        for arr in (order, s1, s2):
            arr.setflags(write=False)
        object.__setattr__(self, "removal_order", order)
        object.__setattr__(self, "s1", s1)
        object.__setattr__(self, "s2", s2)

    @property
    def q(self) -> np.ndarray:
        """Removed fraction after each step: i/n for i = 0..n."""
        return np.arange(self.n + 1) / self.n


def run_attack(g: Graph, strategy: AttackStrategy) -> AttackCurve:
    """Run one attack to complete depletion of the alive nodes."""
    n = int(g.alive.sum())
    if n == 0:
        raise ValueError("graph has no alive nodes to attack")
    if strategy.kind == "rb":
        order, s1, s2 = _kernels.betweenness_attack(g.indptr, g.indices, g.alive)
    else:
        ids = np.flatnonzero(g.alive)
        if strategy.kind == "id":
            deg = degrees(g)[ids]
            order = ids[np.lexsort((ids, -deg))]
        else:
            rng = np.random.default_rng(strategy.seed)
            order = ids[rng.permutation(n)]
        s1, s2 = _kernels.static_attack_curve(g.indptr, g.indices, g.alive, order)
    return AttackCurve(n=n, kind=strategy.kind, seed=strategy.seed,
                       removal_order=order, s1=s1 / n, s2=s2 / n)


def robustness_index(curve: AttackCurve) -> float:
    """R = (1/n) * sum of s1 after each of the n removals; 0 <= R <= 0.5."""
    return float(curve.s1[1:].sum() / curve.n)


def critical_fraction(curve: AttackCurve) -> float:
    """q at the first peak of s2; 0.0 when s2 never rises above 0."""
    if not curve.s2.any():
        return 0.0
    return float(np.argmax(curve.s2) / curve.n)


def second_peak_degenerate(curve: AttackCurve) -> bool:
    """True when s2 is identically zero, so critical_fraction carries no signal."""
    return not curve.s2.any()


def save_curve(curve: AttackCurve, path) -> None:
    """Write the curve CSV: header i,q,s1,s2,removed_node; the i=0 row has an
    empty removed_node field."""
    out = ["i,q,s1,s2,removed_node"]
    for i in range(curve.n + 1):
        removed = "" if i == 0 else str(int(curve.removal_order[i - 1]))
        out.append(f"{i},{repr(i / curve.n)},{repr(float(curve.s1[i]))},"
                   f"{repr(float(curve.s2[i]))},{removed}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


def load_curve(path) -> AttackCurve:
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "i,q,s1,s2,removed_node":
        raise ValueError(f"line 1: expected curve header in {path}")
    s1, s2, order = [], [], []
    for ln, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise ValueError(f"line {ln}: expected 5 fields, got {line!r}")
        s1.append(float(parts[2]))
        s2.append(float(parts[3]))
        if parts[4] != "":
            order.append(int(parts[4]))
    n = len(s1) - 1
    return AttackCurve(n=n, kind="unknown", seed=None,
                       removal_order=np.array(order),
                       s1=np.array(s1), s2=np.array(s2))
