"""Time-position clustering of a session's edits.

Two ops link when their time distance is under t AND their position
distance is under p; clusters are the connected components of that
relation (single linkage, not consecutive-only), returned in order of
earliest member.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .durations import duration_label, parse_chars, parse_duration_ms
from .segmentation import Session


@dataclass(frozen=True)
class Window:
    """Paired thresholds: t milliseconds of time, p characters of position."""

    t_ms: int
    p: int

    def __post_init__(self) -> None:
        if self.t_ms <= 0:
            raise ValueError(f"window t must be positive, got {self.t_ms}")
        if self.p <= 0:
            raise ValueError(f"window p must be positive, got {self.p}")

    def label(self) -> str:
        return f"[{duration_label(self.t_ms)}, {self.p}c]"


def parse_window(text: str) -> Window:
    """Parse 't,p' notation such as '30s,10c', '300,400', or a label '[30s, 10c]'."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    parts = body.split(",")
    if len(parts) != 2:
        raise ValueError(f"window must be 't,p' such as '30s,10c', got {text!r}")
    return Window(parse_duration_ms(parts[0]), parse_chars(parts[1]))


@dataclass(frozen=True, eq=False)
class Cluster:
    """One connected component: member rows plus its bounding box."""

    session: Session
    members: tuple[int, ...]
    ts_min: int
    ts_max: int
    pos_min: int
    pos_max: int


def clusterize(session: Session, window: Window) -> list[Cluster]:
    """Partition a session's ops into window-linked components.

    Members are absolute row indices into the session's log; clusters are
    ordered by earliest member, which is also how labels are assigned.
    """
    log = session.log
    a, b = session.start, session.stop
    labels = kernels.cluster_labels(log.ts[a:b], log.pos[a:b], window.t_ms, window.p)
    n_clusters = int(labels.max()) + 1 if labels.shape[0] else 0
    groups: list[list[int]] = [[] for _ in range(n_clusters)]
    for local, label in enumerate(labels.tolist()):
        groups[label].append(a + local)
    clusters = []
    for members in groups:
        rows = np.array(members, dtype=np.int64)
        ts = log.ts[rows]
        pos = log.pos[rows]
        clusters.append(
            Cluster(
                session,
                tuple(members),
                int(ts.min()),
                int(ts.max()),
                int(pos.min()),
                int(pos.max()),
            )
        )
    return clusters
