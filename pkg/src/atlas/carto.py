"""Map furniture: density fields, contour polylines, label occlusion.

All functions here are pure; the service composes them per request (the
desk-scale corpus makes recomputation cheap enough that nothing is cached).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .corpus import MapPoint, TopicLabel
from .errors import NoPoints

PAD_BANDWIDTHS = 3.0

# bbox approximation shared with the UI via /api/health so occlusion agrees
CHAR_WIDTH_FACTOR = 0.62
LINE_HEIGHT_FACTOR = 1.3
LABEL_FONT_PX = 14.0
PIXELS_PER_UNIT = 50.0

# zoom tier thresholds; "subtopics" are labels ranked below the top few
SUBTOPIC_ZOOM = 3.0
PROJECT_ZOOM = 8.0
TOP_LABEL_COUNT = 12


@dataclass(frozen=True)
class DensityField:
    grid: np.ndarray  # (W, H), grid[ix, iy] is the cell-center value
    bounds: tuple[float, float, float, float]  # xmin, ymin, xmax, ymax
    bandwidth: float

    def cell_center(self, ix: int, iy: int) -> tuple[float, float]:
        xmin, ymin, xmax, ymax = self.bounds
        w, h = self.grid.shape
        return (
            xmin + (ix + 0.5) * (xmax - xmin) / w,
            ymin + (iy + 0.5) * (ymax - ymin) / h,
        )


@dataclass(frozen=True)
class ContourSet:
    levels: tuple[float, ...]
    polylines: tuple[tuple[tuple[tuple[float, float], ...], ...], ...]  # per level


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    def intersects(self, other: "Rect") -> bool:
        """True iff the intersection has positive area (edge contact is fine)."""
        return (
            self.x0 < other.x1 and other.x0 < self.x1
            and self.y0 < other.y1 and other.y0 < self.y1
        )


@dataclass(frozen=True)
class LabelBox:
    label: TopicLabel
    bbox: Rect


def scott_bandwidth(points: Sequence[MapPoint]) -> float:
    n = len(points)
    xs = np.array([p.x for p in points])
    ys = np.array([p.y for p in points])
    mean_std = (xs.std() + ys.std()) / 2.0
    if mean_std == 0.0:
        mean_std = 1.0
    return float(n ** (-1.0 / 6.0) * mean_std)


def density_grid(
    points: Sequence[MapPoint],
    resolution: tuple[int, int] = (128, 128),
    bandwidth: Optional[float] = None,
) -> DensityField:
    """Gaussian KDE at cell centers over the data bbox padded by 3 bandwidths."""
    if not points:
        raise NoPoints("density estimation needs at least one point")
    w, h = resolution
    if w < 2 or h < 2:
        raise ValueError("resolution must be at least 2x2")
    if bandwidth is None:
        bandwidth = scott_bandwidth(points)
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")

    xs = np.array([p.x for p in points])
    ys = np.array([p.y for p in points])
    pad = PAD_BANDWIDTHS * bandwidth
    xmin, xmax = xs.min() - pad, xs.max() + pad
    ymin, ymax = ys.min() - pad, ys.max() + pad

    cx = xmin + (np.arange(w) + 0.5) * (xmax - xmin) / w
    cy = ymin + (np.arange(h) + 0.5) * (ymax - ymin) / h
    dx = cx[:, None, None] - xs[None, None, :]   # (W, 1, n)
    dy = cy[None, :, None] - ys[None, None, :]   # (1, H, n)
    h2 = 2.0 * bandwidth * bandwidth
    grid = np.exp(-(dx * dx + dy * dy) / h2).sum(axis=2)
    grid /= len(points) * math.pi * h2
    return DensityField(grid=grid, bounds=(float(xmin), float(ymin), float(xmax), float(ymax)),
                        bandwidth=float(bandwidth))


# --- marching squares -------------------------------------------------------

def _interp(level, va, vb, pa, pb):
    t = (level - va) / (vb - va)
    return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))


def _cell_segments(level, corners, positions, edges):
    """Segments for one square as (edge_key_a, edge_key_b) pairs."""
    inside = [v >= level for v in corners]
    case = sum(1 << i for i, v in enumerate(inside) if v)
    if case in (0, 15):
        return []
    # corner order: 0=bl, 1=br, 2=tr, 3=tl; edge order: bottom, right, top, left
    edge_corners = ((0, 1), (1, 2), (2, 3), (3, 0))
    segs_by_case = {
        1: [(3, 0)], 2: [(0, 1)], 3: [(3, 1)], 4: [(1, 2)],
        6: [(0, 2)], 7: [(3, 2)], 8: [(2, 3)], 9: [(2, 0)],
        11: [(2, 1)], 12: [(1, 3)], 13: [(1, 0)], 14: [(0, 3)],
    }
    if case in (5, 10):
        center = sum(corners) / 4.0
        if case == 5:   # bl+tr inside
            segs = [(3, 0), (1, 2)] if center < level else [(3, 2), (1, 0)]
        else:           # br+tl inside
            segs = [(0, 1), (2, 3)] if center < level else [(0, 3), (2, 1)]
    else:
        segs = segs_by_case[case]
    out = []
    for ea, eb in segs:
        ca, cb = edge_corners[ea]
        cc, cd = edge_corners[eb]
        pa = _interp(level, corners[ca], corners[cb], positions[ca], positions[cb])
        pb = _interp(level, corners[cc], corners[cd], positions[cc], positions[cd])
        out.append(((edges[ea], pa), (edges[eb], pb)))
    return out


def _chain_segments(segments):
    """Join segments sharing edge keys into polylines; loops close on themselves."""
    adjacency: dict = {}
    seg_points: dict = {}
    for (ka, pa), (kb, pb) in segments:
        adjacency.setdefault(ka, []).append(kb)
        adjacency.setdefault(kb, []).append(ka)
        seg_points[ka] = pa
        seg_points[kb] = pb
        # store the connection to avoid retracing
    edge_pairs = set()
    for (ka, _), (kb, _) in segments:
        edge_pairs.add(frozenset((ka, kb)))

    used: set = set()
    polylines = []

    def walk(start):
        chain = [start]
        current = start
        while True:
            nxt = None
            for cand in adjacency[current]:
                pair = frozenset((current, cand))
                if pair not in used:
                    used.add(pair)
                    nxt = cand
                    break
            if nxt is None:
                break
            chain.append(nxt)
            current = nxt
        return chain

    open_ends = [k for k, nbrs in adjacency.items() if len(nbrs) == 1]
    starts = open_ends + [k for k in adjacency if k not in set(open_ends)]
    for k in starts:
        if all(frozenset((k, nbr)) in used for nbr in adjacency[k]):
            continue
        chain = walk(k)
        if len(chain) < 2:
            continue
        pts = [seg_points[c] for c in chain]
        # a loop walk arrives back at its start; guard against fp identity loss
        if chain[0] == chain[-1] and pts[0] != pts[-1]:
            pts[-1] = pts[0]
        polylines.append(tuple(pts))
    return polylines


def contours(field: DensityField, levels: Sequence[float]) -> ContourSet:
    """Marching squares over the lattice of cell centers."""
    levels = list(levels)
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly ascending")
    grid = field.grid
    w, h = grid.shape
    per_level = []
    for level in levels:
        segments = []
        for ix in range(w - 1):
            for iy in range(h - 1):
                corners = (
                    grid[ix, iy], grid[ix + 1, iy],
                    grid[ix + 1, iy + 1], grid[ix, iy + 1],
                )
                if max(corners) < level or min(corners) >= level:
                    continue
                positions = (
                    field.cell_center(ix, iy),
                    field.cell_center(ix + 1, iy),
                    field.cell_center(ix + 1, iy + 1),
                    field.cell_center(ix, iy + 1),
                )
                edges = (
                    ("h", ix, iy),       # bottom: between (ix,iy)-(ix+1,iy)
                    ("v", ix + 1, iy),   # right
                    ("h", ix, iy + 1),   # top
                    ("v", ix, iy),       # left
                )
                segments.extend(_cell_segments(level, corners, positions, edges))
        per_level.append(tuple(_chain_segments(segments)))
    return ContourSet(levels=tuple(levels), polylines=tuple(per_level))


def default_levels(field: DensityField, n_levels: int = 5) -> list[float]:
    top = float(field.grid.max())
    if top <= 0.0:
        return []
    return list(np.linspace(0.1 * top, 0.9 * top, n_levels))


# --- label occlusion ---------------------------------------------------------

@dataclass(frozen=True)
class Viewport:
    x0: float
    y0: float
    x1: float
    y1: float
    zoom: float = 1.0

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("viewport must have positive extent")
        if self.zoom <= 0:
            raise ValueError("zoom must be positive")

    def to_screen(self, x: float, y: float) -> tuple[float, float]:
        scale = self.zoom * PIXELS_PER_UNIT
        return (x - self.x0) * scale, (y - self.y0) * scale

    def screen_rect(self) -> Rect:
        scale = self.zoom * PIXELS_PER_UNIT
        return Rect(0.0, 0.0, (self.x1 - self.x0) * scale, (self.y1 - self.y0) * scale)


def label_bbox(label: TopicLabel, viewport: Viewport,
               font_px: float = LABEL_FONT_PX, font_scale: float = 1.0) -> Rect:
    sx, sy = viewport.to_screen(label.position.x, label.position.y)
    width = CHAR_WIDTH_FACTOR * font_px * len(label.text) * font_scale
    height = LINE_HEIGHT_FACTOR * font_px * font_scale
    return Rect(sx - width / 2, sy - height / 2, sx + width / 2, sy + height / 2)


def place_labels(labels: Sequence[TopicLabel], viewport: Viewport,
                 font_px: float = LABEL_FONT_PX) -> list[LabelBox]:
    """Greedy occlusion in popularity order: popular labels claim space first."""
    screen = viewport.screen_rect()
    accepted: list[LabelBox] = []
    for label in sorted(labels, key=lambda t: (-t.count, t.text)):
        box = label_bbox(label, viewport, font_px)
        if not box.intersects(screen):
            continue
        if any(box.intersects(placed.bbox) for placed in accepted):
            continue
        accepted.append(LabelBox(label=label, bbox=box))
    return accepted


def visible_detail(zoom: float) -> str:
    if zoom <= 0:
        raise ValueError("zoom must be positive")
    if zoom < SUBTOPIC_ZOOM:
        return "overview"
    if zoom < PROJECT_ZOOM:
        return "subtopics"
    return "projects"
