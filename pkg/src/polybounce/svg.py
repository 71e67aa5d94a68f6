"""Deterministic SVG rendering of tables, corridors, and glued surfaces.

Output is a pure function of the scene: fixed decimal formatting, stable
element order, no timestamps.  Identical input gives identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .errors import EmptyScene
from .flow import Trajectory
from .geom import Point2, Segment
from .surface import CuttingWord, GluedPolygon
from .table import LabeledTable
from .unfolding import UnfoldingCorridor


@dataclass(frozen=True)
class TableScene:
    table: LabeledTable
    trajectory: Optional[Trajectory] = None


@dataclass(frozen=True)
class CorridorScene:
    corridor: UnfoldingCorridor
    developed: Tuple[Point2, ...] = ()


@dataclass(frozen=True)
class GluedScene:
    glued: GluedPolygon
    cutting: Optional[CuttingWord] = None


def _fmt(value: float) -> str:
    return f"{value:.6f}"


class _Canvas:
    def __init__(self):
        self.xs = []
        self.ys = []
        self.elements = []

    def track(self, p: Point2):
        self.xs.append(float(p.x))
        self.ys.append(float(p.y))

    def polygon(self, points: Sequence[Point2], css: str):
        for p in points:
            self.track(p)
        self.elements.append(("polygon", tuple(points), css))

    def polyline(self, points: Sequence[Point2], css: str):
        for p in points:
            self.track(p)
        self.elements.append(("polyline", tuple(points), css))

    def line(self, seg: Segment, css: str):
        self.track(seg.a)
        self.track(seg.b)
        self.elements.append(("line", (seg.a, seg.b), css))

    def dot(self, p: Point2, css: str):
        self.track(p)
        self.elements.append(("dot", (p,), css))

    def render(self) -> str:
        if not self.elements:
            raise EmptyScene("nothing to draw")
        xmin, xmax = min(self.xs), max(self.xs)
        ymin, ymax = min(self.ys), max(self.ys)
        span = max(xmax - xmin, ymax - ymin, 1e-9)
        margin = 0.05 * span
        xmin -= margin
        ymin -= margin
        xmax += margin
        ymax += margin
        width = xmax - xmin
        height = ymax - ymin
        stroke = span / 300.0
        dot_r = span / 120.0

        def sx(p: Point2) -> str:
            return _fmt(float(p.x) - xmin)

        def sy(p: Point2) -> str:
            return _fmt(ymax - float(p.y))  # flip: SVG y grows downward

        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(width)} '
            f'{_fmt(height)}" width="640" height="{_fmt(640 * height / width)}">',
            f'<g fill="none" stroke-width="{_fmt(stroke)}">',
        ]
        for kind, pts, css in self.elements:
            if kind == "polygon":
                coords = " ".join(f"{sx(p)},{sy(p)}" for p in pts)
                out.append(f'<polygon points="{coords}" {css}/>')
            elif kind == "polyline":
                coords = " ".join(f"{sx(p)},{sy(p)}" for p in pts)
                out.append(f'<polyline points="{coords}" {css}/>')
            elif kind == "line":
                a, b = pts
                out.append(
                    f'<line x1="{sx(a)}" y1="{sy(a)}" x2="{sx(b)}" y2="{sy(b)}" {css}/>'
                )
            elif kind == "dot":
                (p,) = pts
                out.append(
                    f'<circle cx="{sx(p)}" cy="{sy(p)}" r="{_fmt(dot_r)}" {css}/>'
                )
        out.append("</g>")
        out.append("</svg>")
        return "\n".join(out) + "\n"


def render_svg(scene) -> str:
    canvas = _Canvas()
    if isinstance(scene, TableScene):
        canvas.polygon(scene.table.vertices, 'stroke="black"')
        if scene.trajectory is not None and scene.trajectory.hits:
            pts = [scene.trajectory.start.position] + [
                h.point for h in scene.trajectory.hits
            ]
            canvas.polyline(pts, 'stroke="crimson"')
            for h in scene.trajectory.hits:
                canvas.dot(h.point, 'fill="crimson" stroke="none"')
    elif isinstance(scene, CorridorScene):
        corridor = scene.corridor
        for iso in corridor.copies:
            canvas.polygon(
                [iso.apply(v) for v in corridor.table.vertices], 'stroke="black"'
            )
        for gate in corridor.gates:
            canvas.line(gate, 'stroke="royalblue"')
        if scene.developed:
            canvas.polyline(list(scene.developed), 'stroke="crimson"')
            for p in scene.developed:
                canvas.dot(p, 'fill="crimson" stroke="none"')
    elif isinstance(scene, GluedScene):
        canvas.polygon(scene.glued.polygon.vertices, 'stroke="black"')
        if scene.cutting is not None:
            for chord in scene.cutting.chords:
                canvas.line(chord, 'stroke="seagreen"')
    else:
        raise EmptyScene(f"unknown scene type {type(scene).__name__}")
    return canvas.render()
