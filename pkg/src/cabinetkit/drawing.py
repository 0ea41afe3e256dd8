"""Engineering-drawing synthesis: views, annotations, layout, SVG.

A drawing is built in stages, each a pure function:

1. ``render_views`` projects every instance box into the requested
   orthographic views (wireframe, no hidden-line removal) and merges
   collinear overlapping segments — the *geometry layer*.
2. ``annotate`` adds the *annotation layer*: overall and per-instance
   dimension sets plus functional symbols (a circle for adjustable
   shelves, a triangle for doors and their opening direction).
3. ``inject_noise`` optionally degrades the geometry layer (segment
   drops, endpoint jitter, spurious strokes), deterministically per seed.
4. ``layout_sheet`` places the views on a fixed square canvas (default
   512 x 512 px) with one uniform scale: the canonical three-view set
   puts top at the top left, front at the bottom left, and side at the
   bottom right; other view counts fall back to a row-major grid.
5. ``to_svg`` serializes with ``geometry`` and ``annotation`` as separate
   named groups so either layer can be toggled independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .catalog import PrimitiveCatalog
from .geometry import Point2, Segment
from .program import CabinetModel

DEFAULT_CANVAS_PX = 512
DEFAULT_MARGIN_PX = 22.0
DEFAULT_VIEW_GAP_PX = 26.0

ROLE_ADJUSTABLE_SHELF = "adjustable_shelf"
ROLE_DOOR = "door"

SYMBOL_SHELF_CIRCLE = "adjustable_shelf_circle"
SYMBOL_DOOR_TRIANGLE = "door_opening_triangle"

_GEOMETRY_LAYER = "geometry"
_ANNOTATION_LAYER = "annotation"


@dataclass(frozen=True)
class DimensionSet:
    """A measured span with extension lines and an integer-mm label."""

    start: Point2
    end: Point2
    offset: float  # signed perpendicular offset of the dimension line, mm
    label: str

    def __post_init__(self) -> None:
        expected = render_dimension_label(self.start, self.end)
        if self.label != expected:
            raise ValueError(
                f"dimension label {self.label!r} does not equal the measured "
                f"span ({expected} mm)"
            )

    @classmethod
    def for_span(cls, start: Point2, end: Point2, offset: float) -> "DimensionSet":
        return cls(start, end, offset, render_dimension_label(start, end))

    @property
    def length(self) -> float:
        return math.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1])

    def line_points(self) -> tuple[Point2, Point2]:
        """Endpoints of the dimension line (span shifted by the offset)."""
        ux, uy = _unit(self.start, self.end)
        px, py = -uy * self.offset, ux * self.offset
        return (
            (self.start[0] + px, self.start[1] + py),
            (self.end[0] + px, self.end[1] + py),
        )


def render_dimension_label(start: Point2, end: Point2) -> str:
    return str(int(round(math.hypot(end[0] - start[0], end[1] - start[1]))))


def _unit(start: Point2, end: Point2) -> Point2:
    dx, dy = end[0] - start[0], end[1] - start[1]
    norm = math.hypot(dx, dy)
    return (dx / norm, dy / norm)


@dataclass(frozen=True)
class SymbolMark:
    """A functional symbol anchored in view coordinates."""

    kind: str
    anchor: Point2
    width: float = 60.0
    height: float = 60.0

    def __post_init__(self) -> None:
        if self.kind not in (SYMBOL_SHELF_CIRCLE, SYMBOL_DOOR_TRIANGLE):
            raise ValueError(f"unknown symbol kind {self.kind!r}")


Annotation = DimensionSet | SymbolMark


@dataclass
class ViewDrawing:
    """One orthographic view: geometry segments plus annotations (mm)."""

    kind: str
    segments: list[Segment] = field(default_factory=list)
    annotations: list[Annotation] = field(default_factory=list)


def render_views(
    model: CabinetModel,
    views: list[str],
    *,
    section_cut_y: float | None = None,
) -> list[ViewDrawing]:
    """Project the model into each requested view (1 to 5 views).

    A ``section`` view draws, front-style, only the instances whose box
    center lies behind the cut plane (default: the model's mid depth).
    """
    if not views:
        raise ValueError("at least one view is required")
    if len(views) > 5:
        raise ValueError("at most 5 views are supported on one sheet")
    out: list[ViewDrawing] = []
    for kind in views:
        if kind not in geometry.VIEW_KINDS:
            raise ValueError(f"unknown view kind {kind!r}")
        instances = model.instances
        if kind == geometry.VIEW_SECTION:
            cut = section_cut_y
            if cut is None:
                lo, hi = geometry.model_aabb(model)
                cut = float((lo[1] + hi[1]) / 2.0)
            instances = tuple(
                inst for inst in instances if inst.box.position[1] > cut
            )
        segments: list[Segment] = []
        for instance in instances:
            segments.extend(geometry.project_box(instance.box, kind))
        out.append(ViewDrawing(kind=kind, segments=geometry.merge_segments(segments)))
    return out


@dataclass(frozen=True)
class AnnotateOptions:
    enabled: bool = True
    overall_dims: bool = True
    instance_dims: bool = True
    symbols: bool = True
    min_extent_mm: float = 100.0
    dim_offset_mm: float = 60.0
    dim_spacing_mm: float = 45.0


def annotate(
    views: list[ViewDrawing],
    model: CabinetModel,
    catalog: PrimitiveCatalog,
    options: AnnotateOptions | None = None,
) -> list[ViewDrawing]:
    """Add dimension sets and functional symbols to rendered views."""
    options = options or AnnotateOptions()
    if not options.enabled:
        return [ViewDrawing(v.kind, list(v.segments), list(v.annotations)) for v in views]

    out: list[ViewDrawing] = []
    for view in views:
        annotations = list(view.annotations)
        bbox = _segments_bbox(view.segments)
        if bbox is not None:
            h0, v0, h1, v1 = bbox
            if options.overall_dims:
                if h1 > h0:
                    annotations.append(
                        DimensionSet.for_span((h0, v0), (h1, v0), -options.dim_offset_mm)
                    )
                if v1 > v0:
                    annotations.append(
                        DimensionSet.for_span((h0, v0), (h0, v1), options.dim_offset_mm)
                    )
            if options.instance_dims:
                annotations.extend(_instance_dims(view, model, bbox, options))
        if options.symbols and view.kind in (geometry.VIEW_FRONT, geometry.VIEW_SECTION):
            annotations.extend(_symbols(view, model, catalog))
        out.append(ViewDrawing(view.kind, list(view.segments), annotations))
    return out


def _instance_bbox(instance, kind: str) -> tuple[float, float, float, float]:
    ax_h, ax_v = geometry.view_axes(kind)
    corners = geometry.box_corners(instance.box)
    hs, vs = corners[:, ax_h], corners[:, ax_v]
    return float(hs.min()), float(vs.min()), float(hs.max()), float(vs.max())


def _instance_dims(view, model, view_bbox, options) -> list[DimensionSet]:
    """Dimension salient instance spans: widths above, heights to the right."""
    _, _, view_h1, view_v1 = view_bbox
    dims: list[DimensionSet] = []
    seen_h: set[tuple[int, int]] = set()
    seen_v: set[tuple[int, int]] = set()
    h_stack = 0
    v_stack = 0
    for instance in model.instances:
        h0, v0, h1, v1 = _instance_bbox(instance, view.kind)
        if h1 - h0 >= options.min_extent_mm:
            key = (round(h0), round(h1))
            if key not in seen_h:
                seen_h.add(key)
                offset = (view_v1 - v1) + options.dim_offset_mm + h_stack * options.dim_spacing_mm
                dims.append(DimensionSet.for_span((h0, v1), (h1, v1), offset))
                h_stack += 1
        if v1 - v0 >= options.min_extent_mm:
            key = (round(v0), round(v1))
            if key not in seen_v:
                seen_v.add(key)
                offset = (view_h1 - h1) + options.dim_offset_mm + v_stack * options.dim_spacing_mm
                dims.append(DimensionSet.for_span((h1, v0), (h1, v1), -offset))
                v_stack += 1
    return dims


def _symbols(view, model, catalog: PrimitiveCatalog) -> list[SymbolMark]:
    marks: list[SymbolMark] = []
    for instance in model.instances:
        schema = catalog.get(instance.model_id)
        if schema is None or schema.role is None:
            continue
        h0, v0, h1, v1 = _instance_bbox(instance, view.kind)
        anchor = ((h0 + h1) / 2.0, (v0 + v1) / 2.0)
        if schema.role == ROLE_ADJUSTABLE_SHELF:
            marks.append(SymbolMark(SYMBOL_SHELF_CIRCLE, anchor))
        elif schema.role == ROLE_DOOR:
            marks.append(
                SymbolMark(SYMBOL_DOOR_TRIANGLE, anchor, width=h1 - h0, height=v1 - v0)
            )
    return marks


@dataclass(frozen=True)
class NoiseSpec:
    """Degradation rates; the defaults are placeholders, not reported values."""

    p_drop: float = 0.05
    jitter_sigma: float = 2.0
    p_spurious: float = 0.02

    def __post_init__(self) -> None:
        for p in (self.p_drop, self.p_spurious):
            if not 0.0 <= p <= 1.0:
                raise ValueError("probabilities must lie in [0, 1]")
        if self.jitter_sigma < 0:
            raise ValueError("jitter_sigma must be non-negative")

    @property
    def is_identity(self) -> bool:
        return self.p_drop == 0 and self.jitter_sigma == 0 and self.p_spurious == 0


def inject_noise(views: list[ViewDrawing], spec: NoiseSpec, seed: int) -> list[ViewDrawing]:
    """Deterministically degrade the geometry layer; annotations untouched."""
    rng = np.random.default_rng(seed)
    out: list[ViewDrawing] = []
    for view in views:
        segments: list[Segment] = []
        for p, q in view.segments:
            if rng.random() < spec.p_drop:
                continue
            if spec.jitter_sigma > 0:
                jitter = rng.normal(0.0, spec.jitter_sigma, size=4)
                p = (p[0] + jitter[0], p[1] + jitter[1])
                q = (q[0] + jitter[2], q[1] + jitter[3])
            segments.append((p, q))
        if spec.p_spurious > 0 and view.segments:
            bbox = _segments_bbox(view.segments)
            count = int(rng.binomial(len(view.segments), spec.p_spurious))
            for _ in range(count):
                segments.append(_spurious_segment(rng, bbox))
        out.append(ViewDrawing(view.kind, segments, list(view.annotations)))
    return out


def _spurious_segment(rng, bbox) -> Segment:
    h0, v0, h1, v1 = bbox
    x = rng.uniform(h0, h1)
    y = rng.uniform(v0, v1)
    length = rng.uniform(5.0, 30.0)
    angle = rng.uniform(0.0, 2 * math.pi)
    return ((x, y), (x + length * math.cos(angle), y + length * math.sin(angle)))


@dataclass(frozen=True)
class PlacedView:
    """A view with its affine placement: px = scale*h + dx, py = dy - scale*v."""

    view: ViewDrawing
    dx: float
    dy: float


@dataclass(frozen=True)
class Sheet:
    canvas_px: int
    margin_px: float
    scale: float
    views: tuple[PlacedView, ...]

    def to_px(self, placed: PlacedView, point: Point2) -> Point2:
        return (self.scale * point[0] + placed.dx, placed.dy - self.scale * point[1])


def _segments_bbox(segments) -> tuple[float, float, float, float] | None:
    if not segments:
        return None
    hs = [c for p, q in segments for c in (p[0], q[0])]
    vs = [c for p, q in segments for c in (p[1], q[1])]
    return min(hs), min(vs), max(hs), max(vs)


def _view_extent(view: ViewDrawing) -> tuple[float, float, float, float]:
    """Bounding box of geometry plus annotation construction points (mm)."""
    points: list[Point2] = []
    for p, q in view.segments:
        points.extend((p, q))
    for ann in view.annotations:
        if isinstance(ann, DimensionSet):
            a, b = ann.line_points()
            points.extend((ann.start, ann.end, a, b))
        else:
            ax, ay = ann.anchor
            points.append((ax - ann.width / 2, ay - ann.height / 2))
            points.append((ax + ann.width / 2, ay + ann.height / 2))
    if not points:
        return 0.0, 0.0, 1.0, 1.0
    hs = [p[0] for p in points]
    vs = [p[1] for p in points]
    return min(hs), min(vs), max(hs), max(vs)


def layout_sheet(
    views: list[ViewDrawing],
    canvas: int = DEFAULT_CANVAS_PX,
    *,
    margin: float = DEFAULT_MARGIN_PX,
    gap: float = DEFAULT_VIEW_GAP_PX,
) -> Sheet:
    """Place 1-5 views on the canvas with one shared scale.

    The canonical {front, top, side} set follows the third-angle layout
    (top above front, side right of front, aligned). Any other combination
    uses a row-major grid of uniform cells.
    """
    if not 1 <= len(views) <= 5:
        raise ValueError("a sheet holds between 1 and 5 views")
    kinds = [v.kind for v in views]
    if sorted(kinds) == ["front", "side", "top"]:
        return _layout_canonical(views, canvas, margin, gap)
    return _layout_grid(views, canvas, margin, gap)


def _layout_canonical(views, canvas, margin, gap) -> Sheet:
    by_kind = {v.kind: v for v in views}
    front = _view_extent(by_kind["front"])
    top = _view_extent(by_kind["top"])
    side = _view_extent(by_kind["side"])

    # Column 1 (front under top) shares the x axis; row heights: the top
    # view's depth above, front/side height below.
    col1_h0 = min(front[0], top[0])
    col1_h1 = max(front[2], top[2])
    col2_w = side[2] - side[0]
    row_top_v0, row_top_v1 = top[1], top[3]
    row_bot_v0 = min(front[1], side[1])
    row_bot_v1 = max(front[3], side[3])

    total_w = (col1_h1 - col1_h0) + col2_w
    total_h = (row_top_v1 - row_top_v0) + (row_bot_v1 - row_bot_v0)
    avail = canvas - 2 * margin - gap
    scale = min(avail / total_w, avail / total_h)

    origin_x = (canvas - (scale * total_w + gap)) / 2.0
    origin_y = (canvas - (scale * total_h + gap)) / 2.0
    col1_x = origin_x
    col2_x = origin_x + scale * (col1_h1 - col1_h0) + gap
    row_top_base = origin_y + scale * (row_top_v1 - row_top_v0)  # py of v = row_top_v0
    row_bot_base = row_top_base + gap + scale * (row_bot_v1 - row_bot_v0)

    placed = []
    for view in views:  # preserve caller order
        if view.kind == "top":
            placed.append(
                PlacedView(view, col1_x - scale * col1_h0, row_top_base + scale * row_top_v0)
            )
        elif view.kind == "front":
            placed.append(
                PlacedView(view, col1_x - scale * col1_h0, row_bot_base + scale * row_bot_v0)
            )
        else:
            placed.append(
                PlacedView(view, col2_x - scale * side[0], row_bot_base + scale * row_bot_v0)
            )
    return Sheet(canvas_px=canvas, margin_px=margin, scale=scale, views=tuple(placed))


_GRID_SHAPES = {1: (1, 1), 2: (1, 2), 3: (1, 3), 4: (2, 2), 5: (2, 3)}


def _layout_grid(views, canvas, margin, gap) -> Sheet:
    rows, cols = _GRID_SHAPES[len(views)]
    extents = [_view_extent(v) for v in views]
    cell_w = max(e[2] - e[0] for e in extents)
    cell_h = max(e[3] - e[1] for e in extents)
    avail_w = canvas - 2 * margin - (cols - 1) * gap
    avail_h = canvas - 2 * margin - (rows - 1) * gap
    scale = min(avail_w / (cols * cell_w), avail_h / (rows * cell_h))
    used_w = cols * scale * cell_w + (cols - 1) * gap
    used_h = rows * scale * cell_h + (rows - 1) * gap
    origin_x = (canvas - used_w) / 2.0
    origin_y = (canvas - used_h) / 2.0

    placed = []
    for index, (view, extent) in enumerate(zip(views, extents)):
        row, col = divmod(index, cols)
        cell_x = origin_x + col * (scale * cell_w + gap)
        cell_y = origin_y + row * (scale * cell_h + gap)
        # center the view inside its cell
        w = extent[2] - extent[0]
        h = extent[3] - extent[1]
        pad_x = (cell_w - w) * scale / 2.0
        pad_y = (cell_h - h) * scale / 2.0
        dx = cell_x + pad_x - scale * extent[0]
        dy = cell_y + pad_y + scale * extent[3]
        placed.append(PlacedView(view, dx, dy))
    return Sheet(canvas_px=canvas, margin_px=margin, scale=scale, views=tuple(placed))


@dataclass(frozen=True)
class DrawingStyle:
    """Visual constants; every value can be overridden from a config file."""

    layers: frozenset[str] = frozenset({_GEOMETRY_LAYER, _ANNOTATION_LAYER})
    geometry_stroke_px: float = 1.0
    annotation_stroke_px: float = 0.75
    arrow_px: float = 6.0
    font_px: float = 10.0
    geometry_color: str = "#000000"
    annotation_color: str = "#333333"
    symbol_color: str = "#d40000"  # red circle / red triangle convention

    @classmethod
    def from_config(cls, text: str) -> "DrawingStyle":
        """Load overrides from a restricted-YAML style config."""
        from . import ryaml

        data = ryaml.loads(text)
        if not isinstance(data, dict):
            raise ValueError("style config must be a mapping")
        kwargs = {}
        if "layers" in data:
            layers = data.pop("layers")
            if not isinstance(layers, list):
                raise ValueError("'layers' must be a sequence")
            kwargs["layers"] = frozenset(str(l) for l in layers)
        for key, value in data.items():
            if key not in cls.__dataclass_fields__:
                raise ValueError(f"unknown style option {key!r}")
            field_type = type(getattr(cls(), key))
            kwargs[key] = field_type(value)
        return cls(**kwargs)


def _fmt(value: float) -> str:
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def to_svg(sheet: Sheet, style: DrawingStyle | None = None) -> str:
    """Deterministic SVG with separate named geometry/annotation groups."""
    style = style or DrawingStyle()
    c = sheet.canvas_px
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" '
        f'viewBox="0 0 {c} {c}">',
    ]
    if _GEOMETRY_LAYER in style.layers:
        lines.append(
            f'<g id="geometry" fill="none" stroke="{style.geometry_color}" '
            f'stroke-width="{_fmt(style.geometry_stroke_px)}">'
        )
        for placed in sheet.views:
            for p, q in placed.view.segments:
                x1, y1 = sheet.to_px(placed, p)
                x2, y2 = sheet.to_px(placed, q)
                lines.append(
                    f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" '
                    f'x2="{_fmt(x2)}" y2="{_fmt(y2)}"/>'
                )
        lines.append("</g>")
    if _ANNOTATION_LAYER in style.layers:
        lines.append(
            f'<g id="annotation" fill="none" stroke="{style.annotation_color}" '
            f'stroke-width="{_fmt(style.annotation_stroke_px)}" '
            f'font-size="{_fmt(style.font_px)}">'
        )
        for placed in sheet.views:
            for ann in placed.view.annotations:
                if isinstance(ann, DimensionSet):
                    lines.extend(_svg_dimension(sheet, placed, ann, style))
                else:
                    lines.extend(_svg_symbol(sheet, placed, ann, style))
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _svg_line(a: Point2, b: Point2) -> str:
    return (
        f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" '
        f'x2="{_fmt(b[0])}" y2="{_fmt(b[1])}"/>'
    )


def _svg_dimension(sheet: Sheet, placed: PlacedView, dim: DimensionSet, style: DrawingStyle):
    line_a, line_b = dim.line_points()
    start_px = sheet.to_px(placed, dim.start)
    end_px = sheet.to_px(placed, dim.end)
    a_px = sheet.to_px(placed, line_a)
    b_px = sheet.to_px(placed, line_b)
    out = [
        _svg_line(start_px, a_px),
        _svg_line(end_px, b_px),
        _svg_line(a_px, b_px),
        _svg_arrow(a_px, b_px, style.arrow_px),
        _svg_arrow(b_px, a_px, style.arrow_px),
    ]
    mid_x = (a_px[0] + b_px[0]) / 2.0
    mid_y = (a_px[1] + b_px[1]) / 2.0
    # Nudge the label off the dimension line, against the px-space normal.
    ux, uy = _unit(a_px, b_px)
    tx = mid_x + uy * (style.font_px * 0.45)
    ty = mid_y - ux * (style.font_px * 0.45) if ux != 0 else mid_y - style.font_px * 0.35
    out.append(
        f'<text x="{_fmt(tx)}" y="{_fmt(ty)}" text-anchor="middle" '
        f'stroke="none" fill="{style.annotation_color}">{dim.label}</text>'
    )
    return out


def _svg_arrow(tip: Point2, other: Point2, size_px: float) -> str:
    """Filled arrowhead at `tip`, pointing away from `other`."""
    ux, uy = _unit(other, tip)
    bx = tip[0] - ux * size_px
    by = tip[1] - uy * size_px
    half = size_px * 0.3
    p1 = (bx - uy * half, by + ux * half)
    p2 = (bx + uy * half, by - ux * half)
    return (
        f'<path d="M {_fmt(tip[0])} {_fmt(tip[1])} L {_fmt(p1[0])} {_fmt(p1[1])} '
        f'L {_fmt(p2[0])} {_fmt(p2[1])} Z" fill="currentColor" stroke="none"/>'
    )


def _svg_symbol(sheet: Sheet, placed: PlacedView, mark: SymbolMark, style: DrawingStyle):
    cx, cy = sheet.to_px(placed, mark.anchor)
    if mark.kind == SYMBOL_SHELF_CIRCLE:
        radius = sheet.scale * mark.width / 2.0
        return [
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(radius)}" '
            f'stroke="{style.symbol_color}"/>'
        ]
    # Door opening triangle: hinge edge on the left, apex at mid right.
    w = sheet.scale * mark.width / 2.0
    h = sheet.scale * mark.height / 2.0
    return [
        f'<path d="M {_fmt(cx - w)} {_fmt(cy - h)} L {_fmt(cx - w)} {_fmt(cy + h)} '
        f'L {_fmt(cx + w)} {_fmt(cy)} Z" stroke="{style.symbol_color}"/>'
    ]
