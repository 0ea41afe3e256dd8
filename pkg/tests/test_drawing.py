import math
import re
import xml.etree.ElementTree as ET

import pytest

from cabinetkit import (
    CabinetModel,
    OrientedBox,
    SynthSpec,
    generate,
    make_instance,
)
from cabinetkit.drawing import (
    DEFAULT_CANVAS_PX,
    AnnotateOptions,
    DimensionSet,
    DrawingStyle,
    NoiseSpec,
    SymbolMark,
    annotate,
    inject_noise,
    layout_sheet,
    render_views,
    to_svg,
)
from cabinetkit.geometry import model_aabb


def geometry_group(svg: str) -> str:
    match = re.search(r'<g id="geometry".*?</g>', svg, re.S)
    assert match, "geometry group missing"
    return match.group(0)


class TestRenderViews:
    def test_single_box_front_view(self, catalog):
        model = CabinetModel(
            (make_instance(catalog, "M-DOOR", OrientedBox((5, 5, 5), (4, 2, 6))),)
        )
        views = render_views(model, ["front"])
        assert len(views) == 1
        assert len(views[0].segments) == 4

    def test_shared_edge_emitted_once(self, catalog):
        a = make_instance(catalog, "M-SHFX", OrientedBox((5, 5, 5), (10, 10, 10)))
        b = make_instance(catalog, "M-SHFX", OrientedBox((15, 5, 5), (10, 10, 10)))
        views = render_views(CabinetModel((a, b)), ["front"])
        # 3 verticals (the shared x=10 edge once) + merged top and bottom runs
        segments = views[0].segments
        assert len(segments) == 5
        shared = [s for s in segments if s[0][0] == 10 and s[1][0] == 10]
        assert len(shared) == 1

    def test_any_view_subset(self, catalog, simple_model):
        for kinds in (["front"], ["top", "side"], ["front", "top", "side", "section"]):
            views = render_views(simple_model, kinds)
            assert [v.kind for v in views] == kinds

    def test_section_cuts_by_depth(self, catalog):
        front_box = make_instance(catalog, "M-DOOR", OrientedBox((5, 1, 5), (4, 2, 6)))
        back_box = make_instance(catalog, "M-SHFX", OrientedBox((5, 9, 5), (4, 2, 6)))
        model = CabinetModel((front_box, back_box))
        section = render_views(model, ["section"], section_cut_y=5.0)[0]
        assert len(section.segments) == 4  # only the back instance

    def test_view_count_limits(self, catalog, simple_model):
        with pytest.raises(ValueError):
            render_views(simple_model, [])
        with pytest.raises(ValueError):
            render_views(simple_model, ["front"] * 6)

    def test_front_bbox_matches_model_aabb(self, catalog, simple_model):
        view = render_views(simple_model, ["front"])[0]
        lo, hi = model_aabb(simple_model)
        hs = [c for p, q in view.segments for c in (p[0], q[0])]
        vs = [c for p, q in view.segments for c in (p[1], q[1])]
        assert abs(min(hs) - lo[0]) < 1e-6 and abs(max(hs) - hi[0]) < 1e-6
        assert abs(min(vs) - lo[2]) < 1e-6 and abs(max(vs) - hi[2]) < 1e-6


class TestAnnotate:
    def test_overall_width_label(self, catalog, simple_model):
        views = annotate(render_views(simple_model, ["front"]), simple_model, catalog)
        labels = [a.label for a in views[0].annotations if isinstance(a, DimensionSet)]
        assert "1200" in labels  # overall width
        assert "1800" in labels  # overall height

    def test_adjustable_shelf_circle(self, catalog, simple_model):
        views = annotate(render_views(simple_model, ["front"]), simple_model, catalog)
        circles = [
            a for a in views[0].annotations
            if isinstance(a, SymbolMark) and a.kind == "adjustable_shelf_circle"
        ]
        assert len(circles) == 1
        shelf = simple_model.instances[2]
        assert circles[0].anchor == (shelf.box.position[0], shelf.box.position[2])

    def test_door_triangle(self, catalog, simple_model):
        views = annotate(render_views(simple_model, ["front"]), simple_model, catalog)
        triangles = [
            a for a in views[0].annotations
            if isinstance(a, SymbolMark) and a.kind == "door_opening_triangle"
        ]
        assert len(triangles) == 1

    def test_disabled_is_identity(self, catalog, simple_model):
        views = render_views(simple_model, ["front", "top"])
        out = annotate(views, simple_model, catalog, AnnotateOptions(enabled=False))
        assert out == views

    def test_min_extent_threshold(self, catalog, simple_model):
        views = render_views(simple_model, ["front"])
        few = annotate(views, simple_model, catalog, AnnotateOptions(min_extent_mm=1e9))
        many = annotate(views, simple_model, catalog, AnnotateOptions(min_extent_mm=10))
        def dims(v):
            return [a for a in v[0].annotations if isinstance(a, DimensionSet)]
        assert len(dims(few)) < len(dims(many))

    def test_labels_parse_back_to_span(self, catalog):
        for seed in range(10):
            model = generate(SynthSpec(seed=seed))
            views = annotate(render_views(model, ["front", "top", "side"]), model, catalog)
            for view in views:
                for ann in view.annotations:
                    if isinstance(ann, DimensionSet):
                        measured = math.hypot(
                            ann.end[0] - ann.start[0], ann.end[1] - ann.start[1]
                        )
                        assert int(ann.label) == round(measured)
                        assert abs(int(ann.label) - measured) < 1e-9

    def test_dimension_label_must_be_truthful(self):
        with pytest.raises(ValueError):
            DimensionSet((0.0, 0.0), (100.0, 0.0), 10.0, "999")


class TestLayout:
    def test_canonical_alignment(self, catalog, simple_model):
        views = render_views(simple_model, ["front", "top", "side"])
        sheet = layout_sheet(views)
        placed = {p.view.kind: p for p in sheet.views}
        # top is directly above front: identical x transform
        assert placed["top"].dx == placed["front"].dx
        # side is right of front: identical vertical transform
        assert placed["side"].dy == placed["front"].dy
        top_bottom = max(
            sheet.to_px(placed["top"], p)[1]
            for seg in placed["top"].view.segments for p in seg
        )
        front_top = min(
            sheet.to_px(placed["front"], p)[1]
            for seg in placed["front"].view.segments for p in seg
        )
        assert top_bottom < front_top

    def test_single_view_centered_and_fits(self, catalog, simple_model):
        views = render_views(simple_model, ["front"])
        sheet = layout_sheet(views)
        points = [
            sheet.to_px(sheet.views[0], p)
            for seg in sheet.views[0].view.segments for p in seg
        ]
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        canvas, margin = sheet.canvas_px, sheet.margin_px
        assert min(xs) >= margin - 1e-6 and max(xs) <= canvas - margin + 1e-6
        assert min(ys) >= margin - 1e-6 and max(ys) <= canvas - margin + 1e-6
        # centered: symmetric slack
        assert abs((min(xs) - margin) - (canvas - margin - max(xs))) < 1e-6

    def test_scale_fills_canvas(self, catalog, simple_model):
        views = annotate(render_views(simple_model, ["front"]), simple_model, catalog)
        sheet = layout_sheet(views)
        points = []
        for placed in sheet.views:
            for seg in placed.view.segments:
                points.extend(sheet.to_px(placed, p) for p in seg)
            for ann in placed.view.annotations:
                if isinstance(ann, DimensionSet):
                    a, b = ann.line_points()
                    points.extend(
                        sheet.to_px(placed, p) for p in (ann.start, ann.end, a, b)
                    )
        span_x = max(p[0] for p in points) - min(p[0] for p in points)
        span_y = max(p[1] for p in points) - min(p[1] for p in points)
        expected = sheet.canvas_px - 2 * sheet.margin_px
        assert max(span_x, span_y) == pytest.approx(expected, abs=1e-6)

    def test_all_views_inside_canvas(self, catalog):
        for seed in (1, 5, 9):
            model = generate(SynthSpec(seed=seed))
            for kinds in (["front"], ["front", "top"], ["front", "top", "side"],
                          ["front", "top", "side", "section"]):
                views = annotate(render_views(model, kinds), model, catalog)
                sheet = layout_sheet(views)
                for placed in sheet.views:
                    for seg in placed.view.segments:
                        for p in seg:
                            x, y = sheet.to_px(placed, p)
                            assert -1e-6 <= x <= sheet.canvas_px + 1e-6
                            assert -1e-6 <= y <= sheet.canvas_px + 1e-6

    def test_default_canvas_is_512(self, catalog, simple_model):
        sheet = layout_sheet(render_views(simple_model, ["front"]))
        assert sheet.canvas_px == DEFAULT_CANVAS_PX == 512


class TestNoise:
    def test_identity_spec(self, catalog, simple_model):
        views = render_views(simple_model, ["front", "top"])
        assert inject_noise(views, NoiseSpec(0, 0, 0), seed=3) == views

    def test_drop_all_keeps_annotations(self, catalog, simple_model):
        views = annotate(render_views(simple_model, ["front"]), simple_model, catalog)
        noisy = inject_noise(views, NoiseSpec(1.0, 0.0, 0.0), seed=3)
        assert noisy[0].segments == []
        assert noisy[0].annotations == views[0].annotations

    def test_seed_determinism(self, catalog, simple_model):
        views = render_views(simple_model, ["front", "top", "side"])
        spec = NoiseSpec(0.3, 1.5, 0.2)
        a = inject_noise(views, spec, seed=11)
        b = inject_noise(views, spec, seed=11)
        c = inject_noise(views, spec, seed=12)
        assert a == b
        assert a != c

    def test_invalid_probability_rejected(self):
        with pytest.raises(ValueError):
            NoiseSpec(p_drop=1.5)


class TestSvg:
    def test_well_formed_xml_with_viewbox(self, catalog, simple_model):
        views = annotate(
            render_views(simple_model, ["front", "top", "side"]), simple_model, catalog
        )
        svg = to_svg(layout_sheet(views))
        root = ET.fromstring(svg)
        assert root.attrib["viewBox"] == "0 0 512 512"
        ids = [g.attrib["id"] for g in root if g.tag.endswith("g")]
        assert ids == ["geometry", "annotation"]

    def test_layer_toggles(self, catalog, simple_model):
        views = annotate(render_views(simple_model, ["front"]), simple_model, catalog)
        sheet = layout_sheet(views)
        geo_only = to_svg(sheet, DrawingStyle(layers=frozenset({"geometry"})))
        assert '<g id="annotation"' not in geo_only
        ann_only = to_svg(sheet, DrawingStyle(layers=frozenset({"annotation"})))
        assert '<g id="geometry"' not in ann_only

    def test_layer_separation_equality(self, catalog):
        for seed in range(8):
            model = generate(SynthSpec(seed=seed))
            views = annotate(
                render_views(model, ["front", "top", "side"]), model, catalog
            )
            sheet = layout_sheet(views)
            full = to_svg(sheet)
            geo_only = to_svg(sheet, DrawingStyle(layers=frozenset({"geometry"})))
            assert geometry_group(full) == geometry_group(geo_only)

    def test_symbols_are_red(self, catalog, simple_model):
        views = annotate(render_views(simple_model, ["front"]), simple_model, catalog)
        svg = to_svg(layout_sheet(views))
        assert svg.count('stroke="#d40000"') == 2  # circle + triangle

    def test_byte_identical_across_runs(self, catalog, simple_model):
        def run():
            views = annotate(
                render_views(simple_model, ["front", "top", "side"]),
                simple_model,
                catalog,
            )
            noisy = inject_noise(views, NoiseSpec(0.1, 1.0, 0.05), seed=42)
            return to_svg(layout_sheet(noisy))

        assert run() == run()


def test_style_config_overrides():
    style = DrawingStyle.from_config(
        "layers: [geometry]\ngeometry_stroke_px: 2\nsymbol_color: \"#00ff00\"\n"
    )
    assert style.layers == frozenset({"geometry"})
    assert style.geometry_stroke_px == 2.0
    assert style.symbol_color == "#00ff00"
    with pytest.raises(ValueError):
        DrawingStyle.from_config("unknown_key: 1\n")
