import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atlas.carto import (
    DensityField,
    Rect,
    Viewport,
    contours,
    default_levels,
    density_grid,
    label_bbox,
    place_labels,
    visible_detail,
)
from atlas.corpus import MapPoint, TopicLabel
from atlas.errors import NoPoints


def points_from(coords):
    return [MapPoint(x, y) for x, y in coords]


# --- density grid --------------------------------------------------------------

def test_single_point_peaks_at_its_cell():
    field = density_grid(points_from([(2.0, -1.0)]), resolution=(32, 32), bandwidth=0.5)
    ix, iy = np.unravel_index(np.argmax(field.grid), field.grid.shape)
    cx, cy = field.cell_center(ix, iy)
    # the maximum cell contains (or is adjacent to) the point
    assert abs(cx - 2.0) < (field.bounds[2] - field.bounds[0]) / 32
    assert abs(cy + 1.0) < (field.bounds[3] - field.bounds[1]) / 32


def test_density_integrates_to_one():
    rng = np.random.RandomState(0)
    pts = points_from(rng.normal(0, 2, size=(200, 2)).tolist())
    field = density_grid(pts, resolution=(256, 256), bandwidth=0.8)
    xmin, ymin, xmax, ymax = field.bounds
    cell_area = (xmax - xmin) / 256 * (ymax - ymin) / 256
    total = float(field.grid.sum() * cell_area)
    assert abs(total - 1.0) < 0.02


def test_density_mirror_symmetry():
    pts = points_from([(-2.0, 0.0), (2.0, 0.0), (-1.0, 1.0), (1.0, 1.0)])
    field = density_grid(pts, resolution=(64, 64), bandwidth=1.0)
    assert np.allclose(field.grid, field.grid[::-1, :], atol=1e-12)


def test_density_translation_equivariance():
    coords = [(0.0, 0.0), (1.0, 2.0), (-1.5, 0.5)]
    f0 = density_grid(points_from(coords), resolution=(32, 32), bandwidth=0.7)
    shifted = [(x + 3.0, y - 2.0) for x, y in coords]
    f1 = density_grid(points_from(shifted), resolution=(32, 32), bandwidth=0.7)
    assert np.allclose(f0.grid, f1.grid, atol=1e-12)
    assert f1.bounds[0] == pytest.approx(f0.bounds[0] + 3.0)
    assert f1.bounds[1] == pytest.approx(f0.bounds[1] - 2.0)


def test_density_requires_points():
    with pytest.raises(NoPoints):
        density_grid([])


# --- contours --------------------------------------------------------------------

def radial_field(size=128, extent=3.0):
    xs = np.linspace(-extent, extent, size)
    grid = np.exp(-(xs[:, None] ** 2 + xs[None, :] ** 2))
    return DensityField(grid=grid, bounds=(-extent, -extent, extent, extent),
                        bandwidth=1.0)


def test_constant_field_yields_no_contours():
    field = DensityField(grid=np.zeros((16, 16)), bounds=(0, 0, 1, 1), bandwidth=1.0)
    result = contours(field, [0.5])
    assert result.polylines == ((),)


def test_level_above_max_yields_no_contours():
    field = radial_field(32)
    result = contours(field, [2.0])
    assert result.polylines[0] == ()


def test_radial_field_gives_unit_circle():
    field = radial_field(128)
    result = contours(field, [math.exp(-1.0)])
    lines = result.polylines[0]
    assert len(lines) == 1
    line = lines[0]
    assert line[0] == line[-1]  # closed loop
    cell_diag = math.hypot(6.0 / 128, 6.0 / 128)
    for x, y in line:
        assert abs(math.hypot(x, y) - 1.0) < cell_diag


def test_contour_vertices_lie_within_bounds():
    field = radial_field(64)
    result = contours(field, default_levels(field))
    xmin, ymin, xmax, ymax = field.bounds
    for lines in result.polylines:
        for line in lines:
            assert len(line) >= 2
            for x, y in line:
                assert xmin <= x <= xmax and ymin <= y <= ymax


def test_levels_must_ascend():
    with pytest.raises(ValueError):
        contours(radial_field(16), [0.5, 0.2])


# --- label placement ---------------------------------------------------------------

def label(text, count, x=0.0, y=0.0):
    return TopicLabel(text=text, count=count, project_ids=frozenset({f"p{text}"}),
                      position=MapPoint(x, y))


VIEW = Viewport(-10.0, -10.0, 10.0, 10.0, zoom=1.0)


def test_popular_label_wins_at_same_position():
    placed = place_labels([label("a", 10), label("b", 5)], VIEW)
    assert [b.label.text for b in placed] == ["a"]


def test_distant_labels_both_visible():
    placed = place_labels([label("a", 10, -8, -8), label("b", 5, 8, 8)], VIEW)
    assert {b.label.text for b in placed} == {"a", "b"}


def test_tie_breaks_on_text_ascending():
    placed = place_labels([label("beta", 5), label("alpha", 5)], VIEW)
    assert [b.label.text for b in placed] == ["alpha"]


def test_labels_outside_viewport_hidden():
    placed = place_labels([label("far", 10, 500.0, 0.0)], VIEW)
    assert placed == []


@settings(max_examples=200, deadline=None)
@given(st.lists(
    st.tuples(
        st.text(alphabet="abcdefghij", min_size=1, max_size=12),
        st.integers(min_value=1, max_value=100),
        st.floats(min_value=-9.9, max_value=9.9),
        st.floats(min_value=-9.9, max_value=9.9),
    ),
    min_size=0, max_size=25,
))
def test_no_accepted_boxes_overlap(raw):
    labels = [label(f"{t}{i}", c, x, y) for i, (t, c, x, y) in enumerate(raw)]
    placed = place_labels(labels, VIEW)
    for i, a in enumerate(placed):
        for b in placed[i + 1:]:
            assert not a.bbox.intersects(b.bbox)


def test_placement_is_prefix_stable():
    base = [label("a", 50, 0, 0), label("b", 40, 0.1, 0.1), label("c", 30, 5, 5)]
    extra = base + [label("z", 1, -5, -5)]
    first = [b.label.text for b in place_labels(base, VIEW)]
    second = [b.label.text for b in place_labels(extra, VIEW)]
    assert second[:len(first)] == first


def test_bbox_dimensions_follow_text_length():
    box = label_bbox(label("abcd", 3), VIEW, font_px=10.0)
    assert (box.x1 - box.x0) == pytest.approx(0.62 * 10.0 * 4)
    assert (box.y1 - box.y0) == pytest.approx(1.3 * 10.0)


def test_rect_touching_edges_do_not_intersect():
    assert not Rect(0, 0, 1, 1).intersects(Rect(1, 0, 2, 1))
    assert Rect(0, 0, 1, 1).intersects(Rect(0.5, 0.5, 2, 2))


# --- zoom tiers -----------------------------------------------------------------

@pytest.mark.parametrize("zoom,tier", [
    (1.0, "overview"),
    (2.99, "overview"),
    (3.0, "subtopics"),
    (4.0, "subtopics"),
    (8.0, "projects"),
    (10.0, "projects"),
])
def test_visible_detail_tiers(zoom, tier):
    assert visible_detail(zoom) == tier


def test_visible_detail_is_monotone():
    order = {"overview": 0, "subtopics": 1, "projects": 2}
    zooms = [0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 40.0]
    tiers = [order[visible_detail(z)] for z in zooms]
    assert tiers == sorted(tiers)
