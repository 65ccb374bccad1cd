"""Smoke tests for the python bindings: each module surface gets one
end-to-end exercise against values pinned by the C++ suites."""

import math

import pytest

import _engeltk as engel


def test_growth_vector_builtin_models():
    for model in ("darboux", "lorentzian", "cartan_d0", "mapping_torus"):
        point = (0.3, -0.2, 0.4, 0.5)
        r1, r2, r3, gap = engel.growth_vector(model, point)
        assert (r1, r2, r3) == (2, 3, 4)
        assert gap >= 10.0


def test_frame_and_coordinate_change():
    v1, v2 = engel.eval_frame("lorentzian", (0, 0, 0, 2))
    assert v2 == pytest.approx((1.0, 2.0, 4.0, 0.0))
    assert engel.cartan_change_of_coordinates((1, 0, 0, 2)) == pytest.approx((1, 2, 4, 2))


def test_conformal_factors():
    assert engel.conformal_factor("half_scaling", [], (0, 0, 0)) == pytest.approx(0.5)
    assert engel.conformal_factor("rotation_lift", [0.7], (0.2, 0.1, -0.4)) == pytest.approx(1.0)


def test_loop_rotation_and_projection():
    loop = engel.standard_loop(rotation=2, samples=2048, seed=7)
    assert engel.rotation_number(loop) == 2
    assert engel.horizontality_residual(loop) < 1e-6
    leg = engel.geiges_project(loop)
    assert abs(engel.front_signed_area(leg)) < 1e-10
    back = engel.geiges_lift(leg, y0=loop.points[0][1])
    assert max(
        abs(a - b) for p, q in zip(back.points, loop.points) for a, b in zip(p, q)
    ) < 1e-9


def test_front_calculus_and_certificate():
    front = engel.generate_admissible_front(5, seed=11)
    area = engel.signed_area(front)
    assert area > 0
    cert = engel.positive_area_certificate(front)
    assert cert["total_area"] == pytest.approx(area, abs=1e-9)
    assert len(cert["reduction_trace"]) == 1
    assert cert["reduction_trace"][0]["cusps_after"] == 3

    svg = engel.front_svg(front)
    assert svg.startswith("<?xml") and "</svg>" in svg


def test_r1_loop_area_exactness():
    n = 2048
    front = engel.Front()
    front.params = [i / (n - 1) for i in range(n)]
    front.x = list(front.params)
    front.z = [0.0] * n
    front.slope_bound = 1.0
    out = engel.insert_r1_loop(front, 0.5, 0.004, 0.1)
    assert len(out.cusp_marks) == 2


def test_rigidity_and_flexibility():
    starts = engel.lemma2_search(0.0, 0.0, starts=5, seed=3)
    assert all(s["converged"] and s["max_abs_t"] < 1e-7 for s in starts)

    ex4 = engel.build_example4(0.01, samples=8192)
    assert ex4["closure_defect"] < 1e-8
    curve = ex4["curve"]
    assert curve.points[-1][1] == pytest.approx(0.02)

    ex5 = engel.build_example5(math.pi / 2, 1.0, samples=8192)
    assert ex5["closed_form"] == pytest.approx(0.5)
    assert abs(ex5["closed_form"] - ex5["polyline_integral"]) < 1e-12

    p7 = engel.prop7_deform(2.0, 0.0, 0.0, 2.0, samples=8192)
    assert p7["closure_defect"] < 1e-8
    assert p7["y1"] == pytest.approx(0.1 / (1 - 4.0))

    with pytest.raises(engel.EngelError):
        engel.prop7_deform(1.0, 0.0, 0.0, 1.0)  # strict: conformal factor 1


def test_homotopy_engine():
    c0, c1 = engel.loop_pair(rotation=1, samples=2048, seed=5)
    fam = engel.connect_loops(c0, c1, slices=8)
    assert fam["pass"]
    assert fam["worst_residual"] < 1e-6
    assert fam["worst_closure"] < 1e-9
    assert fam["rotation_constant"]

    with pytest.raises(engel.EngelError):
        a = engel.standard_loop(rotation=0, samples=1024, seed=2)
        b = engel.standard_loop(rotation=1, samples=1024, seed=2)
        engel.connect_loops(a, b, slices=4)


def test_json_roundtrip():
    loop = engel.standard_loop(rotation=1, samples=512, seed=9)
    text = loop.to_json()
    back = engel.SampledCurve.from_json(text)
    assert back.to_json() == text
