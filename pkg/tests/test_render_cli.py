import json
from pathlib import Path

import pytest

from krss import cli
from krss import krtower as kt
from krss.render import (
    MARGIN, UNIT, ChartStyle, RenderError, coefficient_table, page_chart, render, save_figure,
    table_chart,
)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def pt_chart(indexing="serre", r=3):
    return page_chart(kt.cached_run("pt").page(r), ChartStyle(indexing))


@pytest.mark.parametrize("fmt", ["text", "json", "svg"])
def test_render_is_deterministic(fmt):
    assert render(pt_chart(), fmt) == render(pt_chart(), fmt)


def test_json_round_trip():
    doc = json.loads(render(pt_chart(), "json"))
    assert doc["r"] == 3 and doc["indexing"] == "serre"
    assert {"p": 0, "q": -4, "group": "Z", "gens": ["x"]} in doc["cells"]


def test_svg_scale():
    rows = coefficient_table("pt", 0, 2, 0, 2)
    svg = render(table_chart(rows, 0, 2, 0, 2), "svg")
    assert f'width="{2 * MARGIN + 2 * UNIT}"' in svg
    # (p,q) = (0,0) is Z at q = 0 across, p = 0 at the bottom
    assert f'<circle cx="{MARGIN}" cy="{MARGIN + 2 * UNIT}" r="3"' in svg
    # y at (1,1): Z/2 one unit right and up
    assert f'<circle cx="{MARGIN + UNIT}" cy="{MARGIN + UNIT}" r="1.5"' in svg


def test_adams_arrows_have_slope_minus_one_three():
    chart = pt_chart("adams")
    assert chart.arrows
    for a in chart.arrows:
        assert (a.x1 - a.x0, a.y1 - a.y0) == (-1, 3)


def test_serre_arrows():
    for a in pt_chart().arrows:
        assert (a.x1 - a.x0, a.y1 - a.y0) == (3, -2)


def test_empty_window_gives_bare_grid():
    chart = table_chart([], 0, 0, 0, 0)
    text = render(chart, "text")
    assert "0 | ." in text
    assert "<circle" not in render(chart, "svg")


def test_text_coefficient_table():
    rows = coefficient_table("pt", -2, 2, -2, 2)
    assert {"p": 0, "q": 2, "group": "Z", "generator": "x"} in rows
    text = render(table_chart(rows, -2, 2, -2, 2, "t"), "text")
    lines = text.splitlines()
    assert lines[0] == "t"
    assert lines[-1].startswith("p up, q across")


def test_unsupported_formats():
    with pytest.raises(RenderError):
        render(pt_chart(), "png")
    with pytest.raises(RenderError):
        ChartStyle("cartesian")
    with pytest.raises(RenderError):
        save_figure(pt_chart(), "chart.gif")


@pytest.mark.parametrize("suffix,magic", [("png", b"\x89PNG"), ("pdf", b"%PDF")])
def test_save_figure(tmp_path, suffix, magic):
    path = tmp_path / f"chart.{suffix}"
    save_figure(pt_chart(), str(path))
    assert path.read_bytes().startswith(magic)
    again = tmp_path / f"again.{suffix}"
    save_figure(pt_chart(), str(again))
    assert path.read_bytes() == again.read_bytes()


# ---------------------------------------------------------------------------
# command line


def test_cli_coeff_json(capsys):
    code, out, _ = run(["coeff", "--format", "json", "--pmin", "0", "--pmax", "1", "--qmin", "0", "--qmax", "1"],
                       capsys)
    assert code == 0
    assert json.loads(out) == [
        {"p": 0, "q": 0, "group": "Z", "generator": "1"},
        {"p": 1, "q": 1, "group": "Z/2", "generator": "y"},
    ]


def test_cli_coeff_etale(capsys):
    code, out, _ = run(["coeff", "--theory", "hzet", "--format", "json", "--pmin", "0", "--pmax", "0",
                        "--qmin", "-2", "--qmax", "-2"], capsys)
    assert code == 0 and json.loads(out)[0]["group"] == "Z"


def test_cli_empty_window_is_usage_error(capsys):
    code, _, err = run(["coeff", "--pmin", "2", "--pmax", "1"], capsys)
    assert code == 2 and "empty window" in err


@pytest.mark.parametrize("argv,text", [
    (["bredon", "--p", "0", "--q", "-3"], "Z/2"),
    (["bredon", "--space", "S(2,1)", "--p", "2", "--q", "1"], "Z"),
    (["bredon", "--p", "0", "--q", "2", "--mackey", "Zop"], "Z"),
])
def test_cli_bredon(capsys, argv, text):
    code, out, _ = run(argv, capsys)
    assert code == 0 and out.strip() == text


def test_cli_bad_space(capsys):
    assert run(["bredon", "--space", "S(2", "--p", "0", "--q", "0"], capsys)[0] == 2
    assert run(["ss", "--space", "RP2"], capsys)[0] == 2


def test_cli_unknown_subcommand(capsys):
    assert run(["frobnicate"], capsys)[0] == 2
    assert run([], capsys)[0] == 2


def test_cli_ss_text_and_figure(capsys, tmp_path):
    fig = tmp_path / "e3.png"
    code, out, _ = run(["ss", "--page", "3", "--indexing", "adams", "--figure", str(fig)], capsys)
    assert code == 0
    assert "d3: (4,0) -> (3,3)" in out
    assert "not certified" not in out
    assert fig.read_bytes().startswith(b"\x89PNG")


def test_cli_ss_json(capsys):
    code, out, _ = run(["ss", "--format", "json", "--nmax", "4"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["r"] == 4 and doc["differentials"] == []


def test_cli_abutment(capsys):
    code, out, _ = run(["abutment", "--degree", "-4", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["pieces"] == [{"weight": 2, "p": 0, "group": "Z"}]
    assert doc["reference"] == "Z" and doc["assembles"] and doc["certified"]
    code, out, _ = run(["abutment", "--degree", "-1"], capsys)
    assert "assembles" in out and "Z/2" in out


def test_cli_verify_and_figures(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, _, err = run(["verify", "coeffs", "--format", "json", "--out", str(out_file),
                        "--figures", str(tmp_path / "figs")], capsys)
    assert code == 0
    doc = json.loads(out_file.read_text())
    assert [r["number"] for r in doc["criteria"]] == [1, 2, 8]
    assert doc["passed"] is True
    assert sorted(p.name for p in (tmp_path / "figs").iterdir()) == [
        "coefficients_pt.png", "kr_et_pt_e3.png", "kr_et_pt_e4.png", "kr_pt_e3.png", "kr_pt_e4.png"]
    assert err.count("figure ") == 5


def test_cli_verify_unknown_suite(capsys):
    assert run(["verify", "nope"], capsys)[0] == 2


GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("name,argv", [
    ("ss_pt_e3_serre.txt", ["ss", "--page", "3", "--nmax", "2"]),
    ("ss_pt_e3_adams.txt", ["ss", "--page", "3", "--nmax", "2", "--indexing", "adams"]),
    ("coeff_pt.txt", ["coeff", "--pmin", "-4", "--pmax", "4", "--qmin", "-4", "--qmax", "4"]),
    ("coeff_pt.svg", ["coeff", "--pmin", "-4", "--pmax", "4", "--qmin", "-4", "--qmax", "4", "--format", "svg"]),
])
def test_golden(capsys, name, argv):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out == (GOLDEN / name).read_text(encoding="utf-8")
