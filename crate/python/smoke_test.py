"""Smoke test for the chartsay Python bindings.

Run after building the extension, e.g. `maturin develop -m crates/python/Cargo.toml`
or by putting a copy of the built library named `chartsay_py.so` on PYTHONPATH.
"""

import json
import pathlib

import chartsay_py as cs

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "fixtures"


def main() -> None:
    assert cs.phrase_proportion(0.5) == "approximately half"
    assert cs.phrase_proportion(0.07) == "7.00 percent"
    assert cs.join_list(["a", "b", "c"]) == "a, b and c"
    assert cs.format_value(2.675, 2) == "2.68"
    assert cs.trend([3.0, 1.0, 4.0]) == "upwards"
    assert cs.beaufort_phrase(0.2) == "calm"
    assert cs.rain_phrase(3.5) == "light rain of 3.50 millimeters"
    assert cs.day_label(1603238400000) == "Wed 21 Oct"

    pie = (FIXTURES / "market_share_pie.json").read_text()
    text = cs.describe(pie, max_read_entries=3)
    assert text.startswith("The pie chart describes Market share of automobile companies."), text
    assert text.endswith("fill up the rest."), text

    try:
        cs.phrase_proportion(1.5)
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range proportion accepted")

    dump = (FIXTURES / "demo_screen.xml").read_text()
    screen = cs.Hierarchy(dump)
    assert len(screen) > 0
    assert cs.Hierarchy(screen.to_xml()).to_xml() == screen.to_xml()
    report = json.loads(screen.audit("demo_screen.xml"))
    assert report["screens"][0]["candidates"][0]["status"] == "Inaccessible"

    before = screen.simulate()
    after = screen.simulate((FIXTURES / "registry_pie.json").read_text())
    assert len(after) == len(before) + 1
    assert after[2][1] == "descriptor"

    corpus = FIXTURES / "corpus"
    dumps = {p.name: p.read_text() for p in sorted(corpus.glob("*.xml"))}
    evaluation = json.loads(cs.evaluate(dumps, (FIXTURES / "corpus_labels.csv").read_text()))
    m = evaluation["metrics"]
    assert (m["tp"], m["fp"], m["fn"], m["tn"]) == (10, 2, 4, 14), m

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
