"""Writes the system fixtures in tests/data."""

import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def const(c):
    return [] if c == 0 else [[[0, 0, 0], c]]


def normal_form(name, a, b, g, d, flip_y=False, box=1.0):
    s = -1 if flip_y else 1
    return {
        "name": name,
        "box": [-box, box, -box, box, -box, box],
        "X": {"cx": const(a), "cy": const(1), "cz": [[[0, 1, 0], d]]},
        "Y": {"cx": const(s * g), "cy": const(s * b), "cz": [[[1, 0, 0], s]]},
    }


def main():
    OUT.mkdir(exist_ok=True)
    files = {
        "elliptic_stable.json": normal_form("elliptic-stable", -2, -1, 1, -1),
        "elliptic_saddle.json": normal_form("elliptic-saddle", -1, -1, 0.5, -1),
        "elliptic_nh.json": normal_form("elliptic-nh", 1, 1, 2, -1),
        "parabolic_t.json": normal_form("parabolic-t", -1, 1.5, -1, -1),
        "flipped_y.json": normal_form("flipped-y", -1, -1, 0.5, -1, flip_y=True),
        "constant.json": {
            "name": "constant",
            "box": [-1, 1, -1, 1, -1, 1],
            "X": {"cx": const(1), "cy": [], "cz": const(-1)},
            "Y": {"cx": [], "cy": const(1), "cz": const(1)},
        },
        "nan.json": {
            "name": "nan",
            "X": {"cx": [[[0, 0, 0], "NaN"]], "cy": [], "cz": []},
            "Y": {"cx": [], "cy": [], "cz": const(1)},
        },
    }
    for fname, doc in files.items():
        (OUT / fname).write_text(json.dumps(doc) + "\n")
    (OUT / "malformed.json").write_text('{"name": "broken", "X": {\n')


if __name__ == "__main__":
    main()
