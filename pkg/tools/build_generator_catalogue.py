"""Regenerate src/balmod/data/generators.json from the transcribed tables.

Displays are entered as printed: (q-prefix, sign, numerator residues,
denominator residues) over (q^r; q^p), or explicit (a, n, e) factors.
Each display is matched to the theta-vector row with the same product.
"""
import json
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from balmod.qseries import ProductSpec  # noqa: E402
from balmod.generators import theta_product_spec, dump_catalogue  # noqa: E402

INDICES = {
    5: (1, 2), 7: (1, 2, 3), 11: (1, 2, 3, 5, 7), 13: (1, 2, 3, 4, 5, 7),
    17: (1, 2, 3, 5, 7, 8, 11, 13), 19: (1, 2, 3, 4, 5, 7, 9, 11, 13),
}

THETA = {
    5: {1: [2, -3], 2: [-3, 2]},
    7: {1: [1, 0, -2], 2: [-2, 1, 0], 3: [0, -2, 1]},
    11: {1: [0, 1, 0, -1, -1], 2: [-1, 0, 0, 1, -1], 3: [1, -1, -1, 0, 0],
         5: [0, -1, 1, -1, 0], 7: [-1, 0, -1, 0, 1]},
    13: {1: [1, 0, 0, -1, 0, -1], 2: [-1, -1, 0, 1, 0, 0], 3: [0, 0, -1, 0, 1, -1],
         4: [0, 1, -1, -1, 0, 0], 5: [0, -1, 1, 0, -1, 0], 7: [-1, 0, 0, 0, -1, 1]},
    17: {1: [1, 0, 0, 0, 0, -1, -1, 0], 2: [0, -1, 0, 0, 1, 0, 0, -1],
         3: [0, 0, 0, -1, 0, 1, 0, -1], 5: [0, 0, 0, 1, -1, -1, 0, 0],
         7: [0, -1, 1, 0, 0, 0, -1, 0], 8: [0, 0, -1, 0, -1, 0, 0, 1],
         11: [-1, 1, -1, 0, 0, 0, 0, 0], 13: [-1, 0, 0, -1, 0, 0, 1, 0]},
    19: {1: [1, 1, 0, 0, -1, -1, -1, 0, 0], 2: [0, -1, -1, 0, 1, 1, 0, -1, 0],
         3: [1, -1, 0, 0, -1, 0, 1, 0, -1], 4: [0, 0, 1, -1, 0, -1, 0, 1, -1],
         5: [0, 0, -1, 1, 0, 0, -1, 1, -1], 7: [0, 0, 1, -1, -1, 1, 0, -1, 0],
         9: [-1, -1, 0, -1, 0, 0, 1, 0, 1], 11: [-1, 0, 0, 1, 0, 0, -1, -1, 1],
         13: [-1, 1, -1, 0, 1, -1, 0, 0, 0]},
}
THETA_LABEL = {(13, 4): "T11"}  # printed subscript

# (anchor, label, sign, q_prefix, numerator residues, denominator residues)
DISPLAYS = {
    5: [
        ("ab", "B^5", 1, 0, [(1, 1, 2), (1, 5, -5), (4, 5, -5)]),
        ("ab", "A^5", 1, 1, [(1, 1, 2), (2, 5, -5), (3, 5, -5)]),
    ],
    7: [
        ("eq:68", "x", 1, 1, [2, 5, 7, 7], [3, 4, 3, 4]),
        ("eq:68", "y", -1, 1, [1, 6, 7, 7], [2, 5, 2, 5]),
        ("eq:68", "z", 1, 0, [3, 4, 7, 7], [1, 6, 1, 6]),
    ],
    11: [
        ("eq:84 (level 11)", "#1", 1, 0, [4, 7, 11, 11], [1, 10, 2, 9]),
        ("eq:84 (level 11)", "#2", 1, 1, [5, 6, 11, 11], [3, 8, 4, 7]),
        ("eq:84 (level 11)", "#3", 1, 2, [1, 10, 11, 11], [3, 8, 5, 6]),
        ("eq:84 (level 11)", "#4", 1, 1, [3, 8, 11, 11], [2, 9, 4, 7]),
        ("eq:84 (level 11)", "#5", 1, 1, [2, 9, 11, 11], [5, 6, 1, 10]),
    ],
    13: [
        ("eq:84 (level 13)", "#1", 1, 0, [6, 7, 13, 13], [1, 12, 3, 10]),
        ("eq:84 (level 13)", "#2", 1, 1, [5, 8, 13, 13], [3, 10, 4, 9]),
        ("eq:84 (level 13)", "#3", 1, 1, [1, 2, 11, 13], [1, 12, 4, 9]),
        ("eq:84 (level 13)", "#4", 1, 1, [4, 9, 13, 13], [2, 11, 5, 8]),
        ("eq:84 (level 13)", "#5", 1, 2, [3, 10, 13, 13], [5, 8, 6, 7]),
        ("eq:84 (level 13)", "#6", 1, 2, [1, 12, 13, 13], [2, 11, 6, 7]),
    ],
    17: [
        ("eq:85 (level 17)", "#1", 1, 0, [8, 9, 17, 17], [2, 15, 3, 14]),
        ("eq:85 (level 17)", "#2", 1, 1, [5, 12, 17, 17], [3, 14, 4, 13]),
        ("eq:85 (level 17)", "#3", 1, 3, [1, 16, 17, 17], [4, 13, 6, 11]),
        ("eq:85 (level 17)", "#4", 1, 2, [7, 10, 17, 17], [6, 11, 8, 9]),
        ("eq:85 (level 17)", "#5", 1, 3, [2, 15, 17, 17], [5, 12, 8, 9]),
        ("eq:85 (level 17)", "#6", 1, 1, [3, 14, 17, 17], [1, 16, 5, 12]),
        ("eq:85 (level 17)", "#7", 1, 1, [4, 13, 17, 17], [1, 16, 7, 10]),
        ("eq:85 (level 17)", "#8", 1, 1, [6, 11, 17, 17], [2, 15, 7, 10]),
    ],
    19: [
        ("eq:85/iwb (level 19)", "#1", 1, 0, [8, 11, 9, 10, 19, 19], [3, 16, 4, 15, 5, 14]),
        ("eq:85/iwb (level 19)", "#2", 1, 1, [2, 17, 7, 12, 7, 12], [1, 18, 4, 15, 6, 13]),
        ("eq:85/iwb (level 19)", "#3", 1, 1, [3, 16, 9, 10, 19, 19], [1, 18, 5, 14, 8, 11]),
        ("eq:85/iwb (level 19)", "#4", 1, 1, [4, 15, 7, 12, 19, 19], [2, 17, 5, 14, 6, 13]),
        ("eq:85/iwb (level 19)", "#5", 1, 5, [1, 18, 3, 16, 19, 19], [6, 13, 8, 11, 9, 10]),
        ("eq:85/iwb (level 19)", "#6", 1, 2, [4, 15, 5, 14, 19, 19], [2, 17, 7, 12, 8, 11]),
        ("eq:85/iwb (level 19)", "#7", 1, 2, [1, 18, 6, 13, 19, 19], [2, 17, 3, 16, 9, 10]),
        ("eq:85/iwb (level 19)", "#8", 1, 2, [5, 14, 8, 11, 19, 19], [4, 15, 7, 12, 9, 10]),
        ("eq:85/iwb (level 19)", "#9", 1, 1, [2, 17, 6, 13, 19, 19], [1, 18, 3, 16, 7, 12]),
    ],
}


def display_factors(p, entry):
    if len(entry) == 5:
        anchor, label, sign, prefix, factors = entry
        return anchor, label, sign, prefix, [list(f) for f in factors]
    anchor, label, sign, prefix, num, den = entry
    facs = [[r, p, 1] for r in num] + [[r, p, -1] for r in den]
    return anchor, label, sign, prefix, facs


def canon(spec, p):
    return (spec.q_prefix, tuple(sorted(spec.exponent_map(p).items())))


def theta_json(spec):
    return {"q_prefix": str(spec.q_prefix), "factors": [list(f) for f in spec.factors]}


def main():
    records = []
    unmatched = []
    for p, rows in THETA.items():
        theta_specs = {a: theta_product_spec(p, b) for a, b in rows.items()}
        by_canon = {canon(s, p): a for a, s in theta_specs.items()}
        assigned = {}
        for pos, entry in enumerate(DISPLAYS[p], start=1):
            anchor, label, sign, prefix, facs = display_factors(p, entry)
            spec = ProductSpec(tuple(tuple(f) for f in facs), Fraction(prefix))
            a = by_canon.get(canon(spec, p))
            disp = {"anchor": anchor, "label": label, "position": pos, "sign": sign,
                    "q_prefix": str(Fraction(prefix)), "factors": facs}
            if a is None:
                unmatched.append((p, disp))
            else:
                assigned[a] = (disp, None)
        # a display that matches no theta row is attached to the one row left over
        for p2, disp in [u for u in unmatched if u[0] == p]:
            left = [a for a in rows if a not in assigned]
            assert len(left) == 1, (p, left)
            a = left[0]
            note = (f"printed product {disp['label']} of {disp['anchor']} does not equal "
                    f"the theta quotient {THETA_LABEL.get((p, a), 'T%d' % p)}{rows[a]}; "
                    f"regenerated from the theta vector")
            assigned[a] = (disp, note)
        for a in INDICES[p]:
            disp, note = assigned[a]
            rec = {"p": p, "a": a, "theta": rows[a]}
            if (p, a) in THETA_LABEL:
                rec["theta_label"] = THETA_LABEL[(p, a)]
                rec["theta_note"] = (f"printed as {THETA_LABEL[(p, a)]}; vector length and "
                                     f"the level-{p} row identify it as T{p}")
            rec["display"] = disp
            if note:
                rec["anomaly"] = note
                rec["corrected"] = theta_json(theta_specs[a])
            records.append(rec)
    out = Path(__file__).resolve().parents[1] / "src/balmod/data/generators.json"
    out.write_text(dump_catalogue(records))
    for r in records:
        if "anomaly" in r:
            print("ANOMALY", r["p"], r["a"], r["anomaly"])
    print("wrote", out, len(records), "records")


if __name__ == "__main__":
    main()
