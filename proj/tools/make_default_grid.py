#!/usr/bin/env python3
"""Regenerates data/grids/default.json (the default verification suite)."""

import json
import os

ENTRIES = []


def add(ident, **params):
    ENTRIES.append({"id": ident, "params": {k: str(v) for k, v in params.items()}})


ZA1 = "zeta-alpha:alpha=1"
ZA2 = "zeta-alpha:alpha=2"
Q0 = "epstein:A=1,B=0,C=1"
Q1 = "epstein:A=1,B=1,C=1"
CHI4K1 = "char-k:q=4,parity=odd,k=1"
TAU = "cusp:name=tau,k=12"

# exponential summation formulas
add("SUMMATION_MAIN", family=ZA1, x="1", y="0.5")
add("SUMMATION_MAIN", family=ZA1, x="0.8+0.3i", y="0.7")
add("SUMMATION_MAIN", family=ZA2, x="1.1", y="0.4")
add("SUMMATION_MAIN", family=ZA2, x="0.9+0.4i", y="0.3+0.1i")
add("SUMMATION_MAIN", family="zeta-alpha:alpha=3.5", x="1.3", y="0.6")
add("SUMMATION_MAIN", family="zeta-alpha:alpha=3.5", x="1+0.5i", y="0.2")
add("SUMMATION_MAIN", family=Q0, x="1", y="0.5")
add("SUMMATION_MAIN", family=Q0, x="0.7+0.2i", y="0.8+0.2i")
add("SUMMATION_MAIN", family="epstein:A=2,B=1,C=3", x="0.9", y="0.4")
add("SUMMATION_MAIN", family="epstein:A=2,B=1,C=3", x="1.2+0.6i", y="0.5")
add("SUMMATION_MAIN", family=CHI4K1, x="1", y="0.6")
add("SUMMATION_MAIN", family=CHI4K1, x="0.8+0.3i", y="0.4")
add("SUMMATION_MAIN", family=TAU, x="0.9", y="0.5")
add("SUMMATION_MAIN", family=TAU, x="1+0.4i", y="0.7")

add("STAR_SUMMATION", family="zeta-alpha-star:alpha=1", x="1", y="0.4")
add("STAR_SUMMATION", family="zeta-alpha-star:alpha=1", x="0.9+0.3i", y="0.6")
add("STAR_SUMMATION", family="zeta-alpha-star:alpha=2", x="1.1", y="0.5")
add("STAR_SUMMATION", family="zeta-alpha-star:alpha=2", x="0.8+0.2i", y="0.3")
add("STAR_SUMMATION", family="zeta-alpha-star:alpha=3", x="1.2", y="0.7")
add("STAR_SUMMATION", family="zeta-alpha-star:alpha=3", x="1+0.5i", y="0.4")

add("EPSTEIN_EXP_SUMMATION", family="epstein-exp:A=1,B=0,C=1,p=1,q=3", x="1", y="0.5")
add("EPSTEIN_EXP_SUMMATION", family="epstein-exp:A=1,B=1,C=1,p=2,q=5", x="0.9", y="0.4")
add("EPSTEIN_EXP_SUMMATION", family="epstein-exp:A=2,B=0,C=1,p=1,q=2", x="1.1+0.3i", y="0.6")

add("CHAR_EXP_SUMMATION", family="char-k-exp:q=4,parity=odd,k=1,p=1", x="1", y="0.5")
add("CHAR_EXP_SUMMATION", family="char-k-exp:q=4,parity=odd,k=1,p=1", x="0.8+0.3i", y="0.4")
add("CHAR_EXP_SUMMATION", family="char-k-exp:q=3,parity=odd,k=1,p=1", x="1.2", y="0.6")
add("CHAR_EXP_SUMMATION", family="char-k-exp:q=5,parity=even,k=1,p=3", x="1", y="0.5")
add("CHAR_EXP_SUMMATION", family="char-k-exp:q=4,parity=odd,k=2,p=1", x="0.9", y="0.3")

add("CUSP_TWIST_TRANSFORM", family="cusp-twist:name=tau,k=12,p=1,q=5", x="1", z="0.4")
add("CUSP_TWIST_TRANSFORM", family="cusp-twist:name=tau,k=12,p=2,q=5", x="0.9+0.2i", z="0.3")
add("CUSP_TWIST_TRANSFORM", family="cusp-twist:name=tau,k=12,p=3,q=7", x="1.1", z="0.5")

# theta reflection
add("BOCHNER", family=ZA1, x="1")
add("BOCHNER", family=ZA1, x="0.5")
add("BOCHNER", family=ZA1, x="0.8+0.6i")
add("BOCHNER", family=ZA2, x="1.3")
add("BOCHNER", family="zeta-alpha:alpha=0.5", x="0.7")
add("BOCHNER", family="zeta-alpha-star:alpha=1", x="1.1")
add("BOCHNER", family="zeta-alpha-star:alpha=2", x="0.6+0.3i")
add("BOCHNER", family=Q0, x="0.9")
add("BOCHNER", family=Q1, x="1+0.7i")
add("BOCHNER", family="epstein-exp:A=1,B=0,C=1,p=1,q=3", x="0.8")
add("BOCHNER", family="epstein-exp:A=1,B=0,C=1,p=1,q=3", x="1.2+0.4i")
add("BOCHNER", family=CHI4K1, x="1")
add("BOCHNER", family="char-k:q=5,parity=even,k=1", x="0.75")
add("BOCHNER", family="char-k-exp:q=4,parity=odd,k=1,p=1", x="1.05")
add("BOCHNER", family=TAU, x="1")
add("BOCHNER", family=TAU, x="0.85+0.35i")
add("BOCHNER", family="cusp-twist:name=tau,k=12,p=1,q=5", x="0.95")

for fam, pts in [
    (ZA1, [("1", "0.5"), ("0.9+0.3i", "0.4"), ("0.6", "0.8+0.2i")]),
    (ZA2, [("1.2", "0.6"), ("0.8+0.4i", "0.5i"), ("0.7", "1")]),
    (Q0, [("1", "0.7"), ("1.1+0.5i", "0.3"), ("0.8", "0.6+0.3i")]),
    (CHI4K1, [("0.9", "0.5"), ("1+0.3i", "0.4"), ("1.15", "0.25i")]),
    (TAU, [("1", "0.5"), ("0.9+0.2i", "0.6"), ("1.1", "0.4")]),
    ("zeta-alpha-star:alpha=1", [("1", "0.5"), ("0.85", "0.35"), ("1.2+0.3i", "0.45")]),
]:
    for x, y in pts:
        add("MODULAR_THETA", family=fam, x=x, y=y)

# symmetric-form specializations
add("COSINE_B0", q=1, alpha="1", beta="0", x="1")
add("COSINE_B0", q=1, alpha="0.8+0.3i", beta="0.6", x="1.1")
add("COSINE_B0", q=5, alpha="1", beta="0.5", x="0.9")
add("COSINE_B0", q=5, alpha="1.3", beta="0.4+0.2i", x="1.2")

add("SINE_B1", q=4, alpha="1", beta="0.7", x="1")
add("SINE_B1", q=4, alpha="0.9", beta="1.2", x="0.8")
add("SINE_B1", q=3, alpha="1.1", beta="0.5", x="1.3")
add("SINE_B1", q=3, alpha="1+0.4i", beta="0.8", x="0.95")

# line integral
add("INTEGRAL_REP", family=ZA1, x="1", z="0.3")
add("INTEGRAL_REP", family=ZA2, x="0.8", z="0.5")
add("INTEGRAL_REP", family=Q0, x="1.5", z="0")
add("INTEGRAL_REP", family=CHI4K1, x="1.2", z="0.25")
add("INTEGRAL_REP", family=TAU, x="1", z="0.2")

# functional equation: ten strip points per family
SU = [-0.93, -0.71, -0.37, -0.22, 0.08, 0.19, 0.41, 0.63, 0.77, 0.91]
SV = [0.13, -0.87, 0.54, 0.91, -0.33, 0.67, -0.59, 0.25, -0.11, 0.83]
FUNC_EQ_FAMILIES = [
    ("zeta-alpha:alpha=0.5", 0.25),
    (ZA1, 0.5),
    (ZA2, 1.0),
    ("zeta-alpha:alpha=3", 1.5),
    ("zeta-alpha:alpha=4", 2.0),
    ("zeta-alpha-star:alpha=1", 0.5),
    (Q0, 1.0),
    (Q1, 1.0),
    ("epstein-exp:A=1,B=0,C=1,p=1,q=3", 1.0),
    (CHI4K1, 1.5),
    ("char-k:q=4,parity=odd,k=2", 3.0),
    ("char-k:q=5,parity=even,k=1", 0.5),
    (TAU, 12.0),
    ("cusp-twist:name=tau,k=12,p=1,q=5", 12.0),
]
for fam, r in FUNC_EQ_FAMILIES:
    for su, sv in zip(SU, SV):
        re = r * (0.5 + 0.45 * su)
        im = 10.0 * sv
        s = "%.6g%+.6gi" % (re, im)
        add("FUNC_EQ", family=fam, s=s)

# K-Bessel expansions
add("BESSEL_2F1_PLUS", family=ZA1, s="8", x="1", y="0.4")
add("BESSEL_2F1_PLUS", family=ZA2, s="9.5", x="1.1", y="0.5")
add("BESSEL_2F1_PLUS", family="zeta-alpha:alpha=3", s="11", x="0.9", y="0.3")
add("BESSEL_2F1_PLUS", family=Q0, s="10", x="1", y="0.6")
add("BESSEL_2F1_PLUS", family=CHI4K1, s="12", x="1.2", y="0.5")
add("BESSEL_2F1_PLUS", family=TAU, s="20", x="1", y="0.4")

add("BESSEL_2F1_MINUS", family=ZA1, s="8", x="1.2", y="0.5")
add("BESSEL_2F1_MINUS", family=Q0, s="10", x="1.5", y="0.8")
add("BESSEL_2F1_MINUS", family=TAU, s="20", x="1.4", y="0.7")

add("BERNDT_K", family=ZA1, s="6", x="1")
add("BERNDT_K", family="zeta-alpha:alpha=5/2", s="7", x="1.2")
add("BERNDT_K", family="zeta-alpha-star:alpha=2", s="8", x="0.9")
add("BERNDT_K", family=Q0, s="6.5", x="1")
add("BERNDT_K", family=CHI4K1, s="7.5", x="1.1")
add("BERNDT_K", family=TAU, s="16", x="1")

# quadratic-argument power sums
add("WATSON_COS", q=1, A="1", B="0.5", C="2", s="3")
add("WATSON_COS", q=1, A="2", B="1", C="1.5", s="2.25")
add("WATSON_COS", q=5, A="1", B="0.4", C="1", s="1.75")

add("WATSON_SIN", q=1, A="1", B="0.6", C="2", s="2.5")
add("WATSON_SIN", q=1, A="1.5", B="0.8", C="2.2", s="3.5")
add("WATSON_SIN", q=5, A="1", B="0.5", C="1.2", s="2")

add("KOBER", s="1", x="1", y="0")
add("KOBER", s="0.75", x="1.2", y="0.3")
add("KOBER", s="2.5", x="0.8", y="0.45")
add("KOBER", s="6", x="0.5", y="0.2")

add("RALPHA_WATSON", alpha="1", s="9", x="1", y="0.4")
add("RALPHA_WATSON", alpha="2", s="10", x="0.9", y="0.3")
add("RALPHA_WATSON", alpha="5/2", s="11", x="1.1", y="0.5")
add("RALPHA_WATSON", alpha="3", s="12", x="1", y="0.6")

add("EPSTEIN_WATSON", A=1, B=0, C=1, s="10", x="1", y="0.6")
add("EPSTEIN_WATSON", A=1, B=1, C=1, s="12", x="0.9", y="0.4")

add("CHAR_WATSON_EVEN", q=5, s="4", x="1", y="0.3")
add("CHAR_WATSON_EVEN", q=5, s="2.5", x="0.8", y="0.6")
add("CHAR_WATSON_EVEN", q=8, s="3", x="1.1", y="0.2")

add("CHAR_WATSON_ODD", q=4, s="3", x="1", y="0.25")
add("CHAR_WATSON_ODD", q=4, s="5", x="0.9", y="0.45")
add("CHAR_WATSON_ODD", q=3, s="2.5", x="1.2", y="0.35")

add("CUSP_WATSON", family=TAU, s="15", x="1", y="0.5")
add("CUSP_WATSON", family=TAU, s="20", x="0.9", y="0.3")


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    out = os.path.join(here, "..", "data", "grids", "default.json")
    os.makedirs(os.path.dirname(out), exist_ok=True)
    with open(out, "w") as fh:
        json.dump({"entries": ENTRIES}, fh, indent=1)
        fh.write("\n")
    ids = sorted({e["id"] for e in ENTRIES})
    print("wrote %d entries covering %d ids" % (len(ENTRIES), len(ids)))


if __name__ == "__main__":
    main()
