"""Worked-example fixtures, transcribed verbatim from the source displays.

Each fixture pins the flat-coordinate data (the p-block, the linear z-block,
the h-block) and the full potential, term for term.  Monomials are maps from
t-chart variable names to integer exponents, with ``E`` standing for the
exponential of the last coordinate; coefficients are exact rational strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

Term = Tuple[Dict[str, int], str]


@dataclass(frozen=True)
class Fixture:
    identifier: str
    family: str
    rank: int
    vertex: int
    # p_j as terms over the y-chart, keyed by j (1..k)
    p_terms: Dict[int, List[Term]]
    # forward z^j(y) for the linear block, keyed by j (k+1..l)
    z_terms: Dict[int, List[Term]]
    # h_j over the w-chart, keyed by j (k+1..l-1)
    h_terms: Dict[int, List[Term]]
    # graded potential terms over the t-chart (the (t^k)^2 t^{l+1}/2 head is implied)
    potential_terms: List[Term]
    euler_dtilde: List[str]
    euler_last: str
    # optional spot checks on the intersection form in the t-chart
    g_spot: Dict[Tuple[int, int], List[Term]] = field(default_factory=dict)


C3K1 = Fixture(
    identifier="c3k1",
    family="C", rank=3, vertex=1,
    p_terms={1: [({"E": 1}, "-2")]},
    z_terms={
        2: [({"y2": 1}, "1"), ({"y3": 1}, "-1/6")],
        3: [({"y3": 1}, "1")],
    },
    h_terms={2: []},
    potential_terms=[
        ({"t1": 1, "t2": 1, "t3": 1}, "1/2"),
        ({"t2": 2, "t3": 2}, "-1/48"),
        ({"t2": 1, "t3": 5}, "1/1440"),
        ({"t3": 8}, "-1/36288"),
        ({"t2": 1, "t3": 1, "E": 1}, "1"),
        ({"t3": 4, "E": 1}, "1/6"),
        ({"E": 2}, "1/2"),
        ({"t2": 3, "t3": -1}, "1/48"),
    ],
    euler_dtilde=["1", "3/4", "1/4"],
    euler_last="1",
    g_spot={
        (1, 1): [({"t2": 1, "t3": 1, "E": 1}, "2"), ({"t3": 4, "E": 1}, "1/3"),
                 ({"E": 2}, "4")],
        (1, 2): [({"t3": 3, "E": 1}, "7/3"), ({"t2": 1, "E": 1}, "7/2")],
        (1, 3): [({"t3": 1, "E": 1}, "5/2")],
        (1, 4): [({"t1": 1}, "1")],
        (2, 2): [({"t3": 2, "E": 1}, "12"), ({"t2": 2}, "-1/4"),
                 ({"t2": 1, "t3": 3}, "1/12"), ({"t3": 6}, "-1/108"),
                 ({"t2": 3, "t3": -3}, "1/4")],
        (2, 3): [({"t1": 1}, "2"), ({"E": 1}, "4"), ({"t2": 1, "t3": 1}, "-1/3"),
                 ({"t3": 4}, "1/72"), ({"t2": 2, "t3": -2}, "-1/4")],
        (2, 4): [({"t2": 1}, "3/4")],
        (3, 3): [({"t2": 1, "t3": -1}, "1/4"), ({"t3": 2}, "-1/12")],
        (3, 4): [({"t3": 1}, "1/4")],
        (4, 4): [({}, "1")],
    },
)


C4K1 = Fixture(
    identifier="c4k1",
    family="C", rank=4, vertex=1,
    p_terms={1: [({"E": 1}, "-2")]},
    z_terms={
        2: [({"y2": 1}, "1"), ({"y3": 1}, "-1/6"), ({"y4": 1}, "1/30")],
        3: [({"y3": 1}, "1"), ({"y4": 1}, "-1/4")],
        4: [({"y4": 1}, "1")],
    },
    h_terms={2: [({"w3": 2}, "-1/12")], 3: []},
    potential_terms=[
        ({"t1": 1, "t2": 1, "t4": 1}, "1/2"),
        ({"t3": 4}, "-1/6912"),
        ({"t3": 3, "t4": 3}, "1/17280"),
        ({"t2": 1, "t4": 1, "t3": 2}, "-1/288"),
        ({"t4": 6, "t3": 2}, "-1/34560"),
        ({"t1": 1, "t3": 2}, "1/24"),
        ({"t3": 1, "t4": 4, "t2": 1}, "1/1440"),
        ({"t2": 2, "t4": 2}, "-1/48"),
        ({"t4": 7, "t2": 1}, "-1/60480"),
        ({"t4": 9, "t3": 1}, "1/345600"),
        ({"t4": 12}, "-1/7603200"),
        ({"E": 1, "t3": 2}, "1/12"),
        ({"E": 1, "t3": 1, "t4": 3}, "1/6"),
        ({"E": 1, "t4": 6}, "1/120"),
        ({"t2": 1, "t4": 1, "E": 1}, "1"),
        ({"E": 2}, "1/2"),
        ({"t3": 1, "t2": 2, "t4": -1}, "1/24"),
        ({"t2": 1, "t3": 3, "t4": -2}, "-1/216"),
        ({"t3": 5, "t4": -3}, "1/4320"),
    ],
    euler_dtilde=["1", "5/6", "1/2", "1/6"],
    euler_last="1",
)


C4K2 = Fixture(
    identifier="c4k2",
    family="C", rank=4, vertex=2,
    p_terms={
        1: [({"E": 1}, "-4")],
        2: [({"y1": 1, "E": 1}, "-2"), ({"E": 2}, "6")],
    },
    z_terms={
        3: [({"y3": 1}, "1"), ({"y4": 1}, "-1/6")],
        4: [({"y4": 1}, "1")],
    },
    h_terms={3: []},
    potential_terms=[
        ({"t1": 2, "t2": 1}, "1/4"),
        ({"t4": 1, "t3": 1, "t2": 1}, "1/2"),
        ({"t4": 5, "t3": 1}, "1/1440"),
        ({"t4": 2, "t3": 2}, "-1/48"),
        ({"t4": 8}, "-1/36288"),
        ({"t1": 4}, "-1/96"),
        ({"E": 2, "t1": 2}, "1/2"),
        ({"E": 1, "t1": 1, "t4": 4}, "1/6"),
        ({"t4": 4, "E": 2}, "2/3"),
        ({"E": 1, "t1": 1, "t3": 1, "t4": 1}, "1"),
        ({"t3": 1, "t4": 1, "E": 2}, "1"),
        ({"E": 4}, "1/4"),
        ({"t3": 3, "t4": -1}, "1/48"),
    ],
    euler_dtilde=["1/2", "1", "3/4", "1/4"],
    euler_last="1/2",
    g_spot={
        (1, 1): [({"t2": 1}, "2"), ({"t1": 2}, "-1/2"), ({"E": 2}, "4")],
        # the source display carries 1/2 on the last term; its own potential
        # and Euler field force 3 through g = L_E F
        (1, 2): [({"t1": 1, "E": 2}, "6"), ({"t4": 4, "E": 1}, "1/2"),
                 ({"t3": 1, "t4": 1, "E": 1}, "3")],
        (1, 3): [({"t3": 1, "E": 1}, "5"), ({"t4": 3, "E": 1}, "10/3")],
        (1, 4): [({"t4": 1, "E": 1}, "3")],
        (1, 5): [({"t1": 1}, "1/2")],
        (2, 2): [({"E": 1, "t1": 1, "t3": 1, "t4": 1}, "2"), ({"E": 4}, "8"),
                 ({"t3": 1, "t4": 1, "E": 2}, "8"), ({"E": 2, "t4": 4}, "16/3"),
                 ({"E": 2, "t1": 2}, "4"), ({"E": 1, "t4": 4, "t1": 1}, "1/3")],
        (2, 3): [({"E": 2, "t4": 3}, "56/3"), ({"E": 2, "t3": 1}, "7"),
                 ({"t1": 1, "t4": 3, "E": 1}, "7/3"), ({"E": 1, "t1": 1, "t3": 1}, "7/2")],
        (2, 4): [({"E": 2, "t4": 1}, "5"), ({"t4": 1, "E": 1, "t1": 1}, "5/2")],
        (2, 5): [({"t2": 1}, "1")],
        (3, 3): [({"t4": 2, "E": 1, "t1": 1}, "12"), ({"t4": 2, "E": 2}, "48"),
                 ({"t3": 2}, "-1/4"), ({"t3": 1, "t4": 3}, "1/12"),
                 ({"t4": 6}, "-1/108"), ({"t3": 3, "t4": -3}, "1/4")],
        (3, 4): [({"t2": 1}, "2"), ({"E": 1, "t1": 1}, "4"), ({"E": 2}, "4"),
                 ({"t4": 1, "t3": 1}, "-1/3"), ({"t4": 4}, "1/72"),
                 ({"t3": 2, "t4": -2}, "-1/4")],
        (3, 5): [({"t3": 1}, "3/4")],
        (4, 4): [({"t3": 1, "t4": -1}, "1/4"), ({"t4": 2}, "-1/12")],
        (4, 5): [({"t4": 1}, "1/4")],
        (5, 5): [({}, "1/2")],
    },
)


FIXTURES: Dict[str, Fixture] = {f.identifier: f for f in (C3K1, C4K1, C4K2)}


def terms_to_poly(chart, terms: List[Term]):
    """Assemble fixture terms into a Poly over the given chart."""
    from .exactalg import Poly

    out = Poly.const(chart, 0)
    for mono, coeff in terms:
        out = out + Poly.monomial(chart, mono, Fraction(coeff))
    return out
