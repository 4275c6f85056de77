"""Gromov-Monge distances, distance-distribution invariants and metric tree tools.

Spaces and graphs are plain dicts in the same JSON layout the command-line tool uses.
Rational entries may be given as Fraction, int or "p/q" strings.
"""

import json
import math
import re
from fractions import Fraction

from . import _gromon
from ._gromon import DistinctnessViolated, Error, InvalidInput, NotATree, SizeLimitExceeded

__all__ = [
    "space", "gm", "bounds", "global_distribution", "local_distribution", "delta_space", "bloom",
    "curve", "mallows_clarke", "verify_partition", "lobe_tree", "random_tree", "node_multiset",
    "reconstruct_tree", "canonical_form", "tree_delta", "discretize_graph", "parse_value",
    "Error", "InvalidInput", "SizeLimitExceeded", "DistinctnessViolated", "NotATree",
]

_ROOT = re.compile(r"^\((.+)\)\^\(1/(\d+)\)$")


def _scalar(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (int, Fraction)):
        f = Fraction(v)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return v


def _dump(obj):
    return json.dumps(obj)


def parse_value(v):
    """Fraction for exact values, inf, or float for irrational roots."""
    if isinstance(v, (int, float)):
        return v
    if v == "inf":
        return math.inf
    m = _ROOT.match(v)
    if m:
        return float(Fraction(m.group(1))) ** (1.0 / int(m.group(2)))
    return Fraction(v)


def space(dist, weights=None):
    """Rational space from a square distance matrix; uniform weights by default."""
    n = len(dist)
    if weights is None:
        weights = [Fraction(1, n)] * n
    return {
        "n": n,
        "dist": [[_scalar(x) for x in row] for row in dist],
        "weights": [_scalar(w) for w in weights],
        "scalar": "rational",
    }


def gm(x, y, p=1, method="exact", seed=None):
    r = json.loads(_gromon.gm(_dump(x), _dump(y), str(p), method, seed))
    r["value"] = parse_value(r["value"])
    return r


def bounds(x, y, p=1):
    r = json.loads(_gromon.bounds(_dump(x), _dump(y), str(p)))
    return {k: parse_value(v) for k, v in r.items()}


def _cdf(text):
    d = json.loads(text)
    return [(parse_value(r), parse_value(v)) for r, v in zip(d["r"], d["value"])]


def global_distribution(x):
    return _cdf(_gromon.distribution(_dump(x), None))


def local_distribution(x, point):
    return _cdf(_gromon.distribution(_dump(x), point))


def delta_space(n):
    return json.loads(_gromon.delta_space(n))


def bloom():
    a, b = _gromon.bloom()
    return json.loads(a), json.loads(b)


def curve(kind, m, a=1.0, b=1.0, n=5):
    return json.loads(_gromon.curve(kind, m, a, b, n))


def mallows_clarke(n=4, m=96):
    x, y, part = _gromon.mallows_clarke(n, m)
    return json.loads(x), json.loads(y), json.loads(part)


def verify_partition(x, y, partition):
    return _gromon.verify_partition(_dump(x), _dump(y), _dump(partition))


def lobe_tree(matrix):
    flat = [int(v) for row in matrix for v in row] if isinstance(matrix[0], (list, tuple)) else list(matrix)
    return json.loads(_gromon.lobe_tree(flat))


def random_tree(seed, max_edges=10):
    return json.loads(_gromon.random_tree(seed, max_edges))


def node_multiset(graph):
    return json.loads(_gromon.node_multiset(_dump(graph)))


def reconstruct_tree(multiset):
    return json.loads(_gromon.reconstruct_tree(_dump(multiset)))


def canonical_form(graph):
    return _gromon.canonical_form(_dump(graph))


def tree_delta(t, s, size_guard=14):
    return Fraction(_gromon.tree_delta(_dump(t), _dump(s), size_guard))


def discretize_graph(graph, mesh="1/2"):
    return json.loads(_gromon.discretize_graph(_dump(graph), _scalar(mesh)))
