"""Bundled example networks."""
from importlib import resources

from .graph import Graph, parse_edge_list, parse_metadata

MR_HI = "1"
JOHN_A = "34"


def load_karate(weighted: bool = True) -> Graph:
    """Zachary's karate club: 34 actors, 78 weighted edges.

    Labels are the 1-based actor numbers; actor ``"1"`` is Mr. Hi and
    ``"34"`` is John A. Metadata carries each actor's ``club`` and, for the
    two faction heads, a ``name``.
    """
    pkg = resources.files("netdepth.data")
    g = parse_edge_list(pkg.joinpath("karate.txt").read_text(encoding="utf-8"),
                        directed=False, weighted=weighted)
    meta = parse_metadata(pkg.joinpath("karate_meta.csv").read_text(encoding="utf-8"))
    return g.with_metadata(meta)
