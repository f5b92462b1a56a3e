"""Input coercion for the estimator layer."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import ContractError
from .graph import Graph, generate, parse_edge_list


def check_graph(Y) -> Graph:
    """Accept a :class:`Graph`, a ``"kind:n"`` generator string, edge-list text,
    an iterable of edge pairs, or anything exposing ``nodes``/``edges`` with
    integer labels (e.g. a networkx graph)."""
    if isinstance(Y, Graph):
        return Y
    if isinstance(Y, str):
        kind, sep, size = Y.partition(":")
        if sep and size.strip().isdigit() and "\n" not in Y:
            return generate(kind.strip(), int(size))
        return parse_edge_list(Y)
    if hasattr(Y, "nodes") and hasattr(Y, "edges"):
        nodes = sorted(int(v) for v in Y.nodes)
        return Graph(max(nodes, default=0), tuple((int(a), int(b)) for a, b in Y.edges))
    try:
        return Graph.from_edges(Y)
    except (TypeError, ValueError):
        raise ContractError(f"cannot interpret {type(Y).__name__} as a graph") from None


def check_states(X, n: int, alphabet) -> np.ndarray:
    """2-D integer array of state vectors whose entries lie in ``alphabet``."""
    X = check_array(X, dtype=np.int64, ensure_min_features=0)
    if X.shape[1] != n:
        raise ValueError(f"X has {X.shape[1]} features, but the graph has {n} vertices")
    bad = ~np.isin(X, np.asarray(alphabet))
    if bad.any():
        raise ValueError(f"state values must lie in {tuple(alphabet)}; found {X[bad][0]}")
    return X
