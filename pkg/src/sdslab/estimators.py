"""scikit-learn style front end.

Each estimator is fitted on a base graph and exposes its results as
trailing-underscore attributes, so parameters can be grid-searched, cloned
and inspected with ``get_params`` like any other estimator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .config import Limits
from .engine import build_map, parse_rule, permutation_transversal
from .orientations import count_report
from .phase_space import build_phase_space, canonical_form, cycle_type
from .stability import WordPolicy, omega_report, rho, word_independent
from .validation import check_graph, check_states

__all__ = ["SDSMap", "OrientationCounts", "UpdateOrderStability"]


def _to_index(X, alphabet):
    lookup = {a: d for d, a in enumerate(alphabet)}
    digits = np.vectorize(lookup.__getitem__, otypes=[np.int64])(X) if X.size else X
    place = len(alphabet) ** np.arange(X.shape[1], dtype=np.int64)
    return digits @ place


def _to_values(idx, n, alphabet):
    r = len(alphabet)
    digits = (idx[:, None] // r ** np.arange(n, dtype=np.int64)) % r
    return np.asarray(alphabet, dtype=np.int64)[digits]


class SDSMap(TransformerMixin, BaseEstimator):
    """One SDS map ``[F_Y, word]`` as a transformer on state vectors.

    Parameters
    ----------
    rule : str
        Rule mini-language string, e.g. ``"nor"``, ``"threshold:2"``, ``"eca:150"``.
    word : sequence of int or None
        Update word; ``None`` means ``(1, ..., n)``.
    weights : dict or None
        Edge weights for ``fln`` rules.
    limit_states : int or None
        Capacity for the full map table.

    Attributes
    ----------
    graph_ : Graph
    functions_ : FunctionSequence
    word_ : tuple
    table_ : ndarray of shape (n_states,)
    phase_space_ : PhaseSpace
    n_features_in_ : int
    """

    def __init__(self, rule="nor", word=None, weights=None, limit_states=None):
        self.rule = rule
        self.word = word
        self.weights = weights
        self.limit_states = limit_states

    def fit(self, Y, y=None):
        self.graph_ = check_graph(Y)
        self.functions_ = parse_rule(self.rule, self.graph_, self.weights)
        self.word_ = tuple(self.word) if self.word is not None else tuple(self.graph_.vertices)
        self.table_ = build_map(self.functions_, self.word_, self.limit_states)
        self.phase_space_ = build_phase_space(self.table_)
        self.n_features_in_ = self.graph_.n
        return self

    def transform(self, X):
        """Image of every row of ``X`` under the map."""
        check_is_fitted(self, "table_")
        alphabet = self.functions_.alphabet
        X = check_states(X, self.graph_.n, alphabet)
        return _to_values(self.table_[_to_index(X, alphabet)], self.graph_.n, alphabet)

    def cycle_type(self):
        check_is_fitted(self, "phase_space_")
        return cycle_type(self.phase_space_)

    def canonical_form(self):
        check_is_fitted(self, "phase_space_")
        return canonical_form(self.phase_space_)


class OrientationCounts(BaseEstimator):
    """Acyclic-orientation counts of a base graph.

    After ``fit`` the attributes ``alpha_``, ``kappa_``, ``alpha_bar_`` and
    ``kappa_bar_`` hold the four counts and ``cross_checks_`` records whether
    the Tutte, enumeration and Burnside routes agreed.
    """

    def __init__(self, limit_edges=None, limit_aut_vertices=None):
        self.limit_edges = limit_edges
        self.limit_aut_vertices = limit_aut_vertices

    def fit(self, Y, y=None):
        graph = check_graph(Y)
        limits = Limits().updated(edges=self.limit_edges, aut_vertices=self.limit_aut_vertices)
        report = count_report(graph, limits)
        self.graph_ = graph
        self.report_ = report
        self.alpha_ = report["alpha"]
        self.kappa_ = report["kappa"]
        self.alpha_bar_ = report["alpha_bar"]
        self.kappa_bar_ = report["kappa_bar"]
        self.cross_checks_ = report["cross_checks"]
        return self


class UpdateOrderStability(TransformerMixin, BaseEstimator):
    """Limit-set reachability and periodic-set invariance of a rule on a graph.

    ``transform`` maps each state vector to the number of periodic states
    reachable from it over the fitted update-sequence family.
    """

    def __init__(self, rule="threshold:2", words="transversal", sample_count=200,
                 max_length=None, seed=0, weights=None, n_jobs=1):
        self.rule = rule
        self.words = words
        self.sample_count = sample_count
        self.max_length = max_length
        self.seed = seed
        self.weights = weights
        self.n_jobs = n_jobs

    def _policy(self):
        if isinstance(self.words, str):
            return WordPolicy(self.words, self.sample_count, self.max_length, self.seed)
        return WordPolicy("explicit", words=tuple(tuple(w) for w in self.words))

    def fit(self, Y, y=None):
        self.graph_ = check_graph(Y)
        self.functions_ = parse_rule(self.rule, self.graph_, self.weights)
        policy = self._policy()
        family = policy.resolve(self.functions_)
        self.omega_report_ = omega_report(self.functions_, family, self.n_jobs)
        self.omega_ = self.omega_report_.omega_max
        self.omega_argmax_ = self.omega_report_.argmax
        self.word_independence_ = word_independent(self.functions_, policy, self.n_jobs)
        self.rho_ = rho(self.functions_, permutation_transversal(self.graph_), self.n_jobs)
        self.n_features_in_ = self.graph_.n
        return self

    def transform(self, X):
        check_is_fitted(self, "omega_report_")
        alphabet = self.functions_.alphabet
        X = check_states(X, self.graph_.n, alphabet)
        idx = _to_index(X, alphabet)
        sizes = np.array([len(self.omega_report_.per_state[int(i)]) for i in idx], dtype=np.int64)
        return sizes.reshape(-1, 1)
