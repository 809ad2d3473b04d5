"""Homonym disambiguation on co-authorship networks via particle competition."""

import json

from ._core import (
    ContractError,
    DataError,
    collaboration_graph,
    demo_network,
    disambiguate,
    forward_variables,
    monte_carlo_passage,
    pairwise_scores,
    passage_similarity,
    reduce_network,
    run_competition,
    sign_test_pvalue,
    sparsify,
    synthetic_benchmark,
    toy_corpus,
    transition_matrix,
)


def ambiguity_json(names, groups=None):
    """Build the ambiguous-name document from a list of names.

    ``groups`` optionally maps a name to ``{paper_id: group}``.
    """
    groups = groups or {}
    doc = {}
    for name in names:
        entries = groups.get(name, {})
        doc[name] = [{"paper_id": pid, "group": g} for pid, g in entries.items()]
    return json.dumps(doc)


__all__ = [
    "ContractError",
    "DataError",
    "ambiguity_json",
    "collaboration_graph",
    "demo_network",
    "disambiguate",
    "forward_variables",
    "monte_carlo_passage",
    "pairwise_scores",
    "passage_similarity",
    "reduce_network",
    "run_competition",
    "sign_test_pvalue",
    "sparsify",
    "synthetic_benchmark",
    "toy_corpus",
    "transition_matrix",
]
