"""Pairwise-comparison ranking algorithms backed by a C++ core."""

from ._pairank import (
    PairankError,
    Winner,
    average_win_rate,
    bootstrap_ci,
    bradley_terry,
    counting,
    eigen,
    elo,
    list_algorithms,
    newman,
    pagerank,
    pairwise_win_rates,
    rank,
    read_csv,
)

__all__ = [
    "PairankError",
    "Winner",
    "average_win_rate",
    "bootstrap_ci",
    "bradley_terry",
    "counting",
    "eigen",
    "elo",
    "list_algorithms",
    "newman",
    "pagerank",
    "pairwise_win_rates",
    "rank",
    "read_csv",
]
