"""Shared test helpers."""

from voronoi_bounds.forms import SymForm


def random_pd(rng, n, spread=3):
    """B^t B + I for a random integer B: an integer positive definite form."""
    b = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
    return SymForm([[sum(b[k][i] * b[k][j] for k in range(n)) + (i == j) for j in range(n)] for i in range(n)])
