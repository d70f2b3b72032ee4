import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import nekrasov as nk


def solved_field(mu: float, n: int = 512) -> nk.SolveResult:
    grid = nk.get_grid(n)
    guess = nk.AngleField(grid, values=nk.eval_series(nk.expand_solution(3),
                                                      mu - 3.0, grid.theta))
    return nk.solve(mu, guess, method="newton")


@pytest.fixture(scope="session")
def wave_35() -> nk.SolveResult:
    """Converged deep-water solution at mu = 3.5, n = 512."""
    return solved_field(3.5)


@pytest.fixture(scope="session")
def small_branch() -> nk.Branch:
    """Branch over [3.05, 8] used by several diagnostics tests."""
    return nk.trace_branch(3.05, 8.0)


@pytest.fixture(scope="session")
def extreme_direct() -> nk.ExtremeSolution:
    return nk.solve_extreme(strategy="direct")
