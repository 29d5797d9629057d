import numpy as np
import pytest

from ecquant import channel_from_likelihood, discretize, fig2_spec, random_channel, sort_by_posterior

BETAS = (0.0, 0.5, 1.0, 2.0, 8.0)


@pytest.fixture
def four_output():
    """Prior (1/2, 1/2), p(y|x1) = (.4, .3, .2, .1), p(y|x2) reversed."""
    ch = channel_from_likelihood([0.5, 0.5], [[0.4, 0.3, 0.2, 0.1], [0.1, 0.2, 0.3, 0.4]])
    return sort_by_posterior(ch)


@pytest.fixture(scope="session")
def fig2_channel():
    return discretize(fig2_spec())


@pytest.fixture(scope="session")
def fig2_sorted(fig2_channel):
    return sort_by_posterior(fig2_channel)


def random_instances(n, seed, m_range=(2, 12), k_range=(1, 4), betas=BETAS):
    """Seeded (sorted channel, K, beta) triples."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        M = int(rng.integers(m_range[0], m_range[1] + 1))
        K = int(rng.integers(k_range[0], k_range[1] + 1))
        beta = float(rng.choice(betas))
        sc = sort_by_posterior(random_channel(M, seed=int(rng.integers(2**31))))
        out.append((sc, K, beta))
    return out


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    line = f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
