import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    'repo', deadline=None, derandomize=True, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile('repo')


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def poly_close(p, q, tol=1e-8):
    """Coefficientwise distance of two polynomials after monic scaling."""
    p, q = p.monic(), q.monic()
    keys = set(p.terms) | set(q.terms)
    return max((abs(p.coeff(e) - q.coeff(e)) for e in keys), default=0.0) <= tol


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section('acceptance criteria')
        for line in sorted(ACCEPTANCE_LINES,
                           key=lambda s: int(s.split()[1].rstrip(':'))):
            terminalreporter.write_line(line)
