from fractions import Fraction

from hypothesis import settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


def rationals(min_num=-20, max_num=20, max_den=6):
    return st.builds(
        Fraction,
        st.integers(min_num, max_num),
        st.integers(1, max_den),
    )


positive_rationals = st.builds(Fraction, st.integers(1, 40), st.integers(1, 7))


@st.composite
def point_rows(draw, min_n=3, max_n=6, min_dim=1, max_dim=4, coord=None):
    """Lists of pairwise-distinct rational points."""
    if coord is None:
        coord = rationals()
    dim = draw(st.integers(min_dim, max_dim))
    rows = draw(
        st.lists(
            st.tuples(*[coord] * dim),
            min_size=min_n,
            max_size=max_n,
            unique=True,
        )
    )
    return rows


import pytest

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Record one pass/fail line per acceptance criterion for the summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def log(number: int, ok: bool, detail: str):
        lines.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
