import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from pdresilience.model import ExplicitArena  # noqa: E402


@st.composite
def arenas(draw, max_n=7, disturbances=True, marked=False, max_succ=3):
    """Small deadlock-free arenas; disturbance edges only out of Player-0 vertices."""
    n = draw(st.integers(1, max_n))
    owner = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    succ = [draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=max_succ)) for _ in range(n)]
    if disturbances:
        dsucc = [draw(st.lists(st.integers(0, n - 1), max_size=2)) if owner[v] == 0 else []
                 for v in range(n)]
    else:
        dsucc = None
    unsafe = draw(st.sets(st.integers(0, n - 1), max_size=max(1, n // 2)))
    marks = draw(st.sets(st.integers(0, n - 1), max_size=n)) if marked else ()
    return ExplicitArena(list(range(n)), owner, succ, dsucc, unsafe, marks, 0)


@pytest.fixture
def tmp_game(tmp_path):
    def write(text, name="g.game"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write
