import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make `import oracles` work

from banakh import MetricFragment, SurdValue


def line_fragment(coords: dict) -> MetricFragment:
    """Fragment whose points sit at the given rational line coordinates."""
    names = sorted(coords)
    dist = {}
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            dist[(x, y)] = SurdValue(abs(Fraction(coords[x]) - Fraction(coords[y])))
    return MetricFragment(names, dist)


@pytest.fixture
def z_line_window():
    """Integer points -4..4 as a fragment (a desk-size window of Z)."""
    return line_fragment({f"p{k:+d}": k for k in range(-4, 5)})
