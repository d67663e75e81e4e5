import numpy as np
import pytest

from precog import TimeSeries, generate_corpus


def make_series(values, spacing=300.0, start=0.0):
    values = np.asarray(values, dtype=float)
    return TimeSeries(start + spacing * np.arange(len(values)), values)


@pytest.fixture(scope="session")
def default_corpus():
    """The default seeded corpus; shared because generation is not free."""
    return generate_corpus(seed=42)
