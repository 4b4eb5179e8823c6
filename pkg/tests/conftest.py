import numpy as np
import pytest

from zqwalk import refine_system, track_bands, walk_corpus


@pytest.fixture(scope="session")
def corpus():
    return walk_corpus()


@pytest.fixture(scope="session")
def tracked_corpus(corpus):
    """Refined eigen systems of the corpus walks at the default grid."""
    return {
        name: refine_system(track_bands(walk, 1024))
        for name, walk in corpus.items()
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
