import pytest

from linkpred import SynthParams, YearWindow, generate_synthetic
from linkpred.datasets import SplitSpec, build_test_dataset, build_train_dataset
from linkpred.seeding import child_seed

SMALL_PARAMS = SynthParams(
    communities=2,
    nodes_per_community=12,
    p_in=0.35,
    p_out=0.02,
    years=YearWindow(2000, 2003),
    interest_vocab_per_community=6,
)
SMALL_SPEC = SplitSpec(YearWindow(2000, 2001), YearWindow(2002, 2003))
SMALL_SEED = 11


@pytest.fixture(scope="session")
def small_corpus():
    return generate_synthetic(SMALL_PARAMS, SMALL_SEED)


@pytest.fixture(scope="session")
def small_split(small_corpus):
    edges, profiles = small_corpus
    train = build_train_dataset(
        edges, profiles, SMALL_SPEC, child_seed(SMALL_SEED, "split:train")
    )
    test = build_test_dataset(
        edges, profiles, SMALL_SPEC, child_seed(SMALL_SEED, "split:test"), train.graph
    )
    return train, test
