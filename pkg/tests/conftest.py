import numpy as np
import pytest

from evomlp import Dataset, TransformParams
from evomlp.datasets import make_blobs, make_xor


def dataset_from(features, labels):
    """Build a Dataset directly from arrays, first-appearance label order."""
    names = []
    for label in labels:
        if label not in names:
            names.append(label)
    encoded = np.array([names.index(label) for label in labels], dtype=np.int64)
    return Dataset(
        np.asarray(features, dtype=np.float64), encoded, names, TransformParams.identity()
    )


@pytest.fixture(scope="session")
def xor_dataset():
    features, labels = make_xor()
    return dataset_from(features, labels)


@pytest.fixture(scope="session")
def blob_dataset():
    features, labels = make_blobs(200, seed=0)
    return dataset_from(features, labels)


@pytest.fixture(scope="session")
def small_blob_dataset():
    features, labels = make_blobs(60, seed=1)
    return dataset_from(features, labels)


def pytest_runtest_logreport(report):
    # one visible verdict line per acceptance criterion
    if report.when == "call" and "::test_criterion" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\n[{verdict}] {name}", flush=True)
