import os
from pathlib import Path

import pytest

from spikelens.dataset_io import load_idx_dataset

DATA = Path(__file__).parent / "data"
# Point these at the full MNIST files to run the dataset tests on them instead.
MNIST_IMAGES = os.environ.get("SPIKELENS_MNIST_IMAGES", str(DATA / "mnist5k-images-idx3-ubyte.gz"))
MNIST_LABELS = os.environ.get("SPIKELENS_MNIST_LABELS", str(DATA / "mnist5k-labels-idx1-ubyte.gz"))

_acceptance_results = {}


@pytest.fixture(scope="session")
def mnist():
    return load_idx_dataset(MNIST_IMAGES, MNIST_LABELS)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    key = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _acceptance_results[key] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), outcome in sorted(_acceptance_results.items()):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")
