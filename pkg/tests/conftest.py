import pytest

from lfamalgam.io import corpus_group, load_corpus


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def G():
    """Corpus lookup by name, e.g. ``G("S3")``."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = corpus_group(name)
        return cache[name]

    return get


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
