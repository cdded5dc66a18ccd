import pytest

from factbench import Triple, parse_gold, read_extractions, to_extractions

# One fully worked sentence: four facts, each with every acceptable
# surface form. f2 pools two object lengths in one synset; f4 allows two
# slot boundaries for the trailing preposition, the second of which does
# not leave a clean standalone concept in the object.
MITCHELL_GOLD = """\
sent\tS1\tSen. Mitchell is confident he has sufficient votes to block such a measure with procedural actions .
fact\tS1\tf1\t{ Sen. Mitchell | he }\tis\tconfident [ he has sufficient votes to block such a measure with procedural actions ]
fact\tS1\tf2\t{ Sen. Mitchell | he }\tis confident he has\tsufficient votes
fact\tS1\tf2\t{ Sen. Mitchell | he }\tis confident he has\tsufficient votes to block [ such ] [ a ] measure
fact\tS1\tf3\t{ Sen. Mitchell | he }\tis confident he has sufficient votes to block\t[ such ] [ a ] measure
fact\tS1\tf3\t{ Sen. Mitchell | he }\tis confident he has sufficient votes to block [ such ]\t[ a ] measure
fact\tS1\tf3\t{ Sen. Mitchell | he }\tis confident he has sufficient votes to block [ such ] [ a ]\tmeasure
fact\tS1\tf4\t{ Sen. Mitchell | he }\tis confident he has sufficient votes to block [ such ] [ a ] measure with\tprocedural actions
fact\tS1\tf4\t{ Sen. Mitchell | he }\tis confident he has sufficient votes to block [ such ] [ a ] measure\twith procedural actions\tno-entity
"""

# Four system extractions over S1 that differ only in the object; only
# the last one hits a gold triple exactly.
MITCHELL_EXTRACTIONS = """\
S1\tSen. Mitchell\tis confident he has\tsufficient
S1\tSen. Mitchell\tis confident he has\tsufficient actions
S1\tSen. Mitchell\tis confident he has\tsufficient procedural actions
S1\tSen. Mitchell\tis confident he has\tsufficient votes
"""

# The single reference triple a token-overlap gold would hold for S1.
LONG_GOLD_TRIPLE = Triple.from_surfaces(
    ["Sen.", "Mitchell"],
    ["is", "confident", "he", "has"],
    ["sufficient", "votes", "to", "block", "such", "a", "measure",
     "with", "procedural", "actions"],
)


@pytest.fixture
def mitchell_corpus():
    return parse_gold(MITCHELL_GOLD)


@pytest.fixture
def mitchell_extractions():
    return to_extractions(read_extractions(MITCHELL_EXTRACTIONS))


# ---------------------------------------------------------------------------
# acceptance reporting: each test in test_acceptance.py carries an
# `acceptance` marker naming its criterion; one PASS/FAIL/SKIP line per
# criterion is printed at the end of the run.

_acceptance_results: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(criterion): test backing one acceptance criterion"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    criterion = marker.kwargs.get("criterion") or marker.args[0]
    if report.when == "call":
        _acceptance_results[criterion] = report.outcome
    elif report.when == "setup" and report.outcome in ("skipped", "failed"):
        _acceptance_results[criterion] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    labels = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}
    for criterion, outcome in _acceptance_results.items():
        label = labels.get(outcome, outcome.upper())
        terminalreporter.write_line(f"{label}  {criterion}")
