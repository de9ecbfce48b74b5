"""Shared pytest plumbing: the acceptance summary block.

Every test named ``test_criterion_<n>`` in test_acceptance.py gets one
PASS/FAIL line in the terminal summary so the gate can be read off
without scrolling through the full run.
"""

import re

CRITERIA = {
    1: "running example timetable maps to tension (8,2,4), offsets (0,0,1), z=1",
    2: "census finds 3 polytropes (two triangles, one hexagon), all dimension 2",
    3: "tropical vertices for z=0,1,2 are (0,3,10), (0,3,6), (0,9,2)",
    4: "offset graph is the path 0-1-2 and tns reaches 14 from z=2 in one move",
    5: "zonotope generators, translation, box, breakpoints, lattice exact",
    6: "second instance: 12 trees, 12 tiles, 11 lattice points, width 2*3*2, box exact",
    7: "tile structures are feasible polytrope vertices matching every root's tropical vertex",
    8: "property suite over 100 random instances (oracles, bases, tilings, bounds, tns)",
    9: "repeated exact solves and renders are byte-identical",
}

_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")
_OUTCOMES = {}


def pytest_runtest_logreport(report):
    match = _PATTERN.search(report.nodeid)
    if not match:
        return
    number = int(match.group(1))
    if report.when == "call":
        _OUTCOMES[number] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _OUTCOMES[number] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        outcome = _OUTCOMES[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        text = CRITERIA.get(number, "")
        terminalreporter.write_line(f"criterion {number}: {verdict} - {text}")
