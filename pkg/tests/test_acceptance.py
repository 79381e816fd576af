"""All ten acceptance criteria; one PASS/FAIL line per criterion is printed."""

import pytest

from permcx import acceptance


@pytest.fixture(scope="module")
def results(request):
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def echo(line):
        if reporter is not None:
            reporter.write_line(line)
        else:
            print(line)

    echo("")
    return {r.number: r for r in acceptance.run_all(echo=echo)}


@pytest.mark.parametrize("number,name", [(n, name) for n, name, *_ in acceptance.CRITERIA] + [(10, "determinism")])
def test_criterion(results, number, name):
    res = results[number]
    assert res.name == name
    assert res.passed, f"criterion {number} ({name}) failed: {res.detail}"
