from __future__ import annotations

import numpy as np
import pytest

from cosserat_plate.material import CosseratModuli


def random_pd_moduli(rng: np.random.Generator) -> CosseratModuli:
    """Random moduli satisfying every strict positive-definiteness inequality."""
    mu = rng.uniform(0.2, 3.0)
    lam = rng.uniform(-0.6 * mu, 3.0)          # 3 lam + 2 mu > 0
    gamma = rng.uniform(0.2, 3.0)
    beta = rng.uniform(-0.6 * gamma, 3.0)
    return CosseratModuli(lam, mu, rng.uniform(0.05, 3.0), beta, gamma, rng.uniform(0.05, 3.0))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def unit_moduli() -> CosseratModuli:
    return CosseratModuli(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)


@pytest.fixture
def generic_moduli() -> CosseratModuli:
    return CosseratModuli(1.2, 1.0, 0.8, 0.6, 0.9, 0.7)


# -- acceptance report ---------------------------------------------------------------

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config) -> None:
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


def pytest_collection_modifyitems(items) -> None:
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args))


def pytest_runtest_logreport(report) -> None:
    props = dict(report.user_properties)
    if "criterion" not in props or (report.when != "call" and not report.failed):
        return
    n, title = props["criterion"]
    entry = _CRITERIA.setdefault(n, {"title": title, "ok": True, "details": []})
    entry["ok"] = entry["ok"] and report.passed
    details = [v for k, v in report.user_properties if k == "detail"]
    if report.when == "call":
        entry["details"].extend(details)


def pytest_terminal_summary(terminalreporter) -> None:
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        status = "PASS" if e["ok"] else "FAIL"
        terminalreporter.write_line(f"{status} criterion {n:2d}: {e['title']}")
        for d in e["details"]:
            terminalreporter.write_line(f"        {d}")
