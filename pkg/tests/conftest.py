import pytest

from icewedge.bootstrap import resample
from icewedge.data_model import generate_demo_data, split_arms, write_csv
from icewedge.scale import ShadowPrice, Perspective


@pytest.fixture(scope="session")
def demo_records():
    return generate_demo_data(42)


@pytest.fixture(scope="session")
def demo_arms(demo_records):
    return split_arms(demo_records)


@pytest.fixture(scope="session")
def demo_csv(tmp_path_factory, demo_records):
    path = tmp_path_factory.mktemp("data") / "demo.csv"
    write_csv(demo_records, path)
    return path


@pytest.fixture(scope="session")
def demo_scatter(demo_arms):
    std, new = demo_arms
    return resample(std, new, 25000, 42, ShadowPrice(10.0), Perspective.ALIAS)



def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(results[num])
