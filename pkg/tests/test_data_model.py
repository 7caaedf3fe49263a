import math
import statistics

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from icewedge.data_model import (
    Arm,
    ArmSample,
    PatientRecord,
    generate_demo_data,
    ingest_csv,
    samples_to_records,
    split_arms,
    summarize,
    write_csv,
)
from icewedge.errors import ArmTooSmall, EmptyFile, MissingColumn, NonNumericCell, UnknownArmCode

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


def sample(values, arm=Arm.STD):
    return ArmSample.from_arrays(arm, values, values)


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_bytes(text.encode("utf-8"))
    return p


class TestIngest:
    def test_minimal_partition(self, tmp_path):
        p = write(tmp_path, "trtm,effe,cost\n0,1,10\n0,2,20\n1,3,30\n1,4,40\n")
        std, new = ingest_csv(p)
        assert (std.n, new.n) == (2, 2)
        assert list(std.effe) == [1, 2] and list(new.cost) == [30, 40]

    def test_row_order_preserved_within_arm(self, tmp_path):
        p = write(tmp_path, "trtm,effe,cost\n1,5,1\n0,1,1\n1,6,1\n0,2,1\n1,7,1\n")
        std, new = ingest_csv(p)
        assert list(std.effe) == [1, 2]
        assert list(new.effe) == [5, 6, 7]

    def test_crlf_and_column_order(self, tmp_path):
        p = write(tmp_path, "cost,trtm,effe\r\n10,0,1\r\n20,0,2\r\n30,1,3\r\n40,1,4\r\n")
        std, new = ingest_csv(p)
        assert list(std.cost) == [10, 20] and list(new.effe) == [3, 4]

    def test_unknown_arm_code_reports_row(self, tmp_path):
        p = write(tmp_path, "trtm,effe,cost\n0,1,1\n0,2,2\n2,3,3\n1,4,4\n1,5,5\n")
        with pytest.raises(UnknownArmCode) as exc:
            ingest_csv(p)
        assert exc.value.row == 3

    def test_missing_column(self, tmp_path):
        with pytest.raises(MissingColumn):
            ingest_csv(write(tmp_path, "trtm,effe\n0,1\n"))

    @pytest.mark.parametrize("cell", ["abc", "nan", "inf", ""])
    def test_non_numeric(self, tmp_path, cell):
        p = write(tmp_path, f"trtm,effe,cost\n0,1,1\n0,{cell},2\n1,1,1\n1,2,2\n")
        with pytest.raises(NonNumericCell) as exc:
            ingest_csv(p)
        assert exc.value.row == 2

    def test_arm_too_small(self, tmp_path):
        with pytest.raises(ArmTooSmall):
            ingest_csv(write(tmp_path, "trtm,effe,cost\n0,1,1\n1,1,1\n1,2,2\n"))

    def test_empty_file(self, tmp_path):
        with pytest.raises(EmptyFile):
            ingest_csv(write(tmp_path, ""))

    def test_demo_file_arm_sizes(self, demo_csv):
        std, new = ingest_csv(demo_csv)
        assert (std.n, new.n) == (99, 101)
        with open(demo_csv) as fh:
            assert sum(1 for _ in fh) == 201

    def test_round_trip_exact(self, tmp_path, demo_records):
        p = tmp_path / "rt.csv"
        write_csv(demo_records, p)
        std, new = ingest_csv(p)
        assert samples_to_records(std, new) == demo_records

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(st.sampled_from([0, 1]), finite, finite), min_size=4, max_size=30))
    def test_round_trip_property(self, tmp_path_factory, rows):
        rows = [(0, 0.5, 1.5), (0, -2.0, 3.25), (1, 1e-9, 7.0), (1, 4.0, -1e5)] + rows
        recs = [PatientRecord(Arm(a), e, c) for a, e, c in rows]
        p = tmp_path_factory.mktemp("rt") / "x.csv"
        write_csv(recs, p)
        std, new = ingest_csv(p)
        assert samples_to_records(std, new) == samples_to_records(*split_arms(recs))


class TestSummarize:
    def test_symmetric_triple(self):
        s = summarize(sample([1, 2, 3]), "effe")
        assert (s.min, s.median, s.mean, s.max, s.sd) == (1, 2, 2, 3, 1)

    def test_constant(self):
        s = summarize(sample([0, 0, 0, 0]), "cost")
        assert s.as_row() == (0,) * 7

    def test_quartile_interpolation(self):
        s = summarize(sample([4, 1, 3, 2]), "effe")
        assert (s.q1, s.q3) == (1.75, 3.25)

    @given(st.lists(finite, min_size=2, max_size=60))
    def test_quartiles_match_inclusive_method(self, values):
        # statistics.quantiles(method="inclusive") is the same h = (n-1)p + 1 rule
        s = summarize(sample(values), "effe")
        q1, med, q3 = statistics.quantiles(values, n=4, method="inclusive")
        for got, want in ((s.q1, q1), (s.median, med), (s.q3, q3)):
            assert got == pytest.approx(want, rel=1e-12, abs=1e-9)

    @given(st.lists(finite, min_size=2, max_size=60))
    def test_ordering_invariant(self, values):
        s = summarize(sample(values), "effe")
        assert s.min <= s.q1 <= s.median <= s.q3 <= s.max
        assert s.min <= s.mean <= s.max

    @given(st.lists(finite, min_size=2, max_size=60), st.randoms(use_true_random=False))
    def test_permutation_invariant(self, values, rnd):
        shuffled = list(values)
        rnd.shuffle(shuffled)
        assert summarize(sample(values), "effe") == summarize(sample(shuffled), "effe")

    @given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=60), st.floats(-100, 100).filter(lambda k: abs(k) > 1e-3))
    def test_sd_scales(self, values, k):
        base = summarize(sample(values), "effe").sd
        scaled = summarize(sample([k * v for v in values]), "effe").sd
        assert scaled == pytest.approx(abs(k) * base, rel=1e-12, abs=1e-300)

    def test_sd_matches_statistics(self, demo_arms):
        for arm in demo_arms:
            for var in ("effe", "cost"):
                want = statistics.stdev(arm.values(var).tolist())
                assert summarize(arm, var).sd == pytest.approx(want, rel=1e-12)

    def test_too_small(self):
        with pytest.raises(ArmTooSmall):
            sample([1.0])


class TestDemoGenerator:
    def test_deterministic(self):
        assert generate_demo_data(42) == generate_demo_data(42)

    def test_seed_matters(self):
        assert generate_demo_data(42) != generate_demo_data(43)

    def test_arm_sizes(self, demo_arms):
        std, new = demo_arms
        assert (std.n, new.n) == (99, 101)

    def test_first_moments_near_targets(self, demo_arms):
        std, new = demo_arms
        assert abs(new.effe.mean() - 4.0) < 0.5
        assert abs(new.cost.mean() - 68.8) < 10
        assert abs(std.effe.mean() - 3.65) < 0.5
        assert abs(std.cost.mean() - 76.5) < 10

    def test_positive_and_correlated(self, demo_records):
        e = np.array([r.effe for r in demo_records])
        c = np.array([r.cost for r in demo_records])
        assert (e > 0).all() and (c > 0).all()
        assert np.corrcoef(e, c)[0, 1] > 0.2

    def test_std_records_first(self, demo_records):
        arms = [r.arm for r in demo_records]
        assert arms == [Arm.STD] * 99 + [Arm.NEW] * 101
