import csv
import io
import json
import math

import pytest

from errors import DatasetError, DomainError
from sweeps import (
    COLUMNS,
    SweepConfig,
    SweepRecord,
    evaluate_point,
    render,
    render_csv,
    render_json,
    run_sweep,
    write_dataset,
)


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def q_sweep():
    return run_sweep(SweepConfig(axis="q", start=0.0, stop=0.999, steps=200, theta=math.pi / 4, nu2=0.01))


class TestSweepConfig:
    @pytest.mark.parametrize("kwargs", [
        dict(axis="q", start=0.5, stop=0.2, steps=10),
        dict(axis="q", start=0.0, stop=0.5, steps=1),
        dict(axis="q", start=0.0, stop=1.0, steps=10, nu2=0.01),
        dict(axis="q", start=0.0, stop=1.0, steps=10, nu2=0.0, allow_q1=True),
        dict(axis="q", start=0.0, stop=0.5, steps=10, theta=2.0),
        dict(axis="nu", start=0.0, stop=1.5, steps=10, q=0.5),
        dict(axis="spin", start=0.0, stop=0.5, steps=10),
        dict(axis="q", start=0.0, stop=0.5, steps=10, fmt="xml"),
        dict(axis="surface", start=0.0, stop=0.05, steps=10, q=0.5),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            SweepConfig(**kwargs)

    def test_q1_needs_flag(self):
        config = SweepConfig(axis="q", start=0.0, stop=1.0, steps=5, nu2=0.04, allow_q1=True)
        assert config.points()[-1] == (math.pi / 4, 1.0, 0.04)

    def test_surface_order(self):
        config = SweepConfig(axis="surface", start=0.0, stop=0.05, steps=3, q=0.9999,
                             theta_range=(0.0, math.pi / 2, 2))
        points = config.points()
        assert len(points) == 6
        assert [p[0] for p in points] == [0.0] * 3 + [math.pi / 2] * 3
        assert points[1][2] == pytest.approx(0.025 ** 2)
        assert config.with_nu


class TestRecords:
    def test_rejects_non_finite(self):
        with pytest.raises(DatasetError):
            SweepRecord(theta=0.1, q=0.1, nu2=0.0, c_l1=math.nan, c_re=0.0, c_tr=0.0,
                        concurrence=0.0, d_cl1_dq=0.0)

    def test_rejects_negative_measure(self):
        with pytest.raises(DatasetError):
            SweepRecord(theta=0.1, q=0.1, nu2=0.0, c_l1=0.1, c_re=0.0, c_tr=-0.1,
                        concurrence=0.0, d_cl1_dq=0.0)

    def test_evaluate_point(self):
        record = evaluate_point(math.pi / 4, 0.5, 0.04)
        assert record.c_l1 == pytest.approx(0.9433962, abs=1e-7)
        assert record.concurrence == pytest.approx(0.8900297, abs=1e-6)
        assert record.d_cl1_dq == pytest.approx(-0.04 / 0.53 ** 2)
        assert record.nu == pytest.approx(0.2)


class TestQSweep:
    def test_first_row(self, q_sweep):
        first = q_sweep[0]
        D = 1.0 + 0.01 * 0.5
        assert first.q == 0.0
        assert first.c_l1 == pytest.approx(1.0 / D, abs=1e-12)
        assert first.concurrence == pytest.approx(1.0 / D, abs=1e-12)

    def test_strictly_decreasing(self, q_sweep):
        values = [r.c_l1 for r in q_sweep]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert all(r.d_cl1_dq < 0 for r in q_sweep)

    def test_uncoupled_sweep_is_constant(self):
        records = run_sweep(SweepConfig(axis="q", start=0.0, stop=0.999, steps=20, theta=math.pi / 3, nu2=0.0))
        for record in records:
            assert record.c_l1 == pytest.approx(math.sin(2 * math.pi / 3), abs=1e-12)
            assert record.d_cl1_dq == 0

    def test_thread_pool_keeps_order(self):
        config = SweepConfig(axis="q", start=0.0, stop=0.9, steps=30, theta=math.pi / 6, nu2=0.04)
        assert run_sweep(config, workers=4) == run_sweep(config)


class TestCouplingSweeps:
    def test_nu_sweep(self):
        records = run_sweep(SweepConfig(axis="nu", start=0.0, stop=0.05, steps=26, theta=math.pi / 4, q=0.9999))
        assert records[0].c_l1 == pytest.approx(1.0, abs=1e-12)
        for record in records:
            assert record.c_l1 > 0.0
            if record.nu >= 0.0101:
                assert record.concurrence == 0.0
        assert records[6].nu == pytest.approx(0.012)
        assert records[6].c_l1 >= 0.40

    def test_surface(self):
        config = SweepConfig(axis="surface", start=0.0, stop=0.05, steps=11, q=0.9999,
                             theta_range=(0.0, math.pi / 2, 9))
        records = run_sweep(config)
        assert len(records) == 99
        for record in records[:11]:
            assert record.c_l1 == 0.0
            assert record.concurrence == 0.0

        # theta is the outer loop, nu the inner one
        for i in range(1, 4):
            for j in range(1, 11):
                a = records[i * 11 + j]
                b = records[(8 - i) * 11 + j]
                assert a.nu2 == b.nu2
                assert a.c_l1 == pytest.approx(b.c_l1, rel=1e-3)


class TestWriters:
    def test_csv_layout(self, q_sweep):
        text = render_csv(q_sweep[:3])
        lines = text.split("\n")
        assert lines[0] == ",".join(COLUMNS)
        assert lines[-1] == ""
        assert "\r" not in text
        assert len(lines) == 5

    def test_csv_nu_column(self):
        records = run_sweep(SweepConfig(axis="nu", start=0.0, stop=0.05, steps=3, q=0.5))
        rows = read_csv(render_csv(records, with_nu=True))
        assert list(rows[0]) == COLUMNS + ["nu"]
        assert float(rows[2]["nu"]) == pytest.approx(0.05)

    def test_significant_digits(self):
        records = [evaluate_point(math.pi / 6, 0.0, 0.04)]
        row = read_csv(render_csv(records, digits=10))[0]
        # sin(pi/3) / 1.01
        assert row["c_l1"] == "0.8574508948"
        assert float(row["c_l1"]) == pytest.approx(0.8574509, abs=1e-7)

    def test_json_layout(self, q_sweep):
        rows = json.loads(render_json(q_sweep[:2]))
        assert len(rows) == 2
        assert list(rows[0]) == COLUMNS
        assert rows[0]["q"] == 0.0

    def test_deterministic(self, q_sweep):
        assert render(q_sweep, "csv") == render(q_sweep, "csv")
        assert render(q_sweep, "json") == render(q_sweep, "json")

    def test_unknown_format(self, q_sweep):
        with pytest.raises(DomainError):
            render(q_sweep, "xml")

    def test_write_dataset(self, tmp_path, q_sweep):
        first = write_dataset(q_sweep, str(tmp_path / "a" / "sweep.csv"), "csv")
        second = write_dataset(q_sweep, str(tmp_path / "b" / "sweep.csv"), "csv")
        assert first.read_bytes() == second.read_bytes()
        assert first.read_bytes().startswith(b"theta,q,nu2,")
