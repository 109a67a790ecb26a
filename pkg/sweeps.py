"""
Parameter sweeps over the evolved detector state and their flat-file datasets.

CSV layout: one header row ``theta,q,nu2,c_l1,c_re,c_tr,concurrence,d_cl1_dq``,
floats with ``Config.SIG_DIGITS`` significant digits, LF line endings. Sweeps
over the coupling (``nu`` and ``surface``) append a trailing ``nu`` column.
JSON output is a list of objects with the same keys.
"""

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from analysis import dCl1_dq
from errors import DatasetError, DomainError
from measures import measure_all
from model import ChannelParams, InitialStateParams, final_state_closed_form

COLUMNS = ["theta", "q", "nu2", "c_l1", "c_re", "c_tr", "concurrence", "d_cl1_dq"]
NU_COLUMN = "nu"
MEASURE_FIELDS = ("c_l1", "c_re", "c_tr", "concurrence")
AXES = ("q", "nu", "theta", "surface")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class SweepRecord:
    theta: float
    q: float
    nu2: float
    c_l1: float
    c_re: float
    c_tr: float
    concurrence: float
    d_cl1_dq: float

    def __post_init__(self):
        for name in COLUMNS:
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DatasetError(f"record field {name} is not finite: {value!r}")
        for name in MEASURE_FIELDS:
            if getattr(self, name) < 0.0:
                raise DatasetError(f"record field {name} is negative: {getattr(self, name)!r}")

    @property
    def nu(self) -> float:
        return math.sqrt(self.nu2)

    def as_row(self, with_nu: bool = False) -> Dict[str, float]:
        row = {name: getattr(self, name) for name in COLUMNS}
        if with_nu:
            row[NU_COLUMN] = self.nu
        return row


@dataclass(frozen=True)
class SweepConfig:
    """
    One sweep: the swept axis, its inclusive range, and the fixed parameters.

    For ``axis="surface"`` the primary range is nu and ``theta_range`` gives the
    (min, max, steps) of the theta axis.
    """

    axis: str
    start: float
    stop: float
    steps: int
    theta: float = math.pi / 4
    q: float = 0.0
    nu2: float = 0.0
    theta_range: Optional[Tuple[float, float, int]] = None
    out: Optional[str] = None
    fmt: str = "csv"
    allow_q1: bool = False

    def __post_init__(self):
        if self.axis not in AXES:
            raise DomainError(f"unknown sweep axis {self.axis!r}, expected one of {AXES}")
        if self.fmt not in FORMATS:
            raise DomainError(f"unknown format {self.fmt!r}, expected one of {FORMATS}")
        _check_range("sweep", self.start, self.stop, self.steps)
        if self.axis == "surface":
            if self.theta_range is None:
                raise DomainError("surface sweeps need a theta range")
            _check_range("theta", *self.theta_range)
        # every grid point must be a valid parameter set
        for theta, q, nu2 in self.points():
            InitialStateParams(theta)
            ChannelParams(q=q, nu2=nu2)
            if q >= 1.0 and not self.allow_q1:
                raise DomainError("q = 1 needs nu2 > 0 and the explicit allow_q1 flag")

    @property
    def with_nu(self) -> bool:
        return self.axis in ("nu", "surface")

    def points(self) -> List[Tuple[float, float, float]]:
        """(theta, q, nu2) triples in output order."""
        values = np.linspace(self.start, self.stop, self.steps)
        if self.axis == "q":
            return [(self.theta, float(q), self.nu2) for q in values]
        if self.axis == "nu":
            return [(self.theta, self.q, float(nu) ** 2) for nu in values]
        if self.axis == "theta":
            return [(float(t), self.q, self.nu2) for t in values]
        t_min, t_max, t_steps = self.theta_range
        return [(float(t), self.q, float(nu) ** 2)
                for t in np.linspace(t_min, t_max, t_steps) for nu in values]


def _check_range(name: str, start: float, stop: float, steps: int) -> None:
    if not start < stop:
        raise DomainError(f"{name} range needs min < max, got [{start}, {stop}]")
    if int(steps) != steps or steps < 2:
        raise DomainError(f"{name} range needs an integer steps >= 2, got {steps!r}")


def evaluate_point(theta: float, q: float, nu2: float, tol: float = 1e-6) -> SweepRecord:
    """All measures and dC_l1/dq at one parameter point."""
    cp = ChannelParams(q=q, nu2=nu2)
    report = measure_all(final_state_closed_form(theta, cp), tol)
    return SweepRecord(
        theta=theta,
        q=q,
        nu2=nu2,
        c_l1=report.c_l1,
        c_re=report.c_re,
        c_tr=report.c_tr,
        concurrence=report.concurrence,
        d_cl1_dq=dCl1_dq(theta, q, nu2),
    )


def run_sweep(config: SweepConfig, workers: int = 1, tol: float = 1e-6) -> List[SweepRecord]:
    """Evaluate every grid point; output order is grid order whatever ``workers`` is."""
    points = config.points()

    def evaluate(point):
        return evaluate_point(*point, tol=tol)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(evaluate, points))
    return [evaluate(point) for point in points]


def _fmt(value: float, digits: int) -> str:
    return format(value, f".{digits}g")


def render_csv(records: Sequence[SweepRecord], with_nu: bool = False, digits: int = 10) -> str:
    header = COLUMNS + ([NU_COLUMN] if with_nu else [])
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for record in records:
        row = record.as_row(with_nu)
        writer.writerow([_fmt(row[name], digits) for name in header])
    return buffer.getvalue()


def render_json(records: Sequence[SweepRecord], with_nu: bool = False, digits: int = 10) -> str:
    rows = [{name: float(_fmt(value, digits)) for name, value in record.as_row(with_nu).items()}
            for record in records]
    return json.dumps(rows, indent=2) + "\n"


def render(records: Sequence[SweepRecord], fmt: str, with_nu: bool = False, digits: int = 10) -> str:
    if fmt == "csv":
        return render_csv(records, with_nu, digits)
    if fmt == "json":
        return render_json(records, with_nu, digits)
    raise DomainError(f"unknown format {fmt!r}, expected one of {FORMATS}")


def write_dataset(records: Iterable[SweepRecord], path: str, fmt: str,
                  with_nu: bool = False, digits: int = 10) -> Path:
    """Write records to ``path``; parent directories are created. Raises OSError on I/O failure."""
    text = render(list(records), fmt, with_nu, digits)
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return target
