import math
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from analysis import FrozenScanResult, SuddenDeathResult, frozen_scan, sudden_death_nu, sudden_death_q
from config import Config
from errors import DomainError
from measures import measure_all
from model import (
    PhysicalParams,
    final_state_closed_form,
    physical_channel_params,
    unruh_temperature,
)
from sweeps import SweepConfig, SweepRecord, run_sweep, write_dataset

# (theta, nu2) of each q-sweep panel written by reproduce("fig1").
FIG1_PANELS = {
    "a": (math.pi / 4, 0.01),
    "b": (math.pi / 4, 0.0225),
    "c": (math.pi / 4, 0.04),
    "d": (math.pi / 6, 0.04),
}
FIG1_STEPS = 200
FIG2_NU_MAX = 0.05
FIG2_SURFACE_STEPS = 50
FIG2_LINE_STEPS = 200


def status(message: str) -> None:
    """Print a status line on stderr unless Config.VERBOSE is off."""
    if Config.VERBOSE:
        print(message, file=sys.stderr)


class UnruhCoherenceSimulator:
    """Runs sweeps, scans and threshold searches and writes their datasets."""

    def __init__(self, output_dir: Optional[str] = None, workers: Optional[int] = None,
                 tol: Optional[float] = None, digits: Optional[int] = None):
        """Initialize the simulator from Config, with optional overrides."""
        Config.validate_config()

        self.output_dir = Path(output_dir or Config.OUTPUT_DIR)
        self.workers = workers or Config.workers()
        self.tol = tol or Config.trace_norm_tol()
        self.digits = digits or Config.sig_digits()

    def run(self, config: SweepConfig) -> Tuple[List[SweepRecord], Optional[Path]]:
        """Evaluate a sweep and write it to ``config.out`` when one is given."""
        try:
            records = run_sweep(config, workers=self.workers, tol=self.tol)
            status(f"✅ Evaluated {len(records)} points along {config.axis}")

            path = None
            if config.out:
                path = write_dataset(records, config.out, config.fmt, config.with_nu, self.digits)
                status(f"✅ Wrote {config.fmt.upper()} dataset: {path}")
            return records, path

        except Exception as e:
            status(f"❌ Sweep along {config.axis} failed: {str(e)}")
            raise

    def sweep_q(self, theta: float, nu2: float, q_min: float = 0.0, q_max: Optional[float] = None,
                steps: int = FIG1_STEPS, out: Optional[str] = None, fmt: str = "csv",
                allow_q1: bool = False):
        config = SweepConfig(axis="q", start=q_min, stop=Config.q_max() if q_max is None else q_max,
                             steps=steps, theta=theta, nu2=nu2, out=out, fmt=fmt, allow_q1=allow_q1)
        return self.run(config)

    def sweep_nu(self, theta: float, q: Optional[float] = None, nu_min: float = 0.0,
                 nu_max: float = FIG2_NU_MAX, steps: int = FIG2_LINE_STEPS,
                 out: Optional[str] = None, fmt: str = "csv", allow_q1: bool = False):
        q = Config.surface_q() if q is None else q
        config = SweepConfig(axis="nu", start=nu_min, stop=nu_max, steps=steps, theta=theta, q=q,
                             out=out, fmt=fmt, allow_q1=allow_q1)
        records, path = self.run(config)

        if 0.0 < config.theta < math.pi / 2 and 0.0 < q < 1.0:
            death = sudden_death_nu(config.theta, q)
            status(f"ℹ️ Entanglement dies at nu* = {death.threshold:.10g}")
        return records, path

    def surface(self, q: Optional[float] = None,
                theta_range: Tuple[float, float, int] = (0.0, math.pi / 2, FIG2_SURFACE_STEPS),
                nu_min: float = 0.0, nu_max: float = FIG2_NU_MAX, nu_steps: int = FIG2_SURFACE_STEPS,
                out: Optional[str] = None, fmt: str = "csv", allow_q1: bool = False):
        q = Config.surface_q() if q is None else q
        config = SweepConfig(axis="surface", start=nu_min, stop=nu_max, steps=nu_steps, q=q,
                             theta_range=theta_range, out=out, fmt=fmt, allow_q1=allow_q1)
        return self.run(config)

    def frozen_scan(self, theta_grid: Sequence[float], nu2_grid: Sequence[float],
                    q_samples: Optional[Sequence[float]] = None) -> FrozenScanResult:
        """Scan for frozen coherence and report whether only the degenerate lines froze."""
        try:
            result = frozen_scan(theta_grid, nu2_grid, q_samples, workers=self.workers)
            status(f"✅ Scanned {len(result.grid)} points, {len(result.frozen_points)} frozen")
            if not result.matches_prediction:
                status("⚠️ Frozen set differs from the incoherent-input / zero-coupling prediction")
            return result
        except Exception as e:
            status(f"❌ Frozen scan failed: {str(e)}")
            raise

    def sudden_death(self, theta: float, nu2: Optional[float] = None,
                     q: Optional[float] = None) -> SuddenDeathResult:
        """Threshold q* for a given nu2, or nu* for a given q."""
        if (nu2 is None) == (q is None):
            raise DomainError("give exactly one of nu2 (for q*) or q (for nu*)")
        result = sudden_death_q(theta, nu2) if nu2 is not None else sudden_death_nu(theta, q)
        for note in result.notes:
            status(f"⚠️ {note}")
        return result

    def physical(self, params: PhysicalParams, theta: float) -> Dict:
        """Measures of the evolved state for detector physics given directly."""
        cp, coupling = physical_channel_params(params)
        for reason in coupling.reasons:
            status(f"⚠️ {reason}")
        report = measure_all(final_state_closed_form(theta, cp), self.tol)
        return {
            "theta": theta,
            "q": cp.q,
            "nu2": cp.nu2,
            "unruh_temperature": unruh_temperature(params.a),
            "validity_warning": coupling.warning,
            "warnings": list(coupling.reasons),
            "c_l1": report.c_l1,
            "c_re": report.c_re,
            "c_tr": report.c_tr,
            "concurrence": report.concurrence,
        }

    def reproduce(self, figure: str, fmt: str = "csv") -> List[Path]:
        """Write the reference datasets into the output directory."""
        if figure not in ("fig1", "fig2", "all"):
            raise DomainError(f"unknown figure {figure!r}, expected fig1, fig2 or all")

        paths = []
        if figure in ("fig1", "all"):
            for panel, (theta, nu2) in FIG1_PANELS.items():
                _, path = self.sweep_q(theta, nu2, 0.0, Config.q_max(), FIG1_STEPS,
                                       out=str(self.output_dir / f"fig1{panel}.{fmt}"), fmt=fmt)
                paths.append(path)
        if figure in ("fig2", "all"):
            _, path = self.surface(out=str(self.output_dir / f"fig2_surface.{fmt}"), fmt=fmt)
            paths.append(path)
            _, path = self.sweep_nu(math.pi / 4, out=str(self.output_dir / f"fig2_iv.{fmt}"), fmt=fmt)
            paths.append(path)
        return paths

    def get_system_info(self) -> Dict:
        """Get information about the simulator setup."""
        return {
            "output_dir": str(self.output_dir),
            "workers": self.workers,
            "trace_norm_tol": self.tol,
            "significant_digits": self.digits,
            "q_max": Config.q_max(),
            "surface_q": Config.surface_q(),
            "numpy": np.__version__,
        }
