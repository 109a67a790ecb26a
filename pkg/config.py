import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _flag(value: str) -> bool:
    return str(value).strip().lower() not in ("0", "false", "no", "off", "")


class Config:
    """Configuration class for the detector-pair simulator."""

    # Output Configuration
    OUTPUT_DIR = os.getenv("UNRUH_OUTPUT_DIR", "output")
    FORMAT = os.getenv("UNRUH_FORMAT", "csv")
    SIG_DIGITS = os.getenv("UNRUH_SIG_DIGITS", "10")

    # Numerics Configuration
    WORKERS = os.getenv("UNRUH_WORKERS", "1")
    TRACE_NORM_TOL = os.getenv("UNRUH_TRACE_NORM_TOL", "1e-6")

    # Sweep Defaults
    Q_MAX = os.getenv("UNRUH_Q_MAX", "0.999")
    SURFACE_Q = os.getenv("UNRUH_SURFACE_Q", "0.9999")

    # Status output
    VERBOSE = _flag(os.getenv("UNRUH_VERBOSE", "1"))

    @classmethod
    def sig_digits(cls) -> int:
        return int(cls.SIG_DIGITS)

    @classmethod
    def workers(cls) -> int:
        return int(cls.WORKERS)

    @classmethod
    def trace_norm_tol(cls) -> float:
        return float(cls.TRACE_NORM_TOL)

    @classmethod
    def q_max(cls) -> float:
        return float(cls.Q_MAX)

    @classmethod
    def surface_q(cls) -> float:
        return float(cls.SURFACE_Q)

    @classmethod
    def validate_config(cls):
        """Validate that the configured values are usable."""
        checks = [
            ("UNRUH_FORMAT", lambda: cls.FORMAT in ("csv", "json")),
            ("UNRUH_SIG_DIGITS", lambda: 1 <= cls.sig_digits() <= 17),
            ("UNRUH_WORKERS", lambda: cls.workers() >= 1),
            ("UNRUH_TRACE_NORM_TOL", lambda: cls.trace_norm_tol() > 0),
            ("UNRUH_Q_MAX", lambda: 0 < cls.q_max() < 1),
            ("UNRUH_SURFACE_Q", lambda: 0 < cls.surface_q() < 1),
        ]

        invalid_vars = []
        for var, check in checks:
            try:
                if not check():
                    invalid_vars.append(var)
            except (TypeError, ValueError):
                invalid_vars.append(var)

        if invalid_vars:
            raise ValueError(f"Invalid environment variables: {', '.join(invalid_vars)}")

        return True
