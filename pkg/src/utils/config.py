"""
Run configuration shared by the command line and the verification suite
"""
import os
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Optional

from src.utils.errors import ConfigError

SUPPORTED_TYPES = ("A1", "A2", "B2")
DUAL_COXETER = {"A1": 2, "A2": 3, "B2": 3}
CASIMIR_VARIANTS = ("truncated", "full")
WORKERS_ENV = "VACMOD_WORKERS"


def parse_rational(text, name="value"):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"cannot parse {name} {text!r}: {e}") from e


def parse_level(text):
    """
    Parse a level given on the command line

    Args:
        text: "symbolic" or a rational written as "p/q" or "p"

    Returns:
        None for a symbolic level, otherwise a Fraction
    """
    if text is None or text == "symbolic":
        return None
    return parse_rational(text, "level")


def workers_from_env(default=1):
    """Worker count from the VACMOD_WORKERS environment variable"""
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from e
    if value < 1:
        raise ConfigError(f"{WORKERS_ENV} must be positive, got {value}")
    return value


@dataclass
class RunConfig:
    """Parameters of one command invocation"""
    command: str = "verify-all"
    cartan_type: str = "A1"
    N: int = 1
    D: int = 3
    level: Optional[Fraction] = None          # None means symbolic k
    hbar: Fraction = Fraction(1, 8)
    casimir_variant: str = "truncated"
    output_dir: str = "output"
    seed: int = 0
    workers: int = 1
    vmod: str = "adjoint"
    homotopy: bool = False
    plot: bool = False
    verbose: bool = False
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args):
        """
        Build a configuration from an argparse namespace

        Args:
            args: Parsed command line arguments

        Returns:
            Validated RunConfig
        """
        config = cls(
            command=args.command,
            cartan_type=args.type,
            N=args.N,
            D=args.D,
            level=parse_level(args.k),
            hbar=parse_rational(args.hbar, "hbar"),
            casimir_variant=args.casimir_variant,
            output_dir=args.out,
            seed=args.seed,
            workers=workers_from_env(),
            vmod=getattr(args, "vmod", "adjoint"),
            homotopy=getattr(args, "homotopy", False),
            plot=getattr(args, "plot", False),
            verbose=args.verbose,
        )
        config.validate()
        return config

    @property
    def critical_level(self):
        return DUAL_COXETER[self.cartan_type]

    def validate(self):
        """Raise ConfigError on inconsistent parameters"""
        if self.cartan_type not in SUPPORTED_TYPES:
            raise ConfigError(f"unsupported type {self.cartan_type}; choose from {', '.join(SUPPORTED_TYPES)}")
        if self.N < 1:
            raise ConfigError(f"N must be at least 1, got {self.N}")
        if self.D < 0:
            raise ConfigError(f"D must be non-negative, got {self.D}")
        if self.casimir_variant not in CASIMIR_VARIANTS:
            raise ConfigError(f"unknown Casimir variant {self.casimir_variant}")
        if self.level is not None:
            kc = self.critical_level
            if self.level == kc:
                raise ConfigError(f"level {self.level} is critical")
            if self.level == -kc:
                raise ConfigError(f"level {self.level} makes k + k_c vanish")
        return self

    def to_dict(self):
        data = asdict(self)
        data["level"] = "symbolic" if self.level is None else str(self.level)
        data["hbar"] = str(self.hbar)
        return data
