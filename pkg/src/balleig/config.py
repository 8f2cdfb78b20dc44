"""Run configuration: an INI file with a ``[run]`` section plus CLI overrides.

Example::

    [run]
    map = planar-quadratic
    a = 0.5
    bc = dirichlet
    degrees = 1..14
    reference = 15
    q = auto
    k = 2
"""

import configparser
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError
from .geometry import BUILTIN_MAPS, CoefficientField, constant_coefficients, get_map


def parse_degrees(text):
    """``"8"``, ``"1..14"`` or ``"2,4,6"`` -> sorted list of ints."""
    text = str(text).strip()
    if not text:
        raise ConfigError("empty degree list")
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            out = list(range(int(a), int(b) + 1))
        else:
            out = [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise ConfigError(f"cannot parse degrees {text!r}") from None
    if not out:
        raise ConfigError(f"degree range {text!r} is empty")
    if min(out) < 1:
        raise ConfigError("degrees must be >= 1")
    return sorted(set(out))


def parse_matrix(text):
    """``"1,-3,0; 2,1,0; 1,1,1"`` -> nested list."""
    try:
        return [[float(v) for v in row.split(",")] for row in str(text).split(";")]
    except ValueError:
        raise ConfigError(f"cannot parse matrix {text!r}") from None


def _parse_q(text):
    text = str(text).strip().replace(" ", "")
    if text == "auto":
        return text
    if text == "n" or (text.startswith("n+") and text[2:].isdigit()):
        return text
    if text.isdigit() and int(text) >= 1:
        return int(text)
    raise ConfigError(f"quadrature order must be a positive integer, 'auto', 'n' or 'n+K', got {text!r}")


NAMED_GAMMAS = {"r2": lambda s: np.sum(s * s, axis=1)}


@dataclass
class RunConfig:
    map: str = "identity2d"
    a: Optional[float] = None
    matrix: Optional[list] = None
    bc: str = "dirichlet"
    A: str = "identity"
    gamma: str = "0"
    degrees: list = field(default_factory=lambda: [8])
    q: object = "auto"
    k: int = 2
    reference: Optional[int] = None
    h: Optional[float] = None
    residuals: Optional[bool] = None
    grid: Optional[list] = None
    sample_grid: Optional[list] = None
    dump_matrices: bool = False
    out: str = "out"

    def validate(self):
        if self.map not in BUILTIN_MAPS:
            raise ConfigError(f"unknown map {self.map!r}; available: {', '.join(BUILTIN_MAPS)}")
        if self.bc not in ("dirichlet", "neumann"):
            raise ConfigError(f"bc must be 'dirichlet' or 'neumann', got {self.bc!r}")
        if not self.degrees:
            raise ConfigError("empty degree list")
        if min(self.degrees) < 1:
            raise ConfigError("degrees must be >= 1")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.reference is not None and self.reference < max(self.degrees):
            raise ConfigError("reference degree must be >= the largest degree")
        if self.h is not None and not self.h > 0:
            raise ConfigError("finite-difference step h must be positive")
        self.q = _parse_q(self.q)
        if self.gamma not in NAMED_GAMMAS:
            try:
                g = float(self.gamma)
            except ValueError:
                raise ConfigError(f"gamma must be a number or one of {sorted(NAMED_GAMMAS)}") from None
            if g < 0:
                raise ConfigError("gamma must be nonnegative")
        try:
            self.domain_map()
            self.coefficients()
        except ConfigError:
            raise
        except (ValueError, ArithmeticError) as exc:
            raise ConfigError(str(exc)) from None
        return self

    def domain_map(self):
        params = {}
        if self.a is not None:
            params["a"] = float(self.a)
        if self.matrix is not None:
            params["matrix"] = self.matrix
        return get_map(self.map, **params)

    def coefficients(self):
        dim = self.domain_map().dim
        A = None
        if self.A != "identity":
            A = np.array(parse_matrix(self.A))
            if A.shape != (dim, dim):
                raise ConfigError(f"coefficient matrix must be {dim}x{dim}")
        if self.gamma in NAMED_GAMMAS:
            base = constant_coefficients(A)
            return CoefficientField(base.A, NAMED_GAMMAS[self.gamma], f"A={self.A}, gamma={self.gamma}")
        return constant_coefficients(A, float(self.gamma))

    def resolved(self):
        """Plain dict with every default filled in, for echoing into outputs."""
        d = asdict(self)
        dmap = self.domain_map()
        d["map_params"] = dmap.params
        d["reference"] = self.reference_degree()
        d["h"] = self.fd_step()
        d["residuals"] = self.want_residuals()
        d["q_rule"] = "n+2" if self.q == "auto" else self.q
        return d

    def reference_degree(self):
        return self.reference if self.reference is not None else max(self.degrees) + 1

    def fd_step(self):
        if self.h is not None:
            return float(self.h)
        return 1e-2 if self.map == "star" else 1e-4

    def want_residuals(self):
        if self.residuals is not None:
            return bool(self.residuals)
        return self.map != "star"


_FIELDS = {
    "map": str,
    "a": float,
    "matrix": parse_matrix,
    "bc": lambda v: str(v).lower(),
    "A": str,
    "gamma": str,
    "degrees": parse_degrees,
    "q": str,
    "k": int,
    "reference": int,
    "h": float,
    "residuals": lambda v: str(v).strip().lower() in ("1", "true", "yes", "on"),
    "grid": lambda v: [int(x) for x in str(v).split(",")],
    "sample_grid": lambda v: [int(x) for x in str(v).split(",")],
    "dump_matrices": lambda v: str(v).strip().lower() in ("1", "true", "yes", "on"),
    "out": str,
}


def load_config(path=None, overrides=None):
    """Build a validated :class:`RunConfig` from an INI file and override dict."""
    values = {}
    if path is not None:
        parser = configparser.ConfigParser()
        parser.optionxform = str
        try:
            if not parser.read(path):
                raise ConfigError(f"cannot read config file {path}")
        except configparser.Error as exc:
            raise ConfigError(f"malformed config file: {exc}") from None
        if "run" not in parser:
            raise ConfigError("config file needs a [run] section")
        values.update(parser["run"])
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    kwargs = {}
    for key, raw in values.items():
        if key not in _FIELDS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            kwargs[key] = _FIELDS[key](raw) if isinstance(raw, str) else raw
        except ConfigError:
            raise
        except ValueError:
            raise ConfigError(f"invalid value for {key}: {raw!r}") from None
    return RunConfig(**kwargs).validate()
