"""Campaign configuration: dataclasses, TOML loading and a JSON-schema twin."""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import jsonschema
import tomli

from .buzano import MeanFunction
from .ensembles import KINDS, EnsembleSpec

ELEMENT_SUITES = (
    "sandwich",
    "power",
    "thm34",
    "chain",
    "thm31",
    "thm32",
    "thm33",
    "presets",
    "dominance",
    "equality_probes",
    "spectral_corollary",
)
MODULE_SUITES = ("cs", "gb", "cb", "thm21", "cor22", "cor24", "cor25")
ALL_SUITES = ELEMENT_SUITES + MODULE_SUITES

# the six-point scalar grid: alpha = beta (= gamma) on each point
DEFAULT_SCALARS = (2.0, 1.0, 1 + 1j, 0.5 * cmath.exp(1j * math.pi / 3), 10.0, 1e6)


@dataclass(frozen=True)
class Tolerances:
    solver_tol: float = 1e-11
    grid_points: int = 64
    bound_slack: float = 1e-9
    buzano_slack: float = 1e-10
    power_slack: float = 1e-8
    cs_slack: float = 1e-10


@dataclass(frozen=True)
class MeanChoice:
    f1: str = "identity"
    xi1: float = 0.0
    f2: str = "identity"
    xi2: float = 0.0

    def functions(self) -> tuple[MeanFunction, MeanFunction]:
        return MeanFunction.by_name(self.f1), MeanFunction.by_name(self.f2)

    @property
    def label(self) -> str:
        return f"{self.f1}@{self.xi1:g},{self.f2}@{self.xi2:g}"


@dataclass(frozen=True)
class ParameterGrid:
    scalars: tuple[complex, ...] = DEFAULT_SCALARS
    powers: tuple[int, ...] = (2, 3, 4, 5, 6)
    mean_choices: tuple[MeanChoice, ...] = (MeanChoice(),)


@dataclass(frozen=True)
class BuzanoSettings:
    trials: int = 10_000
    dims: tuple[int, ...] = (1, 2, 3, 4)
    rows: tuple[int, ...] = (1, 2, 3, 4)
    arity: tuple[int, ...] = (2, 3, 4, 5)
    alpha_grid: tuple[complex, ...] = (2.0, 1.0, 1 + 1j, 0.5, 10.0)
    annulus: tuple[float, float] = (0.1, 10.0)
    state_kind: str = "hilbert_schmidt"


@dataclass(frozen=True)
class CampaignConfig:
    seed: int = 42
    ensembles: tuple[EnsembleSpec, ...] = ()
    suites: tuple[str, ...] = ALL_SUITES
    tolerances: Tolerances = field(default_factory=Tolerances)
    parameters: ParameterGrid = field(default_factory=ParameterGrid)
    buzano: BuzanoSettings = field(default_factory=BuzanoSettings)
    chunk_size: int = 64
    output_dir: str = "reports"

    def __post_init__(self):
        if not self.suites:
            raise ValueError("campaign needs at least one suite")
        unknown = set(self.suites) - set(ALL_SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def element_suites(self) -> tuple[str, ...]:
        return tuple(s for s in self.suites if s in ELEMENT_SUITES)

    @property
    def module_suites(self) -> tuple[str, ...]:
        return tuple(s for s in self.suites if s in MODULE_SUITES)

    def with_seed(self, seed: int) -> CampaignConfig:
        return replace(self, seed=seed)

    def echo(self) -> dict:
        """Plain-data copy of everything that determines results (not where they go)."""
        return config_to_dict(self, include_output=False)


# --- TOML / schema ------------------------------------------------------------

_COMPLEX = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
_INT_LIST = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "numrad campaign configuration",
    "type": "object",
    "additionalProperties": False,
    "required": ["seed", "suites"],
    "properties": {
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "suites": {"type": "array", "items": {"enum": list(ALL_SUITES)}, "minItems": 1, "uniqueItems": True},
        "chunk_size": {"type": "integer", "minimum": 1},
        "output_dir": {"type": "string", "minLength": 1},
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "solver_tol": {"type": "number", "minimum": 1e-12},
                "grid_points": {"type": "integer", "minimum": 8},
                "bound_slack": {"type": "number", "minimum": 0},
                "buzano_slack": {"type": "number", "minimum": 0},
                "power_slack": {"type": "number", "minimum": 0},
                "cs_slack": {"type": "number", "minimum": 0},
            },
        },
        "parameters": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "scalars": {"type": "array", "items": _COMPLEX, "minItems": 1},
                "powers": {"type": "array", "items": {"type": "integer", "minimum": 2, "maximum": 8}, "minItems": 1},
                "mean_choices": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "properties": {
                            "f1": {"enum": ["identity", "affine_quarter"]},
                            "xi1": {"type": "number"},
                            "f2": {"enum": ["identity", "affine_quarter"]},
                            "xi2": {"type": "number"},
                        },
                    },
                },
            },
        },
        "ensembles": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["kind", "dims", "count"],
                "properties": {
                    "kind": {"enum": list(KINDS)},
                    "dims": _INT_LIST,
                    "count": {"type": "integer", "minimum": 1},
                    "normalize": {"type": "boolean"},
                    "base": {"enum": [k for k in KINDS if k != "shifted_scaled"]},
                    "scale": _COMPLEX,
                    "shift": _COMPLEX,
                },
            },
        },
        "buzano": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "trials": {"type": "integer", "minimum": 1},
                "dims": _INT_LIST,
                "rows": _INT_LIST,
                "arity": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
                "alpha_grid": {"type": "array", "items": _COMPLEX},
                "annulus": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 2, "maxItems": 2},
                "state_kind": {"enum": ["hilbert_schmidt", "pure"]},
            },
        },
    },
}


def _complex(v) -> complex:
    return complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)


def _scalar(v):
    c = _complex(v)
    return c.real if c.imag == 0 else c


def config_from_dict(data: dict) -> CampaignConfig:
    """Validate against CONFIG_SCHEMA and build the dataclass tree."""
    jsonschema.validate(data, CONFIG_SCHEMA)
    ensembles = []
    for e in data.get("ensembles", []):
        for dim in e["dims"]:
            ensembles.append(
                EnsembleSpec(
                    kind=e["kind"],
                    dim=dim,
                    count=e["count"],
                    normalize=e.get("normalize", True),
                    base=e.get("base"),
                    scale=_scalar(e.get("scale", 1.0)),
                    shift=_scalar(e.get("shift", 0.0)),
                )
            )
    p = data.get("parameters", {})
    params = ParameterGrid(
        scalars=tuple(_scalar(s) for s in p.get("scalars", DEFAULT_SCALARS)),
        powers=tuple(p.get("powers", ParameterGrid.powers)),
        mean_choices=tuple(MeanChoice(**m) for m in p.get("mean_choices", [{}])),
    )
    for m in params.mean_choices:
        f1, f2 = m.functions()
        if not (f1.admits(m.xi1) and f2.admits(m.xi2)):
            raise ValueError(f"mean choice {m.label}: xi and 1 - xi must lie in the domain")
    b = dict(data.get("buzano", {}))
    for key in ("dims", "rows", "arity", "annulus"):
        if key in b:
            b[key] = tuple(b[key])
    if "alpha_grid" in b:
        b["alpha_grid"] = tuple(_scalar(v) for v in b["alpha_grid"])
    return CampaignConfig(
        seed=data["seed"],
        ensembles=tuple(ensembles),
        suites=tuple(data["suites"]),
        tolerances=Tolerances(**data.get("tolerances", {})),
        parameters=params,
        buzano=BuzanoSettings(**b),
        chunk_size=data.get("chunk_size", 64),
        output_dir=data.get("output_dir", "reports"),
    )


def load_config(path) -> CampaignConfig:
    with open(Path(path), "rb") as fh:
        return config_from_dict(tomli.load(fh))


def _plain_scalar(c):
    c = complex(c)
    return c.real if c.imag == 0 else [c.real, c.imag]


def config_to_dict(cfg: CampaignConfig, include_output: bool = True) -> dict:
    """Inverse of ``config_from_dict`` (ensembles come back one entry per dim)."""
    ensembles = []
    for e in cfg.ensembles:
        entry = {"kind": e.kind, "dims": [e.dim], "count": e.count, "normalize": e.normalize}
        if e.kind == "shifted_scaled":
            entry.update(base=e.base, scale=_plain_scalar(e.scale), shift=_plain_scalar(e.shift))
        ensembles.append(entry)
    b = cfg.buzano
    out = {
        "seed": cfg.seed,
        "suites": list(cfg.suites),
        "chunk_size": cfg.chunk_size,
        "tolerances": asdict(cfg.tolerances),
        "parameters": {
            "scalars": [_plain_scalar(s) for s in cfg.parameters.scalars],
            "powers": list(cfg.parameters.powers),
            "mean_choices": [asdict(m) for m in cfg.parameters.mean_choices],
        },
        "ensembles": ensembles,
        "buzano": {
            "trials": b.trials,
            "dims": list(b.dims),
            "rows": list(b.rows),
            "arity": list(b.arity),
            "alpha_grid": [_plain_scalar(a) for a in b.alpha_grid],
            "annulus": list(b.annulus),
            "state_kind": b.state_kind,
        },
    }
    if include_output:
        out["output_dir"] = cfg.output_dir
    return out
