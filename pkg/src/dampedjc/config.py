"""Run configuration files (flat JSON documents) for custom runs."""
from __future__ import annotations

import json
import math
import re
from dataclasses import asdict, dataclass
from pathlib import Path

from .model import CorrelatedInit, ModelParams, TwoAtomInit, product_from_marginals, product_partner
from .numerics import TimeGrid
from .scenarios import OBSERVABLES, ONE_ATOM, TWO_ATOM, Scenario, Series

FORMATS = ("csv", "json")

_ANGLE = re.compile(r"^\s*([+-])?\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")
_SQRT = re.compile(r"^\s*sqrt\(\s*(\d+\.?\d*(?:[eE][+-]?\d+)?)\s*(?:/\s*(\d+\.?\d*(?:[eE][+-]?\d+)?))?\s*\)\s*$")


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


def parse_angle(value, field_name: str = "angle") -> float:
    """Accept a number (radians) or a multiple of pi such as ``"0.5pi"``, ``"pi/2"``, ``"-pi"``."""
    if isinstance(value, bool):
        raise ConfigError(field_name, "expected an angle")
    if isinstance(value, (int, float)):
        if not math.isfinite(value):
            raise ConfigError(field_name, "angle must be finite")
        return float(value)
    if isinstance(value, str):
        m = _ANGLE.match(value)
        if m:
            sign = -1.0 if m.group(1) == "-" else 1.0
            c = sign * (float(m.group(2)) if m.group(2) else 1.0)
            den = float(m.group(3)) if m.group(3) else 1.0
            if den == 0:
                raise ConfigError(field_name, "division by zero")
            return c * math.pi / den
        try:
            return parse_angle(float(value), field_name)
        except ValueError:
            pass
    raise ConfigError(field_name, f"cannot parse angle {value!r}")


def parse_real(value, field_name: str) -> float:
    """A finite number, or ``"sqrt(p/q)"`` for exact amplitudes."""
    if isinstance(value, bool):
        raise ConfigError(field_name, "expected a number")
    if isinstance(value, (int, float)):
        if not math.isfinite(value):
            raise ConfigError(field_name, "must be finite")
        return float(value)
    if isinstance(value, str):
        m = _SQRT.match(value)
        if m:
            den = float(m.group(2)) if m.group(2) else 1.0
            if den == 0:
                raise ConfigError(field_name, "division by zero")
            return math.sqrt(float(m.group(1)) / den)
        try:
            return parse_real(float(value), field_name)
        except ValueError:
            pass
    raise ConfigError(field_name, f"expected a number, got {value!r}")


def _section(doc: dict, key: str, allowed: set[str], required: bool = False) -> dict:
    if key not in doc:
        if required:
            raise ConfigError(key, "missing required section")
        return {}
    sec = doc[key]
    if not isinstance(sec, dict):
        raise ConfigError(key, "must be an object")
    for k in sec:
        if k not in allowed:
            raise ConfigError(f"{key}.{k}", "unknown field")
    return sec


@dataclass(frozen=True)
class ProductSpec:
    """Atomic amplitudes of the product partner as modulus and phase."""

    b1: float
    b2: float
    b1_phase: float = 0.0
    b2_phase: float = 0.0


@dataclass(frozen=True)
class RunConfig:
    model: str
    params: ModelParams
    initial: CorrelatedInit | TwoAtomInit
    product: ProductSpec | None = None
    t_end: float = 15.0
    n_points: int = 1501
    observables: tuple[str, ...] = ()
    output_path: str | None = None
    output_format: str = "csv"
    name: str = "custom"

    @classmethod
    def from_dict(cls, doc) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        allowed = {"name", "model", "params", "initial", "grid", "observables", "output"}
        for k in doc:
            if k not in allowed:
                raise ConfigError(k, "unknown field")

        name = doc.get("name", "custom")
        if not isinstance(name, str) or not name:
            raise ConfigError("name", "must be a nonempty string")

        model = doc.get("model")
        if model not in (ONE_ATOM, TWO_ATOM):
            raise ConfigError("model", f"must be {ONE_ATOM!r} or {TWO_ATOM!r}, got {model!r}")

        p = _section(doc, "params", {"omega0", "omega_c", "Omega", "Gamma", "D"})
        values = {k: parse_real(v, f"params.{k}") for k, v in p.items()}
        try:
            params = ModelParams(**values)
        except ValueError as exc:
            raise ConfigError("params", str(exc)) from None

        product = None
        if model == ONE_ATOM:
            ini = _section(doc, "initial", {"c1", "c2", "theta", "product"}, required=True)
            for k in ("c1", "c2"):
                if k not in ini:
                    raise ConfigError(f"initial.{k}", "missing required field")
            c1 = parse_real(ini["c1"], "initial.c1")
            c2 = parse_real(ini["c2"], "initial.c2")
            theta = parse_angle(ini.get("theta", 0.0), "initial.theta")
            try:
                initial = CorrelatedInit(c1, c2, theta)
            except ValueError as exc:
                raise ConfigError("initial", str(exc)) from None
            if "product" in ini:
                pr = _section(ini, "product", {"b1", "b2", "b1_phase", "b2_phase"})
                for k in ("b1", "b2"):
                    if k not in pr:
                        raise ConfigError(f"initial.product.{k}", "missing required field")
                product = ProductSpec(parse_real(pr["b1"], "initial.product.b1"),
                                      parse_real(pr["b2"], "initial.product.b2"),
                                      parse_angle(pr.get("b1_phase", 0.0), "initial.product.b1_phase"),
                                      parse_angle(pr.get("b2_phase", 0.0), "initial.product.b2_phase"))
                if product.b1 < 0 or product.b2 < 0:
                    raise ConfigError("initial.product", "moduli must be nonnegative")
                if abs(product.b1 ** 2 + product.b2 ** 2 - 1) > 1e-9:
                    raise ConfigError("initial.product", "b1^2 + b2^2 must equal 1")
        else:
            ini = _section(doc, "initial", {"c1", "c2", "c3", "theta1", "theta2"}, required=True)
            for k in ("c1", "c2", "c3"):
                if k not in ini:
                    raise ConfigError(f"initial.{k}", "missing required field")
            try:
                initial = TwoAtomInit(parse_real(ini["c1"], "initial.c1"),
                                      parse_real(ini["c2"], "initial.c2"),
                                      parse_real(ini["c3"], "initial.c3"),
                                      parse_angle(ini.get("theta1", 0.0), "initial.theta1"),
                                      parse_angle(ini.get("theta2", 0.0), "initial.theta2"))
            except ConfigError:
                raise
            except ValueError as exc:
                raise ConfigError("initial", str(exc)) from None

        g = _section(doc, "grid", {"t_end", "n_points"})
        t_end = parse_real(g.get("t_end", 15.0), "grid.t_end")
        if not t_end > 0:
            raise ConfigError("grid.t_end", "must be positive")
        n_points = g.get("n_points", 1501)
        if isinstance(n_points, bool) or not isinstance(n_points, int) or n_points < 2:
            raise ConfigError("grid.n_points", "must be an integer >= 2")

        default_obs = ["excited_corr"] if model == ONE_ATOM else ["concurrence"]
        obs = doc.get("observables", default_obs)
        if not isinstance(obs, list) or not obs or not all(isinstance(o, str) for o in obs):
            raise ConfigError("observables", "must be a nonempty list of names")
        for o in obs:
            if o not in OBSERVABLES[model]:
                raise ConfigError("observables", f"unknown observable {o!r} for {model} model")

        out = _section(doc, "output", {"path", "format"})
        path = out.get("path")
        if path is not None and not isinstance(path, str):
            raise ConfigError("output.path", "must be a string or null")
        fmt = out.get("format", "csv")
        if fmt not in FORMATS:
            raise ConfigError("output.format", f"must be one of {FORMATS}, got {fmt!r}")

        return cls(model=model, params=params, initial=initial, product=product, t_end=t_end,
                   n_points=n_points, observables=tuple(obs), output_path=path,
                   output_format=fmt, name=name)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        initial = asdict(self.initial)
        if self.product is not None:
            initial["product"] = asdict(self.product)
        return {
            "name": self.name,
            "model": self.model,
            "params": asdict(self.params),
            "initial": initial,
            "grid": {"t_end": self.t_end, "n_points": self.n_points},
            "observables": list(self.observables),
            "output": {"path": self.output_path, "format": self.output_format},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_scenario(self) -> Scenario:
        product = None
        if self.model == ONE_ATOM:
            if self.product is None:
                product = product_from_marginals(self.initial)
            else:
                ps = self.product
                product = product_partner(self.initial,
                                          ps.b1 * complex(math.cos(ps.b1_phase), math.sin(ps.b1_phase)),
                                          ps.b2 * complex(math.cos(ps.b2_phase), math.sin(ps.b2_phase)))
        grid = TimeGrid(0.0, self.t_end / self.params.Omega, self.n_points)
        s = Scenario(self.name, self.model, (Series("run", self.params, self.initial, product),),
                     grid, self.observables, "custom run from configuration")
        try:
            s.validate()
        except ValueError as exc:
            raise ConfigError("config", str(exc)) from None
        return s
