"""Experiment parameters and mean channel gains from node geometry."""
from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Mapping

Point = tuple[float, float]

# slot length; the harvest/relay arithmetic assumes T = 1
SLOT_DURATION = 1.0

CONFIG_KEYS = (
    "L",
    "rate_primary",
    "rate_secondary",
    "bandwidth",
    "p_pt_db",
    "p_peak_db",
    "theta_p",
    "delta",
    "rho",
    "pos_st",
    "pos_sr",
    "pos_sd",
    "pos_pt",
    "pos_pd",
)

# Simulation setup of the reference network: secondary nodes on a line,
# primary transmitters and destinations each collocated.
DEFAULT_CONFIG: dict[str, str] = {
    "L": "2",
    "rate_primary": "0.4",
    "rate_secondary": "0.2",
    "bandwidth": "1.0",
    "p_pt_db": "20",
    "p_peak_db": "20",
    "theta_p": "0.01",
    "delta": "0.5",
    "rho": "4",
    "pos_st": "0,0",
    "pos_sr": "0.5,0",
    "pos_sd": "1,0",
    "pos_pt": "0.5,1",
    "pos_pd": "1,1",
}


class ScenarioError(ValueError):
    """Invalid scenario parameter; ``field`` names the offending config key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def db_to_linear(x: float) -> float:
    return 10.0 ** (x / 10.0)


def mean_gain(pos_a: Point, pos_b: Point, rho: float) -> float:
    """Mean channel power gain d^-rho between two nodes."""
    d = math.hypot(pos_a[0] - pos_b[0], pos_a[1] - pos_b[1])
    if d == 0.0:
        raise ValueError(f"nodes at {pos_a} and {pos_b} coincide; mean gain is infinite")
    return d ** (-rho)


@dataclass(frozen=True)
class MeanGains:
    lambda_pp: float
    lambda_sr: float
    lambda_rd: float
    lambda_sp: float
    lambda_rp: float
    lambda_pr: float
    lambda_pd: float

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if not (v > 0 and math.isfinite(v)):
                raise ScenarioError(f.name, f"mean gain must be positive and finite, got {v}")


@dataclass(frozen=True)
class Scenario:
    """Validated network parameterization. Powers are kept in dB."""

    num_primary_pairs: int
    rate_primary: float
    rate_secondary: float
    bandwidth: float
    power_pt_db: float
    power_peak_db: float
    theta_p: float
    delta: float
    path_loss_exp: float
    pos_st: Point
    pos_sr: Point
    pos_sd: Point
    pos_pt: Point
    pos_pd: Point

    def __post_init__(self):
        _check(self.num_primary_pairs >= 1 and int(self.num_primary_pairs) == self.num_primary_pairs,
               "L", f"must be a positive integer, got {self.num_primary_pairs}")
        _check(0.0 <= self.theta_p < 1.0, "theta_p", f"must lie in [0, 1), got {self.theta_p}")
        _check(0.0 <= self.delta <= 1.0, "delta", f"must lie in [0, 1], got {self.delta}")
        _check(self.rate_primary >= 0, "rate_primary", f"must be >= 0, got {self.rate_primary}")
        _check(self.rate_secondary >= 0, "rate_secondary", f"must be >= 0, got {self.rate_secondary}")
        _check(self.bandwidth > 0, "bandwidth", f"must be > 0, got {self.bandwidth}")
        _check(self.path_loss_exp > 0, "rho", f"must be > 0, got {self.path_loss_exp}")
        for key in ("power_pt_db", "power_peak_db"):
            v = getattr(self, key)
            _check(math.isfinite(v), _CONFIG_NAME[key], f"must be finite, got {v}")
        nodes = {k: getattr(self, k) for k in ("pos_st", "pos_sr", "pos_sd", "pos_pt", "pos_pd")}
        names = list(nodes)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                _check(tuple(nodes[a]) != tuple(nodes[b]), a, f"coincides with {b} at {nodes[a]}")

    @property
    def L(self) -> int:
        return self.num_primary_pairs

    @property
    def slot_duration(self) -> float:
        return SLOT_DURATION

    @property
    def p_pt(self) -> float:
        return db_to_linear(self.power_pt_db)

    @property
    def p_peak(self) -> float:
        return db_to_linear(self.power_peak_db)

    @cached_property
    def gains(self) -> MeanGains:
        rho = self.path_loss_exp
        return MeanGains(
            lambda_pp=mean_gain(self.pos_pt, self.pos_pd, rho),
            lambda_sr=mean_gain(self.pos_st, self.pos_sr, rho),
            lambda_rd=mean_gain(self.pos_sr, self.pos_sd, rho),
            lambda_sp=mean_gain(self.pos_st, self.pos_pd, rho),
            lambda_rp=mean_gain(self.pos_sr, self.pos_pd, rho),
            lambda_pr=mean_gain(self.pos_pt, self.pos_sr, rho),
            lambda_pd=mean_gain(self.pos_pt, self.pos_sd, rho),
        )

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)

    def to_config(self) -> dict[str, str]:
        out = {}
        for attr, key in _CONFIG_NAME.items():
            v = getattr(self, attr)
            out[key] = f"{v[0]!r},{v[1]!r}" if isinstance(v, tuple) else repr(v)
        return out


_CONFIG_NAME = {
    "num_primary_pairs": "L",
    "rate_primary": "rate_primary",
    "rate_secondary": "rate_secondary",
    "bandwidth": "bandwidth",
    "power_pt_db": "p_pt_db",
    "power_peak_db": "p_peak_db",
    "theta_p": "theta_p",
    "delta": "delta",
    "path_loss_exp": "rho",
    "pos_st": "pos_st",
    "pos_sr": "pos_sr",
    "pos_sd": "pos_sd",
    "pos_pt": "pos_pt",
    "pos_pd": "pos_pd",
}


def _check(ok: bool, field: str, message: str) -> None:
    if not ok:
        raise ScenarioError(field, message)


def _parse_float(key: str, raw) -> float:
    try:
        v = float(raw)
    except (TypeError, ValueError):
        raise ScenarioError(key, f"expected a number, got {raw!r}") from None
    if math.isnan(v):
        raise ScenarioError(key, "NaN is not allowed")
    return v


def _parse_point(key: str, raw) -> Point:
    if isinstance(raw, (tuple, list)):
        parts = list(raw)
    else:
        parts = str(raw).split(",")
    if len(parts) != 2:
        raise ScenarioError(key, f"expected an 'x,y' coordinate pair, got {raw!r}")
    return (_parse_float(key, parts[0]), _parse_float(key, parts[1]))


def _parse_int(key: str, raw) -> int:
    v = _parse_float(key, raw)
    if v != int(v):
        raise ScenarioError(key, f"expected an integer, got {raw!r}")
    return int(v)


def build_scenario(config: Mapping[str, object]) -> tuple[Scenario, MeanGains]:
    """Validate a flat key/value config and derive the mean gains.

    Keys missing from ``config`` raise; unknown keys raise as well so that
    typos do not silently fall back to anything.
    """
    unknown = sorted(set(config) - set(CONFIG_KEYS))
    if unknown:
        raise ScenarioError(unknown[0], "unknown config key")
    missing = [k for k in CONFIG_KEYS if k not in config]
    if missing:
        raise ScenarioError(missing[0], "missing from config")
    c = config
    scenario = Scenario(
        num_primary_pairs=_parse_int("L", c["L"]),
        rate_primary=_parse_float("rate_primary", c["rate_primary"]),
        rate_secondary=_parse_float("rate_secondary", c["rate_secondary"]),
        bandwidth=_parse_float("bandwidth", c["bandwidth"]),
        power_pt_db=_parse_float("p_pt_db", c["p_pt_db"]),
        power_peak_db=_parse_float("p_peak_db", c["p_peak_db"]),
        theta_p=_parse_float("theta_p", c["theta_p"]),
        delta=_parse_float("delta", c["delta"]),
        path_loss_exp=_parse_float("rho", c["rho"]),
        pos_st=_parse_point("pos_st", c["pos_st"]),
        pos_sr=_parse_point("pos_sr", c["pos_sr"]),
        pos_sd=_parse_point("pos_sd", c["pos_sd"]),
        pos_pt=_parse_point("pos_pt", c["pos_pt"]),
        pos_pd=_parse_point("pos_pd", c["pos_pd"]),
    )
    return scenario, scenario.gains


def default_scenario(**overrides) -> Scenario:
    """Reference network, with config-key overrides (e.g. ``L=4``)."""
    cfg = dict(DEFAULT_CONFIG)
    cfg.update({k: v for k, v in overrides.items()})
    return build_scenario(cfg)[0]


def read_config(path: str | Path) -> dict[str, str]:
    """Read a flat ``key = value`` file (``#`` comments allowed)."""
    text = Path(path).read_text()
    parser = configparser.ConfigParser(
        interpolation=None, comment_prefixes=("#", ";"), inline_comment_prefixes=("#",)
    )
    parser.optionxform = str  # keep key case ("L")
    try:
        parser.read_string("[scenario]\n" + text)
    except configparser.Error as exc:
        raise ScenarioError("config", f"cannot parse {path}: {exc}") from None
    return dict(parser["scenario"])


def load_scenario(path: str | Path, overrides: Mapping[str, object] | None = None) -> Scenario:
    cfg = read_config(path)
    if overrides:
        cfg.update(overrides)
    return build_scenario(cfg)[0]
