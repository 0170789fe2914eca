"""Scenario configuration: sectioned key=value files and validation.

The file format is INI-style (configparser): one [section] per subsystem with
key = value lines. Shipped defaults live in flexgrasp/configs/.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .actuators import ActuatorLimits
from .beam import ArmParams
from .controllers import (GainConditionParams, NabfcGains, PdGains, PdsGains,
                          OBJECT_INPUT_SCALES, POSTURE_INPUT_SCALES,
                          default_analysis_params)
from .plant import PlantParams, UncertaintyModel

__all__ = ["ScenarioConfig", "ConfigError", "load_config", "default_config_path"]

SCENARIOS = ("nabfc", "pds", "pd")


class ConfigError(ValueError):
    """Invalid or missing configuration entry; message names the field."""


@dataclass
class ScenarioConfig:
    scenario: str
    plant: PlantParams
    root_limits: ActuatorLimits
    end_limits: ActuatorLimits
    uncertainty: UncertaintyModel
    lambda1_d: float
    theta1_d: float
    nabfc: NabfcGains
    pds: PdsGains
    pd: PdGains
    analysis: GainConditionParams
    n_interior: int = 39
    dt: float | None = None       # None -> stability rule
    duration: float = 1.5
    stride: int = 100
    seed: int = 12345
    n_neurons: int = 32
    object_scales: np.ndarray = field(default_factory=lambda: OBJECT_INPUT_SCALES.copy())
    posture_scales: np.ndarray = field(default_factory=lambda: POSTURE_INPUT_SCALES.copy())

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario.controller must be one of {SCENARIOS}, got {self.scenario!r}")
        if self.duration <= 0.0:
            raise ConfigError("scenario.duration must be positive")
        if self.stride < 1:
            raise ConfigError("scenario.stride must be >= 1")
        if self.n_interior < 12:
            raise ConfigError("scenario.grid must be >= 12 interior nodes "
                              "(the tip smoothing window needs support)")
        if self.dt is not None and self.dt <= 0.0:
            raise ConfigError("scenario.dt must be positive when given")
        if self.n_neurons < 1:
            raise ConfigError("rbf.neurons must be >= 1")


def default_config_path(scenario: str) -> Path:
    """Path of the shipped config for a scenario."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    return Path(str(resources.files("flexgrasp.configs") / f"{scenario}.cfg"))


_REQUIRED = object()


def _get(cp, section, key, conv, default=_REQUIRED):
    try:
        raw = cp.get(section, key)
    except (configparser.NoSectionError, configparser.NoOptionError):
        if default is not _REQUIRED:
            return default
        raise ConfigError(f"missing [{section}] {key}") from None
    try:
        return conv(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r}") from None


def _pair(cp, section, key, default):
    """Scalar value applied to both arms, or two whitespace-separated values."""
    raw = _get(cp, section, key, str, default=None)
    if raw is None:
        return np.array([default, default], dtype=float)
    parts = raw.split()
    try:
        if len(parts) == 1:
            v = float(parts[0])
            return np.array([v, v])
        if len(parts) == 2:
            return np.array([float(parts[0]), float(parts[1])])
    except ValueError:
        pass
    raise ConfigError(f"[{section}] {key}: expected one or two numbers, got {raw!r}")


def load_config(path: str | Path, overrides: dict | None = None) -> ScenarioConfig:
    """Parse a scenario file; `overrides` maps dotted keys to replacement values."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.read(path)

    f = float
    arm1 = ArmParams(
        EI=_get(cp, "plant", "ei1", f, 0.115), rho=_get(cp, "plant", "rho1", f, 0.054),
        l=_get(cp, "plant", "length", f, 0.2), m_tip=_get(cp, "plant", "m_tip1", f, 0.1),
        J_hub=_get(cp, "plant", "j_hub1", f, 0.0073))
    arm2 = ArmParams(
        EI=_get(cp, "plant", "ei2", f, 0.115), rho=_get(cp, "plant", "rho2", f, 0.054),
        l=_get(cp, "plant", "length", f, 0.2), m_tip=_get(cp, "plant", "m_tip2", f, 0.1),
        J_hub=_get(cp, "plant", "j_hub2", f, 0.0073))
    plant = PlantParams(arms=(arm1, arm2), M_obj=_get(cp, "plant", "m_obj", f, 0.3),
                        d0=_get(cp, "plant", "d0", f, 0.1))

    root = ActuatorLimits(
        k_max=_get(cp, "actuators", "root_k_max", f, 2.1),
        k_min=_get(cp, "actuators", "root_k_min", f, -2.1),
        m_right=_get(cp, "actuators", "root_m_right", f, 0.1),
        m_left=_get(cp, "actuators", "root_m_left", f, -0.1),
        k_right=_get(cp, "actuators", "root_slope_right", f, 1.0),
        k_left=_get(cp, "actuators", "root_slope_left", f, 1.0))
    end = ActuatorLimits(
        k_max=_get(cp, "actuators", "end_k_max", f, 0.31),
        k_min=_get(cp, "actuators", "end_k_min", f, -0.31),
        m_right=_get(cp, "actuators", "end_m_right", f, 0.01),
        m_left=_get(cp, "actuators", "end_m_left", f, -0.01),
        k_right=_get(cp, "actuators", "end_slope_right", f, 1.0),
        k_left=_get(cp, "actuators", "end_slope_left", f, 1.0))

    unc = UncertaintyModel(
        scale_root=_get(cp, "uncertainty", "scale_root", f, -0.1),
        scale_tip=_get(cp, "uncertainty", "scale_tip", f, -0.05),
        tau_force=_get(cp, "uncertainty", "tau_force", f, 5e-3))

    theta1_deg = _get(cp, "setpoint", "theta1_deg", f, 3.0)

    gn = "gains.nabfc"
    nabfc = NabfcGains(
        eta=_get(cp, gn, "eta", f, 0.5), k=_get(cp, gn, "k", f, 0.008),
        mu_bar=_get(cp, gn, "mu_bar", f, 1.5), c1=_get(cp, gn, "c1", f, 1.5),
        eps1=_get(cp, gn, "eps1", f, 1.0), a1=_get(cp, gn, "a1", f, 0.001),
        a2=_get(cp, gn, "a2", f, 100.0), gamma1=_get(cp, gn, "gamma1", f, 0.09),
        gamma2=_get(cp, gn, "gamma2", f, 0.5), b1=_get(cp, gn, "b1", f, 1e-4),
        b2=_get(cp, gn, "b2", f, 0.5),
        xi=_pair(cp, gn, "xi", 0.5), k_arm=_pair(cp, gn, "k_arm", 0.9),
        mu=_pair(cp, gn, "mu", 13.0), c3=_pair(cp, gn, "c3", 13.0),
        eps2=_pair(cp, gn, "eps2", 0.05), a3=_pair(cp, gn, "a3", 0.001),
        a4=_pair(cp, gn, "a4", 100.0), zeta1=_pair(cp, gn, "zeta1", 0.2),
        zeta2=_pair(cp, gn, "zeta2", 2.0), g1=_pair(cp, gn, "g1", 1e-4),
        g2=_pair(cp, gn, "g2", 0.5),
        sign_boundary=_get(cp, gn, "sign_boundary", f, 0.01))

    pds = PdsGains(
        kp=_get(cp, "gains.pds", "kp", f, 40.0), kv=_get(cp, "gains.pds", "kv", f, 35.0),
        kp_arm=_pair(cp, "gains.pds", "kp_arm", 35.0),
        kv_arm=_pair(cp, "gains.pds", "kv_arm", 15.0),
        ks_arm=_pair(cp, "gains.pds", "ks_arm", 10.0))
    pd = PdGains(
        kp=_get(cp, "gains.pd", "kp", f, 10.0), kv=_get(cp, "gains.pd", "kv", f, 9.0),
        kp_arm=_pair(cp, "gains.pd", "kp_arm", 60.0),
        kv_arm=_pair(cp, "gains.pd", "kv_arm", 55.0))

    da = default_analysis_params()
    an = "analysis"
    analysis = GainConditionParams(
        beta1=_get(cp, an, "beta1", f, da.beta1), beta2=_get(cp, an, "beta2", f, da.beta2),
        vartheta1=_get(cp, an, "vartheta1", f, da.vartheta1),
        vartheta2=_get(cp, an, "vartheta2", f, da.vartheta2),
        vartheta3=_get(cp, an, "vartheta3", f, da.vartheta3),
        vartheta4=_pair(cp, an, "vartheta4", da.vartheta4[0]),
        vartheta5=_pair(cp, an, "vartheta5", da.vartheta5[0]),
        vartheta6=_pair(cp, an, "vartheta6", da.vartheta6[0]),
        vartheta7=_pair(cp, an, "vartheta7", da.vartheta7[0]),
        b3=_get(cp, an, "b3", f, da.b3), gamma3=_get(cp, an, "gamma3", f, da.gamma3),
        g3=_pair(cp, an, "g3", da.g3[0]), zeta3=_pair(cp, an, "zeta3", da.zeta3[0]))

    cfg = ScenarioConfig(
        scenario=_get(cp, "scenario", "controller", str, "nabfc").strip().lower(),
        plant=plant, root_limits=root, end_limits=end, uncertainty=unc,
        lambda1_d=_get(cp, "setpoint", "lambda1", f, -0.5),
        theta1_d=math.radians(theta1_deg),
        nabfc=nabfc, pds=pds, pd=pd, analysis=analysis,
        n_interior=_get(cp, "scenario", "grid", int, 39),
        dt=_get(cp, "scenario", "dt", f, -1.0),
        duration=_get(cp, "scenario", "duration", f, 1.5),
        stride=_get(cp, "scenario", "stride", int, 100),
        seed=_get(cp, "scenario", "seed", int, 12345),
        n_neurons=_get(cp, "rbf", "neurons", int, 32),
    )
    if cfg.dt is not None and cfg.dt < 0.0:
        cfg.dt = None

    for key, value in (overrides or {}).items():
        if not hasattr(cfg, key):
            raise ConfigError(f"unknown override {key!r}")
        setattr(cfg, key, value)
    cfg.validate()
    return cfg
