"""Run configuration: YAML-backed, validated before any computation.

Every validation error names the offending key so a bad config fails fast
with an actionable message.
"""

from dataclasses import dataclass, field

import numpy as np
import yaml

from .bath import BathSpec
from .models import MODEL_NAMES, ModelDef, builtin_model
from .operators import SiteHamiltonian, check_density_matrix, site_projector

__all__ = ["ConfigError", "SimConfig", "load_config", "config_from_dict"]

FORMS = ("lindblad", "redfield")
VARIANTS = ("gamma1", "gamma2")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"config key '{key}': {message}")
        self.key = key


@dataclass
class SimConfig:
    model: str                      # builtin name, or 'inline'
    hamiltonian: SiteHamiltonian
    bath: BathSpec
    form: str = "lindblad"
    secular: bool = False
    initial_state: int | np.ndarray = 0
    t_final: float = 5.0
    samples: int = 500
    out: str = "trajectory.csv"
    matrix_cm1: np.ndarray | None = None  # retained for echo when inline

    def initial_density_matrix(self) -> np.ndarray:
        if isinstance(self.initial_state, (int, np.integer)):
            dim = self.hamiltonian.dim
            if not 0 <= self.initial_state < dim:
                raise ConfigError("initial_state", f"site index {self.initial_state} out of range for dim {dim}")
            return site_projector(int(self.initial_state), dim)
        return check_density_matrix(self.initial_state, require_psd=True)

    def to_dict(self) -> dict:
        d: dict = {}
        if self.model == "inline":
            d["model"] = {"matrix_cm1": np.asarray(self.matrix_cm1).real.tolist()}
        else:
            d["model"] = self.model
        d["bath"] = {
            "eta": self.bath.eta_cm1,
            "omega_c": self.bath.omega_c_cm1,
            "temperature": self.bath.temperature_k,
            "matsubara_n": self.bath.matsubara_n,
            "variant": self.bath.variant,
        }
        d["method"] = {"form": self.form, "secular": self.secular}
        if isinstance(self.initial_state, (int, np.integer)):
            d["initial_state"] = int(self.initial_state)
        else:
            d["initial_state"] = np.asarray(self.initial_state).real.tolist()
        d["time"] = {"t_final": self.t_final, "samples": self.samples}
        d["output"] = {"path": self.out}
        return d

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise ConfigError(f"{context}.{key}" if context else key, "missing")
    return mapping[key]


def _as_float(value, key: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(key, f"expected a number, got {value!r}") from None


def _as_int(value, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ConfigError(key, f"expected an integer, got {value!r}")
    return int(value)


def config_from_dict(raw: dict, overrides: dict | None = None) -> SimConfig:
    """Build and validate a SimConfig from a parsed config tree.

    overrides (CLI flags) take precedence over file values; model defaults
    fill anything left unspecified.
    """
    if not isinstance(raw, dict):
        raise ConfigError("", f"config root must be a mapping, got {type(raw).__name__}")
    raw = dict(raw)
    overrides = overrides or {}

    model_spec = overrides.get("model", raw.get("model", "three_level"))
    matrix_cm1 = None
    model_def: ModelDef | None = None
    if isinstance(model_spec, str):
        if model_spec not in MODEL_NAMES:
            raise ConfigError("model", f"unknown model {model_spec!r}; choose from {MODEL_NAMES} or give matrix_cm1")
        model_def = builtin_model(model_spec)
        model_name = model_spec
        hamiltonian = model_def.hamiltonian
    elif isinstance(model_spec, dict) and "matrix_cm1" in model_spec:
        try:
            matrix_cm1 = np.array(model_spec["matrix_cm1"], dtype=float)
        except (TypeError, ValueError):
            raise ConfigError("model.matrix_cm1", "expected a square numeric matrix") from None
        if matrix_cm1.ndim != 2 or matrix_cm1.shape[0] != matrix_cm1.shape[1]:
            raise ConfigError("model.matrix_cm1", f"expected a square matrix, got shape {matrix_cm1.shape}")
        if matrix_cm1.shape[0] < 2:
            raise ConfigError("model.matrix_cm1", "dimension must be >= 2")
        model_name = "inline"
        hamiltonian = SiteHamiltonian.from_cm1(matrix_cm1)
    else:
        raise ConfigError("model", f"expected a builtin name or a mapping with matrix_cm1, got {model_spec!r}")

    bath_raw = dict(raw.get("bath") or {})
    defaults = model_def.default_bath if model_def else None
    def bath_value(key, fallback):
        if key in overrides:
            return overrides[key]
        if key in bath_raw:
            return bath_raw[key]
        if fallback is not None:
            return fallback
        raise ConfigError(f"bath.{key}", "missing (no builtin default for inline models)")
    eta = _as_float(bath_value("eta", defaults.eta_cm1 if defaults else None), "bath.eta")
    omega_c = _as_float(bath_value("omega_c", defaults.omega_c_cm1 if defaults else None), "bath.omega_c")
    temperature = _as_float(bath_value("temperature", defaults.temperature_k if defaults else 300.0),
                            "bath.temperature")
    default_n = defaults.matsubara_n if defaults else (100 if hamiltonian.dim <= 4 else 10000)
    matsubara_n = _as_int(bath_value("matsubara_n", default_n), "bath.matsubara_n")
    variant = bath_value("variant", "gamma2")
    if variant not in VARIANTS:
        raise ConfigError("bath.variant", f"must be one of {VARIANTS}, got {variant!r}")
    try:
        bath = BathSpec(eta_cm1=eta, omega_c_cm1=omega_c, temperature_k=temperature,
                        matsubara_n=matsubara_n, variant=variant)
    except ValueError as exc:
        raise ConfigError("bath", str(exc)) from None

    method_raw = dict(raw.get("method") or {})
    form = overrides.get("form", method_raw.get("form", "lindblad"))
    if form not in FORMS:
        raise ConfigError("method.form", f"must be one of {FORMS}, got {form!r}")
    secular = overrides.get("secular", method_raw.get("secular", False))
    if not isinstance(secular, bool):
        raise ConfigError("method.secular", f"expected true/false, got {secular!r}")

    init_raw = overrides.get("initial_state", raw.get("initial_state", 0))
    if isinstance(init_raw, bool):
        raise ConfigError("initial_state", f"expected a site index or matrix, got {init_raw!r}")
    if isinstance(init_raw, (int, np.integer)):
        initial_state: int | np.ndarray = int(init_raw)
        if not 0 <= initial_state < hamiltonian.dim:
            raise ConfigError("initial_state", f"site index {initial_state} out of range for dim {hamiltonian.dim}")
    elif isinstance(init_raw, list):
        try:
            initial_state = np.array(init_raw, dtype=complex)
            check_density_matrix(initial_state, require_psd=True)
        except ValueError as exc:
            raise ConfigError("initial_state", str(exc)) from None
        if initial_state.shape[0] != hamiltonian.dim:
            raise ConfigError("initial_state",
                              f"matrix dim {initial_state.shape[0]} does not match model dim {hamiltonian.dim}")
    else:
        raise ConfigError("initial_state", f"expected a site index or matrix, got {init_raw!r}")

    time_raw = dict(raw.get("time") or {})
    default_tf = model_def.default_t_final if model_def else 5.0
    t_final = _as_float(overrides.get("t_final", time_raw.get("t_final", default_tf)), "time.t_final")
    if t_final <= 0:
        raise ConfigError("time.t_final", f"must be > 0, got {t_final}")
    samples = _as_int(overrides.get("samples", time_raw.get("samples", 500)), "time.samples")
    if samples < 2:
        raise ConfigError("time.samples", f"must be >= 2, got {samples}")

    output_raw = dict(raw.get("output") or {})
    out = overrides.get("out", output_raw.get("path", "trajectory.csv"))
    if not isinstance(out, str) or not out:
        raise ConfigError("output.path", f"expected a nonempty path, got {out!r}")

    return SimConfig(model=model_name, hamiltonian=hamiltonian, bath=bath, form=form,
                     secular=secular, initial_state=initial_state, t_final=t_final,
                     samples=samples, out=out, matrix_cm1=matrix_cm1)


def load_config(path: str, overrides: dict | None = None) -> SimConfig:
    with open(path) as fh:
        try:
            raw = yaml.safe_load(fh) or {}
        except yaml.YAMLError as exc:
            raise ConfigError("", f"invalid YAML in {path}: {exc}") from None
    return config_from_dict(raw, overrides)
