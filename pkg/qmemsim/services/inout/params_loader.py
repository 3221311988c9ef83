"""Resolution of a run's parameters from a preset, a JSON parameter file and
command-line overrides, applied in that order."""

import json
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Mapping, Optional

from qmemsim.config import logger
from qmemsim.models.errors import ConfigError
from qmemsim.models.params import SimParams, validate
from qmemsim.models.states import GaussianState
from qmemsim.presets import FIG3_INITIAL, get_preset

INITIAL_STATE_KEY = "initial_state"
PRESET_KEY = "preset"


@dataclass(frozen=True)
class ResolvedRun:
    params: SimParams
    initial_state: GaussianState
    preset: Optional[str]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "initial_state": self.initial_state.to_dict(),
            "preset": self.preset,
        }


def load_params_file(path: str) -> Dict[str, Any]:
    """Read a JSON parameter file into a flat mapping.

    The file may name a base `preset` and carry an `initial_state` object
    next to the parameter keys.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"parameter file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"parameter file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"parameter file {path} must contain a JSON object")
    return data


def _parse_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        pass
    # pi multiples such as "6pi" for horizons.
    text = raw.strip().lower()
    if text.endswith("pi"):
        factor = text[:-2].rstrip("*") or "1"
        try:
            return float(factor) * math.pi
        except ValueError:
            pass
    return raw


def parse_overrides(items: Iterable[str]) -> Dict[str, Any]:
    """Turn repeated `key=value` strings into a mapping; values are parsed as JSON
    where possible, so `epsilon=0` yields a number."""
    overrides: Dict[str, Any] = {}
    for item in items:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        overrides[key] = _parse_value(raw)
    return overrides


def resolve_run(
    preset: Optional[str] = None,
    config_path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> ResolvedRun:
    """Merge preset, parameter file and overrides into validated parameters.

    Without a preset or parameter file there is nothing to start from, which
    is a ConfigError.
    """
    values: Dict[str, Any] = {}
    state: Dict[str, Any] = {}
    base_name = preset

    file_data: Dict[str, Any] = {}
    if config_path is not None:
        file_data = load_params_file(config_path)
        if base_name is None and PRESET_KEY in file_data:
            base_name = str(file_data[PRESET_KEY])

    if base_name is not None:
        base = get_preset(base_name)
        values.update(base.params.to_dict())
        state.update(base.initial_state.to_dict())
    else:
        state.update(FIG3_INITIAL.to_dict())

    file_state = file_data.get(INITIAL_STATE_KEY, {})
    if not isinstance(file_state, dict):
        raise ConfigError(f"{INITIAL_STATE_KEY} must be a JSON object")
    state.update(file_state)
    values.update({k: v for k, v in file_data.items() if k not in (PRESET_KEY, INITIAL_STATE_KEY)})

    for key, value in (overrides or {}).items():
        if key.startswith(INITIAL_STATE_KEY + "."):
            state[key.split(".", 1)[1]] = value
        else:
            values[key] = value

    if not values:
        raise ConfigError("no parameters given: use --preset or --config")
    params = validate(SimParams.from_dict(values))
    try:
        initial_state = GaussianState.from_dict(state)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid initial state: {e}") from e
    if not (initial_state.var_phi > 0 and initial_state.var_q > 0):
        raise ConfigError("initial variances must be positive")
    logger.info("Resolved parameters: %s", params.to_dict())
    return ResolvedRun(params=params, initial_state=initial_state, preset=base_name)
