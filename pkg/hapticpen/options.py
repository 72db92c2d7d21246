from copy import deepcopy
from collections.abc import Mapping
from typing import Any, Callable, Dict

from hapticpen import exceptions


def _optional_str(value):
    return None if value in (None, "", "none", "None") else str(value)


_CONVERTERS: Dict[str, Callable[[Any], Any]] = {
    "sigma_subj": float,
    "p_vis": float,
    "repetitions": int,
    "tops_trials": int,
    "tops_direction_target": float,
    "tops_box_target": float,
    "movement_table": _optional_str,
    "rotation_table": _optional_str,
    "participants": int,
    "seed": int,
}

DEFAULTS: Dict[str, Any] = {
    "sigma_subj": 0.05,
    "p_vis": 0.9,
    "repetitions": 10,
    "tops_trials": 20,
    "tops_direction_target": 0.81,
    "tops_box_target": 0.65,
    "movement_table": None,
    "rotation_table": None,
    "participants": 10,
    "seed": 0,
}


def _set_options(options, **modified):
    opts = deepcopy(options)
    for name, value in modified.items():
        if name not in _CONVERTERS:
            raise exceptions.InvalidArgumentError(
                f"Unknown harness option '{name}'! Valid options are: "
                f"{', '.join(sorted(_CONVERTERS))}."
            )
        try:
            opts[name] = _CONVERTERS[name](value)
        except (TypeError, ValueError):
            raise exceptions.InvalidArgumentError(
                f"Harness option '{name}' has an invalid value {value!r}"
            ) from None
    return opts


def _check(values):
    if values["sigma_subj"] < 0:
        raise exceptions.InvalidArgumentError("sigma_subj must be >= 0")
    if not 0.0 <= values["p_vis"] <= 1.0:
        raise exceptions.InvalidArgumentError("p_vis must be within [0, 1]")
    if values["repetitions"] < 1:
        raise exceptions.InvalidArgumentError("repetitions must be >= 1")
    if values["tops_trials"] < 2 or values["tops_trials"] % 2:
        raise exceptions.InvalidArgumentError(
            "tops_trials must be a positive even number (two spin directions)"
        )
    if not 0.5 <= values["tops_direction_target"] <= 1.0:
        raise exceptions.InvalidArgumentError(
            "tops_direction_target must be within [0.5, 1]"
        )
    if not 0.0 <= values["tops_box_target"] <= 1.0:
        raise exceptions.InvalidArgumentError("tops_box_target must be within [0, 1]")
    if values["participants"] < 1:
        raise exceptions.InvalidArgumentError("participants must be >= 1")


class HarnessOptions(Mapping):
    """
    Immutable settings of the simulated participants and experiment runners.

    Example::

        opts = HarnessOptions().with_values(participants=15, seed=42)
        opts["p_vis"]
    """

    def __init__(self, values=None):
        values = _set_options(DEFAULTS, **(values or {}))
        _check(values)
        self._values = values

    @classmethod
    def from_key_values(cls, key_values: Dict[str, str]) -> 'HarnessOptions':
        """Builds options from a parsed config file; unknown keys are rejected."""
        return cls(dict(key_values))

    def __repr__(self):
        return f"HarnessOptions({self._values!r})"

    def __getitem__(self, key):
        return self._values[key]

    def __iter__(self):
        return self._values.__iter__()

    def __len__(self):
        return self._values.__len__()

    def with_values(self, **modified) -> 'HarnessOptions':
        """Sets/updates options and returns a new object.

        Parameters:

            modified --
                A keyworded, variable-length argument list of harness
                options. ``None`` values are ignored so that unset CLI flags
                do not override the config file.

        Example::

            opts = HarnessOptions().with_values(sigma_subj=0.0)
        """
        updates = {k: v for k, v in modified.items() if v is not None}
        return HarnessOptions(_set_options(self._values, **updates))
