"""Run configuration: INI-style files with typed values and round-tripping.

A RunConfig is a mapping of sections to key/value pairs.  Values are stored
as JSON fragments inside the INI file, so numbers, lists and booleans
round-trip exactly: parse -> serialize -> parse is idempotent.
"""

from __future__ import annotations

import configparser
import csv
import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path


class ConfigError(ValueError):
    pass


_DEFAULTS: dict[str, dict] = {
    "run": {"seed": 1_518_783_796, "threads": 1, "strict": False},
    "band": {"thetas": None, "n_thetas": 25, "spacing": 0.15, "tol": 1e-8},
    "field": {"preset": "flat-quadratic", "theta0": 0.7853981633974483,
              "a": 0.5, "b": 1.0},
    "patch": {"radius": 1.2, "grid_step": 0.06, "t_max": 0.5},
    "campaign": {"h_list": [0.1, 0.07, 0.05], "n_levels": 2,
                 "halfwidth": 2.0, "tol": 1e-8},
    "predict": {"h_list": [0.1, 0.07, 0.05], "n_max": 3,
                "C0": None, "C1": None},
    "model": {"d0": 1.3, "h": 0.01, "n_max": 5, "n_trials": 5,
              "p_eff0": 0.2},
    "paths": {"band_curve": None, "out": "out"},
}


@dataclass
class RunConfig:
    """Typed configuration sections with defaults filled in."""

    sections: dict[str, dict] = dc_field(default_factory=dict)

    def __post_init__(self):
        merged = {}
        for name, defaults in _DEFAULTS.items():
            merged[name] = dict(defaults)
            extra = self.sections.get(name, {})
            unknown = set(extra) - set(defaults)
            if unknown:
                raise ConfigError(f"unknown keys {sorted(unknown)} in "
                                  f"section [{name}]")
            merged[name].update(extra)
        unknown_sections = set(self.sections) - set(_DEFAULTS)
        if unknown_sections:
            raise ConfigError(f"unknown sections {sorted(unknown_sections)}")
        self.sections = merged

    def __getitem__(self, name: str) -> dict:
        return self.sections[name]

    @classmethod
    def from_ini(cls, path) -> "RunConfig":
        parser = configparser.ConfigParser()
        parser.optionxform = str          # keys are case-sensitive
        read = parser.read(path)
        if not read:
            raise ConfigError(f"config file not found: {path}")
        sections = {}
        for name in parser.sections():
            out = {}
            for key, raw in parser[name].items():
                try:
                    out[key] = json.loads(raw)
                except json.JSONDecodeError:
                    raise ConfigError(
                        f"value for {key!r} in [{name}] is not a JSON "
                        f"fragment: {raw!r}") from None
            sections[name] = out
        return cls(sections)

    def to_ini(self, path) -> None:
        parser = configparser.ConfigParser()
        parser.optionxform = str
        for name, kv in self.sections.items():
            parser[name] = {k: json.dumps(v) for k, v in kv.items()}
        with open(path, "w") as fh:
            parser.write(fh)

    def resolved(self) -> dict:
        """Plain-dict snapshot for embedding in output JSON."""
        return {name: dict(kv) for name, kv in self.sections.items()}


def write_csv(path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_json(path, payload: dict, config: RunConfig,
               schema: int = 1) -> None:
    doc = {"schema": schema, "config": config.resolved(), **payload}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
