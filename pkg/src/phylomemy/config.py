"""Build configuration: the knobs of the whole reconstruction pipeline.

Read from a TOML file or assembled from CLI flags; every value is echoed
into the export metadata so each artifact is self-describing.
"""

from __future__ import annotations

import datetime as dt
import os
from dataclasses import dataclass, field, asdict
from typing import Optional

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

__all__ = ["BuildConfig", "load_config", "ConfigError"]


class ConfigError(ValueError):
    pass


@dataclass
class BuildConfig:
    corpus: str = ""
    format: str = "csv"  # csv | jsonl
    rootlist: str = ""
    unit: str = "year"  # week | month | year
    length: int = 1
    origin: str = ""  # ISO date; defaults to the earliest document
    edge_threshold: float = 0.1
    symmetrize: str = "max"  # max | min
    mode: str = "cliques"  # cliques | itemsets
    min_support: int = 2
    keep_singletons: bool = False
    max_cliques: int = 100_000
    window: int = 1
    floor: float = 0.0
    all_above_floor: bool = False
    levels: list[float] = field(default_factory=lambda: [0.5])
    sea_mode: str = "adaptive"  # adaptive | fixed
    fixed_delta: Optional[float] = None
    min_periods: int = 2
    output: str = "phylo.json"
    jobs: int = 1
    diagnostics: bool = False

    def origin_date(self) -> Optional[dt.date]:
        return dt.date.fromisoformat(self.origin) if self.origin else None

    def echo(self) -> dict:
        """Config as plain JSON-serializable values for export metadata.

        Execution-only knobs (output path, worker count, diagnostics) are
        left out: they cannot change the result and their inclusion would
        break byte-identical exports across equivalent runs.
        """
        data = asdict(self)
        for key in ("output", "jobs", "diagnostics"):
            data.pop(key)
        data["fixed_delta"] = self.fixed_delta if self.fixed_delta is not None else "none"
        return data

    def validate(self) -> list[str]:
        """Full static validation; the error list is the result."""
        errors: list[str] = []
        if not self.corpus:
            errors.append("corpus path is required")
        elif not os.path.isfile(self.corpus):
            errors.append(f"corpus file not found: {self.corpus}")
        if not self.rootlist:
            errors.append("rootlist path is required")
        elif not os.path.isfile(self.rootlist):
            errors.append(f"rootlist file not found: {self.rootlist}")
        if self.format not in ("csv", "jsonl"):
            errors.append(f"unknown corpus format {self.format!r}")
        if self.unit not in ("week", "month", "year"):
            errors.append(f"unknown period unit {self.unit!r}")
        if self.length < 1:
            errors.append("period length must be >= 1")
        if self.origin:
            try:
                dt.date.fromisoformat(self.origin)
            except ValueError:
                errors.append(f"origin is not an ISO date: {self.origin!r}")
        if not 0.0 <= self.edge_threshold <= 1.0:
            errors.append("edge_threshold must lie in [0, 1]")
        if self.symmetrize not in ("max", "min"):
            errors.append(f"unknown symmetrize rule {self.symmetrize!r}")
        if self.mode not in ("cliques", "itemsets"):
            errors.append(f"unknown clustering mode {self.mode!r}")
        if self.mode == "itemsets" and self.min_support < 1:
            errors.append("min_support must be >= 1")
        if self.window < 1:
            errors.append("window must be >= 1")
        if not 0.0 <= self.floor <= 1.0:
            errors.append("floor must lie in [0, 1]")
        if not self.levels:
            errors.append("at least one level is required")
        for lam in self.levels:
            if not 0.0 <= lam <= 1.0:
                errors.append(f"level {lam} must lie in [0, 1]")
        if self.sea_mode not in ("adaptive", "fixed"):
            errors.append(f"unknown sea_mode {self.sea_mode!r}")
        if self.sea_mode == "fixed":
            if self.fixed_delta is None or not 0.0 <= self.fixed_delta <= 1.0:
                errors.append("fixed sea_mode requires fixed_delta in [0, 1]")
        if self.min_periods < 1:
            errors.append("min_periods must be >= 1")
        if self.jobs < 1:
            errors.append("jobs must be >= 1")
        if not self.output:
            errors.append("output path is required")
        return errors


def load_config(path: str) -> BuildConfig:
    """Load a TOML config file (flat keys matching BuildConfig fields)."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    known = {f for f in BuildConfig.__dataclass_fields__}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if "levels" in data and not isinstance(data["levels"], list):
        data["levels"] = [data["levels"]]
    return BuildConfig(**data)
