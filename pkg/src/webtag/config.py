"""Run configuration: sectioned key/value config files with CLI overrides.

Config files use INI-style sections, one per pipeline stage::

    [corpus]
    path = data/demo/corpus.jsonl
    catalog = data/demo/topics.txt

    [expand]
    n = 20

Every knob can also be given as a command-line flag, which wins over the
file value. All randomness flows from the explicit `seed` value; there is
no wall-clock seeding anywhere.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields as dataclass_fields
from pathlib import Path


class ConfigError(ValueError):
    pass


# (section, key) in config files for each RunConfig field
_CONFIG_KEYS = {
    "corpus": ("corpus", "path"),
    "catalog": ("corpus", "catalog"),
    "stoplist": ("corpus", "stoplist"),
    "index": ("index", "path"),
    "fields": ("index", "fields"),
    "n": ("expand", "n"),
    "method": ("extract", "method"),
    "methods": ("eval", "methods"),
    "metrics": ("eval", "metrics"),
    "variant": ("extract", "variant"),
    "variants": ("eval", "variants"),
    "k": ("extract", "k"),
    "k_grid": ("eval", "k"),
    "n_grid": ("eval", "n_grid"),
    "stem": ("eval", "stem"),
    "task": ("eval", "task"),
    "model": ("abstract", "model"),
    "rank": ("abstract", "rank"),
    "topics": ("abstract", "topics"),
    "iterations": ("abstract", "iterations"),
    "top": ("abstract", "top"),
    "linkage": ("denoise", "linkage"),
    "cloud_k": ("denoise", "cloud_k"),
    "seed": ("run", "seed"),
    "out": ("run", "out"),
}

_INT_FIELDS = {"n", "k", "rank", "topics", "iterations", "top", "cloud_k", "seed"}
_LIST_FIELDS = {"methods", "variants", "fields", "metrics"}
_INT_LIST_FIELDS = {"k_grid", "n_grid"}
_BOOL_FIELDS = {"stem"}
_PATH_FIELDS = {"corpus", "catalog", "stoplist", "index", "out"}


@dataclass
class RunConfig:
    corpus: Path | None = None
    catalog: Path | None = None
    stoplist: Path | None = None
    index: Path | None = None
    out: Path = Path("out")
    fields: tuple[str, ...] = ("title", "abstract")
    n: int = 20
    k: int = 10
    k_grid: tuple[int, ...] = (5, 10, 15, 20, 25)
    n_grid: tuple[int, ...] = ()
    method: str = "textrank"
    methods: tuple[str, ...] = ("textrank", "rake", "catalog")
    metrics: tuple[str, ...] = ()  # empty selects every applicable metric
    variant: str = "both"
    variants: tuple[str, ...] = ("abstract", "both")
    model: str = "tfidf"
    rank: int = 2
    topics: int = 50
    iterations: int = 500
    top: int = 10
    linkage: str = "average"
    cloud_k: int = 10
    seed: int = 0
    stem: bool = True
    task: str = "extract"

    def require_paths(self, *names: str) -> None:
        """Check that the named path options are set and exist."""
        for name in names:
            value = getattr(self, name)
            if value is None:
                raise ConfigError(f"missing required option: --{name}")
            if not Path(value).exists():
                raise ConfigError(f"--{name}: path does not exist: {value}")

    def validate(self) -> None:
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.k < 1 or any(k < 1 for k in self.k_grid):
            raise ConfigError("k values must be >= 1")
        if self.stoplist is not None and not Path(self.stoplist).exists():
            raise ConfigError(f"stoplist file does not exist: {self.stoplist}")


def _parse_value(name: str, raw: str):
    raw = raw.strip()
    if name in _INT_FIELDS:
        return int(raw)
    if name in _INT_LIST_FIELDS:
        return tuple(int(part) for part in raw.replace(" ", "").split(",") if part)
    if name in _LIST_FIELDS:
        return tuple(part.strip() for part in raw.split(",") if part.strip())
    if name in _BOOL_FIELDS:
        if raw.lower() in ("on", "true", "yes", "1"):
            return True
        if raw.lower() in ("off", "false", "no", "0"):
            return False
        raise ConfigError(f"{name}: expected on/off, got {raw!r}")
    if name in _PATH_FIELDS:
        return Path(raw)
    return raw


def load_config(path: str | Path) -> dict[str, object]:
    """Read a config file into RunConfig field values."""
    parser = configparser.ConfigParser()
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise ConfigError(f"cannot read config file: {path}")
    values: dict[str, object] = {}
    for name, (section, key) in _CONFIG_KEYS.items():
        if parser.has_option(section, key):
            try:
                values[name] = _parse_value(name, parser.get(section, key))
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from exc
    return values


def merge_config(args_namespace, config_file: str | None) -> RunConfig:
    """File values first, then any non-None CLI flags on top of defaults."""
    values: dict[str, object] = {}
    if config_file:
        values.update(load_config(config_file))
    known = {f.name for f in dataclass_fields(RunConfig)}
    for name in known:
        flag = getattr(args_namespace, name, None)
        if flag is not None:
            values[name] = _parse_value(name, flag) if isinstance(flag, str) else flag
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg
