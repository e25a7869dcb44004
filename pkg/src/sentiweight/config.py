"""Run configuration: defaults, config file, environment, manifest.

Precedence, lowest first: built-in defaults, environment variables (paths
only), config file, command-line flags.

The config file is INI with a single ``[sentiweight]`` section::

    [sentiweight]
    lexicon = data/SentiWordNet_3.0.0.txt
    corpus = data/finegrained.jsonl
    seed = 42
    generations = 50
    logistic_epochs = 800
"""
from __future__ import annotations

import configparser
import json
import os
from dataclasses import asdict, dataclass, field, fields

from . import __version__
from .classifiers import HyperParams
from .optimizer import ESConfig

MANIFEST_FORMAT_VERSION = 1
ENV_LEXICON = "SENTIWEIGHT_LEXICON"
ENV_CORPUS = "SENTIWEIGHT_CORPUS"
SECTION = "sentiweight"


@dataclass
class RunConfig:
    lexicon: str | None = None
    corpus: str | None = None
    aggregation_mode: str = "rank-weighted"
    level: str = "document"
    algorithm: str = "svm"
    k: int = 10
    seed: int = 42
    recompute_doc_ratios: bool = False
    jobs: int = 1
    hyper: HyperParams = field(default_factory=HyperParams)
    es: ESConfig = field(default_factory=ESConfig)
    outputs: dict = field(default_factory=dict)

    def manifest(self, command: str) -> dict:
        return {
            "format_version": MANIFEST_FORMAT_VERSION,
            "package_version": __version__,
            "command": command,
            "lexicon": self.lexicon,
            "corpus": self.corpus,
            "aggregation_mode": self.aggregation_mode,
            "level": self.level,
            "algorithm": self.algorithm,
            "k": self.k,
            "seed": self.seed,
            "recompute_doc_ratios": self.recompute_doc_ratios,
            "hyper": asdict(self.hyper),
            "es": self.es.to_dict(),
            "outputs": dict(self.outputs),
        }

    def manifest_lines(self, command: str) -> list[str]:
        return [f"manifest: {json.dumps(self.manifest(command), sort_keys=True)}"]


_TOP = {f.name: f.type for f in fields(RunConfig) if f.name not in ("hyper", "es", "outputs")}
_HYPER = {f.name for f in fields(HyperParams)}
# ES keys in the config file use the command-line spelling where they differ
_ES_ALIASES = {"lambda": "lam", "fitness": "fitness_mode"}
_ES = {f.name for f in fields(ESConfig)}


def _coerce(value: str, like):
    if isinstance(like, bool):
        return value.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(like, int):
        return int(value)
    if isinstance(like, float):
        return float(value)
    return value


def read_config_file(path) -> dict:
    """Flat key/value mapping from the ``[sentiweight]`` section."""
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    if not parser.has_section(SECTION):
        raise ValueError(f"{path}: missing [{SECTION}] section")
    return dict(parser.items(SECTION))


def resolve(file_values: dict, flags: dict) -> RunConfig:
    """Merge config-file values and non-None command-line flags over defaults."""
    base = RunConfig()
    top = {"lexicon": os.environ.get(ENV_LEXICON), "corpus": os.environ.get(ENV_CORPUS)}
    top = {k: v for k, v in top.items() if v}
    hyper = asdict(base.hyper)
    es = base.es.to_dict()

    def put(key: str, value, from_file: bool):
        key = key.replace("-", "_")
        es_key = _ES_ALIASES.get(key, key)
        if key in _TOP:
            top[key] = _coerce(value, getattr(base, key) if getattr(base, key) is not None else "") \
                if from_file else value
        elif key in _HYPER:
            hyper[key] = _coerce(value, hyper[key]) if from_file else value
        elif es_key in _ES:
            es[es_key] = _coerce(value, es[es_key]) if from_file else value
        else:
            raise ValueError(f"unknown configuration key {key!r}")

    for key, value in file_values.items():
        put(key, value, True)
    for key, value in flags.items():
        if value is not None:
            put(key, value, False)
    cfg = RunConfig(**top, hyper=HyperParams(**hyper))
    # all randomness flows from the one run seed
    es["seed"] = cfg.seed
    cfg.es = ESConfig(**es)
    return cfg
