"""Run configuration files: flat INI sections with typed, range-checked
values, canonicalized into a config hash. Unknown sections or keys are
rejected so ablation grids stay diff-clean.
"""

import configparser
import hashlib
from dataclasses import dataclass

from .errors import ConfigError
from .train import TrainConfig

_BOOL = {"true": True, "false": False, "1": True, "0": False,
         "yes": True, "no": False}


def _bool(v):
    s = str(v).strip().lower()
    if s not in _BOOL:
        raise ConfigError(f"expected a boolean, got {v!r}")
    return _BOOL[s]


def _int_range(lo=None, hi=None):
    def conv(v):
        x = int(v)
        if lo is not None and x < lo:
            raise ConfigError(f"value {x} below minimum {lo}")
        if hi is not None and x > hi:
            raise ConfigError(f"value {x} above maximum {hi}")
        return x
    return conv


def _float_range(lo=None, hi=None, lo_open=False, hi_open=False):
    def conv(v):
        x = float(v)
        if lo is not None and (x <= lo if lo_open else x < lo):
            raise ConfigError(f"value {x} out of range (min {lo})")
        if hi is not None and (x >= hi if hi_open else x > hi):
            raise ConfigError(f"value {x} out of range (max {hi})")
        return x
    return conv


def _choice(*options):
    def conv(v):
        s = str(v).strip()
        if s not in options:
            raise ConfigError(f"expected one of {options}, got {v!r}")
        return s
    return conv


def _int_list(v):
    return [int(tok) for tok in str(v).replace(",", " ").split()]


SCHEMA = {
    "dataset": {
        "type": _choice("files", "synthetic"),
        "name": str,
        "root": str,
        "block_sizes": _int_list,
        "p_in": _float_range(0.0, 1.0),
        "p_out": _float_range(0.0, 1.0),
        "feature_dim": _int_range(1),
        "feature_noise": _float_range(0.0),
        "seed": int,
    },
    "views": {
        "k_nn": _int_range(1),
        "k_clusters": _int_range(1),
        "s": _int_range(1),
        "kmeans_iters": _int_range(1),
        "n_g": _int_range(0),
        "detector": str,
        "detector_v": _int_range(1),
        "detector_max_sweeps": _int_range(1),
        "use_a": _bool,
        "use_l": _bool,
        "use_g": _bool,
    },
    "augmentation": {
        "enabled": _bool,
        "tau": _float_range(0.0, lo_open=True),
        "theta": _float_range(0.0, 1.0, lo_open=True, hi_open=True),
    },
    "encoder": {
        "heads": _int_range(1),
        "d_hid": _int_range(1),
        "shygan": _bool,
        "lce": _bool,
        "ce": _bool,
        "de": _bool,
        "lc": _bool,
        "hd": _bool,
    },
    "netcl": {
        "enabled": _bool,
        "strategy": _choice("distance", "similarity"),
        "t": _int_range(1),
        "eta": _float_range(0.0, lo_open=True),
    },
    "trainer": {
        "lr": _float_range(0.0, lo_open=True),
        "dropout": _float_range(0.0, 1.0, hi_open=True),
        "epochs_max": _int_range(0),
        "patience": _int_range(1),
        "seed": int,
        "seeds": _int_list,
    },
}

REQUIRED = {"dataset": ("type",)}


@dataclass
class RunConfig:
    dataset: dict
    train_cfg: TrainConfig
    seeds: list
    config_hash: str


def parse_config(path):
    """Parse and validate an INI run config; returns a RunConfig."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file {path} not found or unreadable")
    values = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        values[section] = {}
        for key, raw in parser.items(section):
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            try:
                values[section][key] = SCHEMA[section][key](raw)
            except ConfigError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from None
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from None
    for section, keys in REQUIRED.items():
        for key in keys:
            if key not in values.get(section, {}):
                raise ConfigError(f"missing required key {key!r} in [{section}]")

    v = values.get("views", {})
    a = values.get("augmentation", {})
    e = values.get("encoder", {})
    n = values.get("netcl", {})
    t = values.get("trainer", {})
    detector_params = {}
    if "detector_v" in v:
        detector_params["v"] = v["detector_v"]
    if "detector_max_sweeps" in v:
        detector_params["max_sweeps"] = v["detector_max_sweeps"]
    cfg = TrainConfig(
        lr=t.get("lr", 0.001),
        dropout=t.get("dropout", 0.1),
        epochs_max=t.get("epochs_max", 1500),
        patience=t.get("patience", 100),
        seed=t.get("seed", 0),
        negative_strategy=n.get("strategy", "distance"),
        t=n.get("t", 25),
        eta=n.get("eta", 0.5),
        tau=a.get("tau", 0.2),
        theta=a.get("theta", 0.8),
        heads=e.get("heads", 2),
        d_hid=e.get("d_hid", 64),
        k_nn=v.get("k_nn", 50),
        k_clusters=v.get("k_clusters", 60),
        s=v.get("s", 2),
        kmeans_iters=v.get("kmeans_iters", 100),
        n_g=v.get("n_g", 3),
        detector=v.get("detector", "wolp"),
        detector_params=detector_params,
        use_view_a=v.get("use_a", True),
        use_view_l=v.get("use_l", True),
        use_view_g=v.get("use_g", True),
        use_augmentation=a.get("enabled", True),
        use_netcl=n.get("enabled", True),
        use_shygan=e.get("shygan", True),
        use_lce=e.get("lce", True),
        use_ce=e.get("ce", True),
        use_de=e.get("de", True),
        use_lc=e.get("lc", True),
        use_hd=e.get("hd", True),
    )
    seeds = t.get("seeds", list(range(10)))
    return RunConfig(dataset=values.get("dataset", {}), train_cfg=cfg,
                     seeds=seeds, config_hash=config_hash(values))


def config_hash(values):
    """sha256 over the canonicalized (sorted, normalized) key/value pairs."""
    lines = []
    for section in sorted(values):
        for key in sorted(values[section]):
            lines.append(f"{section}.{key}={values[section][key]!r}")
    return hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()


def load_dataset_from_config(run_cfg: RunConfig):
    from . import datasets

    spec = run_cfg.dataset
    if spec["type"] == "synthetic":
        return datasets.synthetic_sbm(
            block_sizes=spec.get("block_sizes", [30, 30]),
            p_in=spec.get("p_in", 0.3),
            p_out=spec.get("p_out", 0.02),
            feature_dim=spec.get("feature_dim", 8),
            feature_noise=spec.get("feature_noise", 0.5),
            seed=spec.get("seed", 0))
    name = spec.get("name")
    if not name:
        raise ConfigError("[dataset] name is required when type=files")
    return datasets.load_dataset_dir(name, root=spec.get("root"))
