#!/usr/bin/env python3
"""
Solver configuration - JSON file with defaults merged underneath
"""

import json
import logging
from dataclasses import dataclass, asdict, fields
from pathlib import Path
from typing import Dict, Optional

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = "solver_config.json"

DEFAULT_CONFIG = {
    # bound on the widest subset layer the oracle enumerates, C(pool, min(k, pool // 2))
    "oracle_max_subsets": 10_000_000,
    "float_tolerance": 1e-9,
    "cluster_tolerance": 1e-6,
    "revd_max_nodes": 200_000,
    "max_generated_vertices": 1_000_000,
    "bench_workers": 1,
    "log_level": "INFO",
}


@dataclass
class SolverConfig:
    """Typed view over solver_config.json"""
    oracle_max_subsets: int = DEFAULT_CONFIG["oracle_max_subsets"]
    float_tolerance: float = DEFAULT_CONFIG["float_tolerance"]
    cluster_tolerance: float = DEFAULT_CONFIG["cluster_tolerance"]
    revd_max_nodes: int = DEFAULT_CONFIG["revd_max_nodes"]
    max_generated_vertices: int = DEFAULT_CONFIG["max_generated_vertices"]
    bench_workers: int = DEFAULT_CONFIG["bench_workers"]
    log_level: str = DEFAULT_CONFIG["log_level"]

    @classmethod
    def from_dict(cls, data: Dict) -> "SolverConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            logger.warning(f"Ignoring unknown config keys: {', '.join(unknown)}")
        return cls(**{key: value for key, value in data.items() if key in known})

    def to_dict(self) -> Dict:
        return asdict(self)


def load_config(config_file: Optional[str] = None, create_missing: bool = False) -> SolverConfig:
    """Load the config file, merging defaults under its keys.

    With ``create_missing`` a default file is written when none exists, which is what
    the command-line entry point does on first run.
    """
    config_path = Path(config_file or DEFAULT_CONFIG_FILE)

    if config_path.exists():
        with open(config_path, 'r') as f:
            config = json.load(f)
        return SolverConfig.from_dict({**DEFAULT_CONFIG, **config})

    if create_missing:
        with open(config_path, 'w') as f:
            json.dump(DEFAULT_CONFIG, f, indent=2)
        logger.info(f"Created config file: {config_path}")
    return SolverConfig.from_dict(dict(DEFAULT_CONFIG))
