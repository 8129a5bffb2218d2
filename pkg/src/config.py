"""Configuration loading - YAML defaults with .env overrides."""
import os
import yaml
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

PROJECT_ROOT = Path(__file__).parent.parent
DEFAULT_CONFIG = "config/fei_config.yaml"


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load the numeric settings file.

    The path is taken from the argument, else from FEI_CONFIG (a .env file in
    the working directory is honoured), else config/fei_config.yaml.

    Args:
        config_path: Optional explicit path to a YAML file

    Returns:
        Dict of settings as parsed by yaml.safe_load
    """
    load_dotenv()
    path = Path(config_path or os.getenv("FEI_CONFIG", DEFAULT_CONFIG))
    if not path.is_absolute() and not path.exists():
        path = PROJECT_ROOT / path

    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")

    with open(path, 'r') as f:
        return yaml.safe_load(f) or {}


def get_setting(config: Dict[str, Any], dotted_key: str, default: Any = None) -> Any:
    """Read a nested key such as 'lex.truncation_bits', returning default when absent."""
    node: Any = config
    for part in dotted_key.split('.'):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node
