import logging
import os

import yaml

from src.constants import Constants

logger = logging.getLogger(__name__)

PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))


def load_config(config_file=Constants.CONFIG_FILE):
    """
    Load a YAML file; relative paths are resolved against the project root.
    A malformed file is logged and yields an empty dict.
    """
    if not os.path.isabs(config_file):
        config_file = os.path.join(PROJECT_ROOT, config_file)
    with open(config_file, 'r') as stream:
        try:
            config = yaml.safe_load(stream) or {}
        except yaml.YAMLError as exc:
            logger.error("Error loading YAML %s: %s", config_file, exc)
            config = {}
    return config


def config_section(name: str, config_file=Constants.CONFIG_FILE) -> dict:
    return load_config(config_file).get(name) or {}


if __name__ == "__main__":
    print(load_config())
