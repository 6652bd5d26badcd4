import json

from kgraph.utils.case_conversion import dict_to_snake_case, snake_to_camel_case
from kgraph.utils.exceptions import ConfigError
from kgraph.utils.validate_value import validate_positive, validate_value

BOUND_PARAMS = ["depth", "pair_bound", "window", "takai_bound", "mce_bound"]
CHOICE_PARAMS = ["format", "method"]


def load_config_file(config_path, default_config):
    """Load the parameters from the config.json file at the specified path. Fall back to the
    default_config values for missing parameters

    :param config_path: Path to the config.json file
    :type config_path: str
    :param default_config: Default values to use when a parameter is not specified in config.json
    :type default_config: dict
    :return: Merged configuration
    :rtype: dict
    """
    with open(config_path, encoding="utf-8") as file:
        try:
            user_config = json.load(file)
        except json.JSONDecodeError as e:
            raise ConfigError(f'Config file "{config_path}" is not valid JSON: {e}') from e
    if not isinstance(user_config, dict):
        raise ConfigError(f'Config file "{config_path}" must contain a JSON object')

    # Defaults are copied so repeated loads never leak into each other
    config = dict(default_config)
    config.update(dict_to_snake_case(user_config))
    return config


def verify_config(config, default_config):
    """Verify that every key is known and every value is usable

    :param config: Configuration to check
    :type config: dict
    :param default_config: Reference configuration listing the known keys
    :type default_config: dict
    """
    for key in config:
        if key not in default_config:
            raise ConfigError(f'Unknown config key "{snake_to_camel_case(key)}"')
    try:
        for key in BOUND_PARAMS:
            validate_positive(config[key], key)
        for key in CHOICE_PARAMS:
            validate_value(config[key], key)
    except ValueError as e:
        raise ConfigError(str(e)) from e
