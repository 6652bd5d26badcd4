import re

WORD_BOUNDARY = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")


def camel_to_snake_case(key):
    """Convert a config key from camel case (``pairBound``) to snake case (``pair_bound``)

    :param key: Key in camel case
    :type key: str
    :return: Key in snake case
    :rtype: str
    """
    return WORD_BOUNDARY.sub("_", key).lower()


def snake_to_camel_case(key):
    """Convert a config key from snake case back to the camel case used in config files

    :param key: Key in snake case
    :type key: str
    :return: Key in camel case
    :rtype: str
    """
    head, *rest = key.split("_")
    return head + "".join(part.capitalize() for part in rest)


def dict_to_snake_case(content):
    """Convert all camel-case keys and sub-keys in a config dict to snake case

    :param content: Dict with keys in camel case
    :type content: dict
    :return: Dict with keys in snake case
    :rtype: dict
    """
    return {
        camel_to_snake_case(key): dict_to_snake_case(value) if isinstance(value, dict) else value
        for key, value in content.items()
    }
