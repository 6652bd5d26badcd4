import json

valid_values = {
    "format": ["json", "text"],
    "method": ["pv", "orbits", "both"],
    "gallery": [
        "commuting_loops",
        "cycle_with_rotation",
        "delta_torus",
        "delta_window",
        "disjoint_loops",
        "line_window_shift",
        "m_loops",
        "omega_window",
        "rank2_bratteli",
    ],
}


def validate_value(value, param_name):
    """Raise an exception if the specified value is not an allowed value

    :param value: Value to validate
    :type value: str
    :param param_name: Value domain (``"format"``, ``"method"`` or ``"gallery"``)
    :type param_name: str
    """
    if value not in valid_values[param_name]:
        valid_values_str = json.dumps(valid_values[param_name])
        raise ValueError(
            f'Value "{value}" is not a valid {param_name}. It must be set to one of '
            f"{valid_values_str}"
        )


def validate_positive(value, param_name):
    """Raise an exception unless the value is a positive integer

    :param value: Value to validate
    :type value: int
    :param param_name: Name of the parameter, used in the error message
    :type param_name: str
    """
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValueError(
            f'Value "{value}" is not a valid {param_name}. It must be a positive integer'
        )
