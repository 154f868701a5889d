import logging
from typing import Any, Dict

import json5

from kmjack.errors import ConfigurationError

logger = logging.getLogger(__name__)


class ParameterParser:
    """Shared utility for parsing JSON5 configuration documents and option strings."""

    @staticmethod
    def parse_params(params: str) -> Dict[str, Any]:
        """
        Parse parameters as JSON5.

        Args:
            params: Raw JSON5 text (a config file body or an inline option)

        Returns:
            Dict containing parsed parameters

        Raises:
            ConfigurationError: If parameters cannot be parsed or are not an object
        """
        logger.debug(f"Parsing params: {params[:200]}")

        # Handle empty or missing params gracefully
        if not params or not params.strip():
            return {}

        try:
            parsed_params = json5.loads(params)
        except Exception as parse_error:
            raise ConfigurationError(f"Invalid parameters format: {parse_error}")
        if not isinstance(parsed_params, dict):
            raise ConfigurationError(
                f"Expected an object at top level, got {type(parsed_params).__name__}"
            )
        return parsed_params

    @staticmethod
    def get_required_param(parsed_params: Dict[str, Any], key: str) -> Any:
        """
        Get a required parameter, raising ConfigurationError if missing.

        Args:
            parsed_params: Dictionary of parsed parameters
            key: Parameter key to retrieve

        Returns:
            Parameter value

        Raises:
            ConfigurationError: If required parameter is missing
        """
        value = parsed_params.get(key)
        if value is None:
            raise ConfigurationError(f"{key} parameter is required")
        return value

    @staticmethod
    def get_int_list(parsed_params: Dict[str, Any], key: str, default: list[int]) -> list[int]:
        """Get a list of integers, accepting a single integer as a one-element list."""
        value = parsed_params.get(key, default)
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            value = [value]
        try:
            values = [int(v) for v in value]
        except (TypeError, ValueError):
            raise ConfigurationError(f"{key} must be a list of integers, got {value!r}")
        if any(v != float(w) for v, w in zip(values, value)):
            raise ConfigurationError(f"{key} must hold whole numbers, got {value!r}")
        return values
