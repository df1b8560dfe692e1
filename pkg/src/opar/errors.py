class InvalidInputError(ValueError):
    """An operation was called with arguments outside its domain."""


class ConfigError(ValueError):
    """A scenario configuration is malformed or violates an invariant."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
