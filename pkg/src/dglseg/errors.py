"""Exception types shared across the package."""


class DglsegError(Exception):
    """Base class for all package errors."""


class InputError(DglsegError, ValueError):
    """Invalid user-supplied data (pixel sets, labels, dimensions)."""


class ConfigError(DglsegError, ValueError):
    """Invalid configuration (quantization spec, budgets, parameters)."""


class StateError(DglsegError, RuntimeError):
    """Operation requested in a state that cannot serve it."""


class DatasetError(DglsegError):
    """Dataset file missing, unreadable, or malformed."""
