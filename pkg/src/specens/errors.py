"""Exception types shared across the pipeline."""


class InputError(ValueError):
    """Input data (a file, a matrix) is malformed or cannot be parsed."""


class ConfigError(ValueError):
    """A parameter lies outside its documented domain."""


class ContractError(ValueError):
    """Two pipeline objects disagree on shape, length, or value range."""


class DegenerateInputError(ValueError):
    """The input admits no meaningful answer, e.g. fewer distinct points than clusters."""


class NumericError(RuntimeError):
    """A numeric routine failed or produced unusable output."""


class StageError(RuntimeError):
    """Wraps an error raised inside a named pipeline stage."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause
