"""Error taxonomy shared by the whole pipeline.

Exit-code mapping used by the CLI:
    0  success
    2  rejected input (parse error or hypothesis failure), code in .code
    3  internal invariant falsified (would mean a bug or bad upstream data)
    4  subdivision budget exhausted
"""

from __future__ import annotations


class InputError(ValueError):
    """Invalid problem input; ``code`` is a stable machine-readable tag."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class InvariantError(AssertionError):
    """A promise made by the construction failed; aborting is the only honest option."""


class BudgetError(RuntimeError):
    """The fan-resolution loop did not terminate within the configured budget."""
