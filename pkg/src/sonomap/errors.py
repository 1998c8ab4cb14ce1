"""Exception types shared across the package."""

from __future__ import annotations


class SonomapError(Exception):
    """Base class for package-specific failures."""


class CurveFitError(SonomapError):
    """The low-dimensional similarity curve fit did not converge."""


class AtlasValidationError(SonomapError):
    """An atlas document violates a structural invariant.

    The message names the first violated invariant.
    """


class ProviderError(SonomapError):
    """A generative provider call failed.

    ``provider`` is the role name of the failing provider (e.g.
    "describe_concept"), so pipeline errors are stage-tagged.
    """

    def __init__(self, provider: str, message: str):
        super().__init__(f"[{provider}] {message}")
        self.provider = provider


class ProviderTimeoutError(ProviderError):
    """A provider call exceeded its timeout."""
