"""
This file contains all custom exceptions found in HPC Sentry.
"""

from typing import Any, Optional


class SentryError(Exception):
    """
    Global error for HPC Sentry.
    """


class ConfigurationError(SentryError):
    """Exception raised when a scheme, variant or configuration file cannot be resolved."""

    pass


class TargetAbortError(SentryError):
    """Exception raised when an instrumented target gives up before producing a signature."""

    def __init__(
        self, scheme: str, reason: str, partial: Optional[Any] = None
    ) -> None:
        super().__init__(f"{scheme} target aborted: {reason}")
        self.scheme = scheme
        self.reason = reason
        self.partial = partial


class SignatureCollectionError(SentryError):
    """Exception raised when counter signatures cannot be collected from the given inputs."""

    pass


class FeatureExtractionError(SentryError):
    """Exception raised when a feature or counter selection cannot be computed from the provided data."""

    pass


class SolverConvergenceError(SentryError):
    """Exception raised when the one-class SVM solver reaches its iteration cap before satisfying the KKT tolerance."""

    def __init__(self, iterations: int, kkt_violation: float) -> None:
        super().__init__(
            f"Solver stopped after {iterations} iterations with KKT violation {kkt_violation:.3e}"
        )
        self.iterations = iterations
        self.kkt_violation = kkt_violation


class CrossValidationError(SentryError):
    """Exception raised when there are not enough distinct seeds to build the cross validation folds."""

    pass


class DigestMismatchError(SentryError):
    """Exception raised when artifacts produced under different configurations are combined."""

    pass


class PipelineStageError(SentryError):
    """Exception raised when a pipeline stage fails. Artifacts written by earlier stages are kept."""

    def __init__(self, stage: str, cause: BaseException) -> None:
        super().__init__(f"Stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
