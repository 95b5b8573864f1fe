"""Exception hierarchy shared across the engine.

Every error carries a stable ``code`` string so the HTTP layer and the CLI
can map failures without string-matching messages.
"""


class AtlasError(Exception):
    code = "internal"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__ or self.code)
        self.message = message or self.code


# --- gateway ---------------------------------------------------------------

class EmptyInput(AtlasError):
    code = "empty_input"


class ProviderUnavailable(AtlasError):
    code = "provider_unavailable"


class DimensionMismatch(AtlasError):
    code = "dimension_mismatch"


class EmptyResponse(AtlasError):
    code = "empty_response"


# --- reducer ---------------------------------------------------------------

class TooFewPoints(AtlasError):
    code = "too_few_points"


class NonFiniteInput(AtlasError):
    code = "non_finite_input"


class IoFailure(AtlasError):
    code = "io_failure"


class BadMagic(AtlasError):
    code = "bad_magic"


class UnsupportedVersion(AtlasError):
    code = "unsupported_version"


# --- pipeline --------------------------------------------------------------

class UnknownFormat(AtlasError):
    code = "unknown_format"


class PipelineAborted(AtlasError):
    code = "pipeline_aborted"


# --- cartography -----------------------------------------------------------

class NoPoints(AtlasError):
    code = "no_points"


# --- synthesis -------------------------------------------------------------

class UnknownProject(AtlasError):
    code = "unknown_project"


class MalformedReply(AtlasError):
    code = "malformed_reply"


class InvalidRecipe(AtlasError):
    code = "invalid_recipe"


# --- service ---------------------------------------------------------------

class MissingArtifact(AtlasError):
    code = "missing_artifact"


class VersionMismatch(AtlasError):
    code = "version_mismatch"


class ValidationFailed(AtlasError):
    code = "validation_failed"


class EmptyQuery(AtlasError):
    code = "empty_query"


class InvalidWindow(AtlasError):
    code = "invalid_window"


class EmptyRegion(AtlasError):
    code = "empty_region"
