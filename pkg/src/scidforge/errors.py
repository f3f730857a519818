class ScidForgeError(Exception):
    """Base class for every error raised by the package."""


class ParamError(ScidForgeError, ValueError):
    pass
