class HierLeakError(Exception):
    """Base error; ``code`` is a stable machine-readable tag."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


class ModelError(HierLeakError, ValueError):
    """Malformed distribution, kernel, or alphabet mismatch."""


class ConvergenceError(HierLeakError):
    pass


class InfeasibleError(HierLeakError):
    pass


class ResourceError(HierLeakError):
    """A codebook or enumeration would exceed its configured cap."""

    def __init__(self, code: str, message: str = "", suggestion: dict | None = None):
        super().__init__(code, message)
        self.suggestion = suggestion or {}
