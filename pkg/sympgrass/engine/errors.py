# sympgrass/engine/errors.py
# Domain exceptions raised by the engine.
#
# Every error carries the offending quantity (value) and the threshold it was
# measured against (limit) so suites can record both in the trial report.


class SympGrassError(Exception):
    def __init__(self, message, value=None, limit=None):
        super().__init__(message)
        self.value = value
        self.limit = limit


# ── Input shape / numerical health ───────────────────────────────────────────

class InvalidInput(SympGrassError):
    pass


class NotPSD(SympGrassError):
    pass


class SingularInput(SympGrassError):
    pass


class EmptyRange(SympGrassError):
    pass


class RankDeficient(SympGrassError):
    pass


# ── Geometry ─────────────────────────────────────────────────────────────────

class NotLagrangian(SympGrassError):
    pass


class NotIdempotent(SympGrassError):
    pass


class NotTransversal(SympGrassError):
    pass


class OutOfSectionRadius(SympGrassError):
    pass


class InconsistentTangent(SympGrassError):
    """Lift constraint without an exact solution. Never expected for genuine tangents."""


class RefineGrid(SympGrassError):
    pass


# ── Experiments / CLI ────────────────────────────────────────────────────────

class UsageError(SympGrassError):
    pass


class ExportError(SympGrassError, OSError):
    pass
