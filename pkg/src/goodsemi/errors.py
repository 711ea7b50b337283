"""Exception hierarchy.

Every domain failure raised by the library derives from :class:`GoodSemiError`
and carries a short machine-readable ``code`` used by the CLI error JSON.
"""


class GoodSemiError(Exception):
    code = "error"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = {k: repr(v) if not isinstance(v, (int, str, list)) else v
                              for k, v in sorted(self.details.items())}
        return out


class EmptySet(GoodSemiError):
    code = "EmptySet"


class ConductorMissing(GoodSemiError):
    code = "ConductorMissing"


class DimensionMismatch(GoodSemiError):
    code = "DimensionMismatch"


class BadIndexSet(GoodSemiError):
    code = "BadIndexSet"


class NotGood(GoodSemiError):
    code = "NotGood"


class OmegaNotInS(GoodSemiError):
    code = "OmegaNotInS"


class OmegaNotPositive(GoodSemiError):
    code = "OmegaNotPositive"


class NotInSemigroup(GoodSemiError):
    code = "NotInSemigroup"


class NegativeCoordinate(GoodSemiError):
    code = "NegativeCoordinate"


class NotLocal(GoodSemiError):
    code = "NotLocal"


class NonTermination(GoodSemiError):
    code = "NonTermination"


class InvalidTree(GoodSemiError):
    code = "InvalidTree"


class MalformedTree(GoodSemiError):
    code = "MalformedTree"


class NotCompatible(GoodSemiError):
    code = "NotCompatible"


class NotAdmissible(GoodSemiError):
    code = "NotAdmissible"


class InvalidSequence(GoodSemiError):
    code = "InvalidSequence"


class InvalidHType(GoodSemiError):
    code = "InvalidHType"


class NotPlane(GoodSemiError):
    code = "NotPlane"


class InsufficientPrecision(GoodSemiError):
    code = "InsufficientPrecision"


class NotTransversal(GoodSemiError):
    code = "NotTransversal"


class IdenticalBranches(GoodSemiError):
    code = "IdenticalBranches"


class NoSuchK(GoodSemiError):
    code = "NoSuchK"


class ZeroComponent(GoodSemiError):
    code = "ZeroComponent"


class BoundTooSmall(GoodSemiError):
    code = "BoundTooSmall"
