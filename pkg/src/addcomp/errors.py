"""Exception types raised across the package."""


class AddCompError(Exception):
    """Base class for all package errors."""


class EmptyU(AddCompError, ValueError):
    pass


class ScheduleGap(AddCompError):
    def __init__(self, k: int):
        super().__init__(f"no prime strictly between {k}^3 and {k + 1}^3")
        self.k = k


class InsufficientSchedule(AddCompError):
    """The prime schedule is too short to certify the requested bound."""


class InvalidExplicitU(AddCompError, ValueError):
    pass


class BlockInfeasible(AddCompError):
    def __init__(self, k: int, u_k: int, found: int, needed: int):
        super().__init__(
            f"block {k}: only {found} of {needed} admissible elements in ({u_k}, {2 * u_k})"
        )
        self.k, self.u_k, self.found, self.needed = k, u_k, found, needed


class ConstructionFailed(AddCompError):
    def __init__(self, k: int, u_k: int, reason: str = "retries exhausted"):
        super().__init__(f"block {k} failed at u_k={u_k}: {reason}")
        self.k, self.u_k = k, u_k


class BelowMinimum(AddCompError, ValueError):
    pass


class LimitExceeded(AddCompError):
    def __init__(self, x: int, limit: int):
        super().__init__(f"x={x} exceeds enumeration limit {limit} (raise with --limit or ADDCOMP_LIMIT)")
        self.x, self.limit = x, limit


class ZeroDenominator(AddCompError, ZeroDivisionError):
    pass


class DegenerateA(AddCompError, ValueError):
    pass


class OutOfGuaranteedRange(AddCompError, ValueError):
    pass


class WitnessInvalid(AddCompError):
    def __init__(self, n: int, reason: str):
        super().__init__(f"witness for n={n} invalid: {reason}")
        self.n = n


class CheckpointViolation(AddCompError):
    pass


class FormatError(AddCompError):
    pass


class IntegrityError(AddCompError):
    pass


class InvariantError(AddCompError):
    def __init__(self, report):
        failed = [c.name for c in report.checks if not c.passed]
        super().__init__("archived pair violates invariants: " + ", ".join(failed))
        self.report = report
