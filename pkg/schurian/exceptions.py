from typing import List, Optional


class SchurianError(Exception):
    """Base error; exit_code is the command-line status it maps to"""

    exit_code = 2

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class MalformedInputError(SchurianError, ValueError):
    """Input that does not describe a well-formed object"""


class UnknownObjectError(MalformedInputError):
    """Object name not present in the category"""


class CompositionError(SchurianError, ValueError):
    """Morphisms that cannot be composed"""


class InvalidCategoryError(SchurianError, ValueError):
    """Category data violating the Schurian axioms"""

    def __init__(self, detail: str, violations: Optional[List] = None):
        super().__init__(detail)
        self.violations = violations or []


class DisconnectedError(SchurianError):
    """Operation requires a connected category or complex"""


class UnsupportedGroupError(SchurianError):
    """No decision procedure for this kind of grading group"""


class UndecidableTargetError(UnsupportedGroupError):
    """Equality in a presented group that is not a literal relator identity"""


class NoConnectorSetError(SchurianError):
    """Some object cannot be reached by a walk of degree 1"""

    exit_code = 1


class MathematicalFailure(SchurianError):
    """A verification that came out negative"""

    exit_code = 1


class VerificationError(MathematicalFailure):
    """An internal consistency check failed"""


class InternalError(SchurianError):
    """Unexpected failure inside a command"""

    exit_code = 1
