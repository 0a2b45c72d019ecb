"""Shared exception types.

Input-contract violations (bad documents, bad flags) raise ParseError or
ValidationError and map to CLI exit code 2.  The remaining types signal
violated mathematical preconditions.
"""


class IllFormedMap(Exception):
    """A matrix does not carry source relations into target relations, or a
    would-be chain map fails to commute with the differentials."""


class StabilizationViolated(Exception):
    """A declared stabilization index is not backed by isomorphisms."""

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"structure map at level {index} is not an isomorphism")


class TorsionSource(Exception):
    """An operation requiring a degreewise-free source got relations."""


class NotCofibrant(Exception):
    """An operation requiring a degreewise-free complex got torsion."""


class PartitionTooSmall(Exception):
    """A prime partition misses primes occurring in the torsion scope."""

    def __init__(self, missing):
        self.missing = frozenset(missing)
        super().__init__(f"partition misses torsion primes {sorted(self.missing)}")


class CharacterizationMismatch(Exception):
    """Two supposedly equivalent characterizations disagreed: an
    implementation bug, never a property of the input."""


class ParseError(Exception):
    """Malformed document syntax."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


class ValidationError(Exception):
    """Well-formed syntax, mathematically invalid content."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")
