"""Exception types shared across the package."""


class PfasfabError(Exception):
    """Base class for all library errors."""


class UnknownProcessError(PfasfabError):
    """A process id did not resolve in the catalog."""

    def __init__(self, process_id, known_ids):
        self.process_id = process_id
        self.known_ids = tuple(known_ids)
        super().__init__(
            f"unknown process {process_id!r}; known processes: "
            + ", ".join(self.known_ids)
        )


class ProcessCollisionError(PfasfabError):
    """Attempt to register a process under an id that already exists."""


class InvalidProcessError(PfasfabError, ValueError):
    """A process record violates a field invariant."""


class DomainError(PfasfabError, ValueError):
    """A numeric input is outside its valid domain."""


class StackValidationError(PfasfabError):
    """One or more stack invariants are violated.

    Carries the complete list of violations, each naming the offending
    layer and the rule it broke.
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        detail = "; ".join(
            f"{v.layer}: [{v.rule}] {v.message}" for v in self.violations
        )
        super().__init__(f"{len(self.violations)} stack violation(s): {detail}")


class UnknownTargetError(PfasfabError):
    """A sweep or SoC target does not name a BEOL layer of the stack."""


class MissingOverheadError(PfasfabError):
    """A block is constrained below its table of area-overhead factors."""


class TrendReferenceError(PfasfabError):
    """The reference node of a trend series is missing or has value zero."""


class ConfigError(PfasfabError):
    """A config document failed to parse or validate.

    ``entries`` is a list of (location, message) pairs, where location is a
    field path such as ``design.yield`` or a line/column for syntax errors.
    """

    def __init__(self, entries):
        self.entries = tuple(entries)
        detail = "; ".join(f"{loc}: {msg}" for loc, msg in self.entries)
        super().__init__(f"invalid config: {detail}")
