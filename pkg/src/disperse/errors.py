"""Error taxonomy.

``DomainError`` marks inputs outside a routine's mathematical domain,
``CapabilityError`` marks requests beyond what the implementation will
attempt (too large for an exhaustive method, disabled fallback), and
``IntegrityError`` marks internal contradictions that indicate corrupted
state rather than bad input.
"""


class DomainError(ValueError):
    pass


class CapabilityError(RuntimeError):
    pass


class IntegrityError(RuntimeError):
    pass
