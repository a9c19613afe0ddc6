class UsageError(ValueError):
    """Invalid arguments: bad bounds, malformed descriptors, mismatched quivers."""


class VanishesUnderTau(UsageError):
    """A symbolic AR shift asked for tau of a projective or tau^-1 of an injective."""


class CertificationError(RuntimeError):
    """Generic sampling never produced a module with a trivial endomorphism ring."""

    def __init__(self, message: str, seeds: list[int]):
        super().__init__(message)
        self.seeds = seeds


class DescriptorSyntaxError(UsageError):
    def __init__(self, text: str, position: int, reason: str):
        super().__init__(f"{reason} at position {position} in {text!r}")
        self.text = text
        self.position = position
        self.reason = reason
