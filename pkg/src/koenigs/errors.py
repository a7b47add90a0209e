from __future__ import annotations


class KoenigsError(Exception):
    pass


class ConfigError(KoenigsError, ValueError):
    def __init__(self, messages: list[str]):
        self.messages = list(messages)
        super().__init__(" ".join(self.messages))


class DomainError(KoenigsError, ValueError):
    pass


class SingularCoordinateError(DomainError):
    pass


class PoleError(KoenigsError, ArithmeticError):
    pass


class NonConvergenceError(KoenigsError, ArithmeticError):
    pass


class DegeneracyError(KoenigsError, ArithmeticError):
    pass


class PatternMismatchError(KoenigsError, ValueError):
    pass


class WindowTooSmallError(KoenigsError, ValueError):
    pass


class GridMismatchError(KoenigsError, ValueError):
    pass


class VerificationFailure(KoenigsError, RuntimeError):
    def __init__(self, message: str, unmatched: tuple[float, ...] = ()):
        self.unmatched = tuple(unmatched)
        super().__init__(message)
