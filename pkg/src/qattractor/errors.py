"""Exception types shared across the package."""


class BnetError(ValueError):
    """Problem with a Boolean network definition. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnexpectedCharacter(BnetError):
    def __init__(self, char, position, line=None):
        self.char = char
        self.position = position
        super().__init__(f"unexpected character {char!r} at column {position + 1}", line)


class ExprSyntaxError(BnetError):
    def __init__(self, position, expected, line=None):
        self.position = position
        self.expected = expected
        super().__init__(f"syntax error at token {position}: expected {expected}", line)


class UnsupportedFeature(BnetError):
    pass


class InvalidGeneName(BnetError):
    pass


class DuplicateGene(BnetError):
    def __init__(self, name, line=None):
        self.name = name
        super().__init__(f"duplicate gene {name!r}", line)


class UndefinedVariable(BnetError):
    def __init__(self, name, line=None):
        self.name = name
        super().__init__(f"undefined variable {name!r}", line)


class EmptyNetwork(BnetError):
    def __init__(self):
        super().__init__("network declares no genes")


class CapacityExceeded(RuntimeError):
    pass


class NotOnAttractor(ValueError):
    pass


class NotClosedUnderTransition(ValueError):
    pass


class QubitCollision(ValueError):
    pass


class AllStatesMarked(ValueError):
    pass


class NonConvergence(RuntimeError):
    def __init__(self, message, log=None):
        self.log = log or []
        super().__init__(message)


class IndexOutOfRange(IndexError):
    pass
