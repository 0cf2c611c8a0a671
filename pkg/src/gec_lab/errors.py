class ValidationError(ValueError):
    """Input violates a documented precondition."""


class M2ParseError(ValidationError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
