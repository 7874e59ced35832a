"""Иерархия исключений решателя.

Каждый класс несет машиночитаемую причину (`reason`) и код выхода CLI.
Библиотечный код только выбрасывает исключения, перехватывает их main.py.
"""


class RationalizabilityError(Exception):
    reason = "error"
    exit_code = 1

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness

    def one_line(self):
        """Однострочное сообщение вида `error[<reason>]: <текст>`"""
        text = " ".join(str(self).split())
        return f"error[{self.reason}]: {text}"


class DomainError(RationalizabilityError, ValueError):
    reason = "domain"
    exit_code = 2


class ArgumentError(RationalizabilityError, ValueError):
    reason = "argument"
    exit_code = 2


class SpecParseError(RationalizabilityError):
    reason = "parse"
    exit_code = 2

    def __init__(self, message, field=None, line=None):
        location = []
        if field:
            location.append(f"поле {field}")
        if line is not None:
            location.append(f"строка {line}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.field = field
        self.line = line


class AssumptionViolationError(RationalizabilityError):
    reason = "assumption"
    exit_code = 3


class NumericError(RationalizabilityError):
    reason = "numeric"
    exit_code = 4


class InternalConsistencyError(RationalizabilityError):
    reason = "consistency"
    exit_code = 4


class ResourceLimitError(RationalizabilityError):
    reason = "resource"
    exit_code = 5
