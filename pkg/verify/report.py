from dataclasses import dataclass, field
from enum import Enum


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass
class CheckResult:
    """
    Итог одной проверки допущения

    Attributes:
        name: Имя проверки
        status: PASS, FAIL или INCONCLUSIVE
        witness: Точка, на которой достигнут худший случай (для FAIL - воспроизводимый контрпример)
        tolerance: Использованный допуск
        details: Сводные числа проверки
    """
    name: str
    status: CheckStatus
    witness: dict = field(default_factory=dict)
    tolerance: float = None
    details: dict = field(default_factory=dict)

    def to_record(self):
        return {
            "check": self.name,
            "status": self.status.value,
            "tolerance": self.tolerance,
            "witness": self.witness,
            "details": self.details,
        }


@dataclass
class AssumptionReport:
    game: str = ""
    checks: list = field(default_factory=list)

    def add(self, result):
        self.checks.append(result)
        return result

    def get(self, name):
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    @property
    def failed(self):
        return [check for check in self.checks if check.status == CheckStatus.FAIL]

    @property
    def passed(self):
        return not self.failed

    def to_records(self):
        return [dict(check.to_record(), game=self.game) for check in self.checks]
