from dataclasses import dataclass

from beliefs.density import ComparisonResult, fosd_compare
from utils.errors import AssumptionViolationError, DomainError


@dataclass(frozen=True)
class BeliefFamily:
    """
    Конечное семейство допустимых параметрических убеждений M_i над параметром одного соперника

    Attributes:
        members: Кортеж PiecewiseConstantDensity
        max_index: Индекс члена, доминирующего все остальные
        min_index: Индекс члена, доминируемого всеми остальными
        labels: Необязательные подписи членов для сообщений
    """
    members: tuple
    max_index: int = 0
    min_index: int = 0
    labels: tuple = None

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise DomainError("Семейство убеждений не может быть пустым")
        for k in (self.max_index, self.min_index):
            if not 0 <= k < len(members):
                raise DomainError(f"Индекс {k} вне семейства из {len(members)} членов")
        first = members[0]
        for member in members[1:]:
            if not first.same_domain(member):
                raise DomainError("Члены семейства определены на разных областях")
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(f"#{k}" for k in range(len(members))))

    @property
    def domain_lo(self):
        return self.members[0].domain_lo

    @property
    def domain_hi(self):
        return self.members[0].domain_hi

    def __len__(self):
        return len(self.members)

    @classmethod
    def singleton(cls, density, label="#0"):
        return cls((density,), 0, 0, (label,))


def family_extremes(family, tol=None):
    """
    Проверка назначенных крайних членов семейства и их возврат

    Args:
        family: BeliefFamily
        tol: Допуск сравнения

    Returns:
        tuple: (f_max, f_min)

    Raises:
        AssumptionViolationError: Если назначенный член не доминирует (не доминируется) всеми
    """
    f_max = family.members[family.max_index]
    f_min = family.members[family.min_index]
    for k, member in enumerate(family.members):
        upper = fosd_compare(f_max, member, tol)
        if not upper.dominates:
            raise AssumptionViolationError(
                f"Назначенный максимальный член {family.labels[family.max_index]} не доминирует "
                f"член {family.labels[k]}: хвост второго больше при θ'={upper.second_above}",
                witness={"member": family.labels[k], "threshold": upper.second_above, "extreme": "max"},
            )
        lower = fosd_compare(f_min, member, tol)
        if not lower.dominated_by:
            raise AssumptionViolationError(
                f"Назначенный минимальный член {family.labels[family.min_index]} не доминируется "
                f"членом {family.labels[k]}: хвост первого больше при θ'={lower.first_above}",
                witness={"member": family.labels[k], "threshold": lower.first_above, "extreme": "min"},
            )
    return f_max, f_min


def reduce_to_extremes(family):
    """Семейство, оставляющее только назначенные крайние члены"""
    if family.max_index == family.min_index:
        return BeliefFamily.singleton(family.members[family.max_index], family.labels[family.max_index])
    return BeliefFamily(
        (family.members[family.max_index], family.members[family.min_index]),
        0, 1,
        (family.labels[family.max_index], family.labels[family.min_index]),
    )


def find_extreme_index(family, tol=None):
    """
    Поиск членов, доминирующих всех и доминируемых всеми (без назначения)

    Returns:
        tuple: (max_index или None, min_index или None)
    """
    found_max = None
    found_min = None
    for k, candidate in enumerate(family.members):
        results = [fosd_compare(candidate, other, tol).result for other in family.members]
        if found_max is None and all(r in (ComparisonResult.DOMINATES, ComparisonResult.EQUAL) for r in results):
            found_max = k
        if found_min is None and all(r in (ComparisonResult.DOMINATED_BY, ComparisonResult.EQUAL) for r in results):
            found_min = k
    return found_max, found_min
