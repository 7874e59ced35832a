from games.base_game import (
    Blackbox,
    GameSpec,
    Mode,
    PlayerSpec,
    QuadraticOwnChoice,
    ThetaCoefficient,
    opponent_choices,
    quadratic_game,
    split_density_family,
    utility_eval,
    with_mode,
)
from games.bertrand import bertrand_game
from games.cournot import cournot_game
from utils.errors import ArgumentError


def build_model(model, params):
    """Встроенная модель по имени и словарю параметров"""
    builders = {"bertrand": (bertrand_game, ("a", "phi", "p_bar")),
                "cournot": (cournot_game, ("a", "c", "phi_lo", "phi_hi", "q_bar"))}
    if model not in builders:
        raise ArgumentError(f"Неизвестная модель {model!r}, доступны: {sorted(builders)}")
    builder, names = builders[model]
    missing = [name for name in names if name not in params]
    extra = sorted(set(params) - set(names))
    if missing or extra:
        raise ArgumentError(f"Модель {model}: нужны параметры {list(names)}, не хватает {missing}, лишние {extra}")
    return builder(*(params[name] for name in names))
