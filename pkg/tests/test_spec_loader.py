import numpy as np
import pytest

from games import Mode
from solver.iteration import ChoicePolicy, solve
from storage.spec_loader import load_dominance, load_game
from utils.errors import ArgumentError, AssumptionViolationError, SpecParseError

QUADRATIC_PLAYER = """
[players.{label}]
choice = {choice}
parameter = [0.0, 1.0]

[players.{label}.utility.A]
"" = [-1.0, 0.0, 0.0]

[players.{label}.utility.B]
"{other}" = [1.0, 0.0, 0.0]
"""

UNIFORM_BELIEF = """
[beliefs.{label}.{other}]
breakpoints = [0.0, 1.0]
members = [[1.0]]
"""


def _write(tmp_path, text, name="game.toml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _quadratic_text(choice="[0.0, 1.0]", mode='mode = "complements"'):
    parts = [f'[game]\nmodel = "quadratic"\n{mode}\n']
    for label, other in (("1", "2"), ("2", "1")):
        parts.append(QUADRATIC_PLAYER.format(label=label, other=other, choice=choice))
        parts.append(UNIFORM_BELIEF.format(label=label, other=other))
    return "".join(parts)


def test_load_builtin_bertrand(specs_dir):
    g, settings = load_game(specs_dir / "bertrand.toml")
    assert g.name == "bertrand"
    assert g.params == {"a": 1.0, "phi": 1.0, "p_bar": 3.0}
    assert settings.max_rounds == 60
    assert settings.grid_size == 11
    assert settings.confine_choices


def test_load_builtin_cournot_is_unconfined(specs_dir):
    g, settings = load_game(specs_dir / "cournot.toml")
    assert g.mode == Mode.SUBSTITUTES
    assert not settings.confine_choices


def test_quadratic_spec_reproduces_builtin_bertrand(specs_dir, bertrand):
    g, _ = load_game(specs_dir / "quadratic.toml")
    assert g.name == "bertrand-quadratic"
    assert g.mode == Mode.COMPLEMENTS

    from_file = solve(g, max_rounds=10, grid_size=6)
    builtin = solve(bertrand, max_rounds=10, grid_size=6)
    for a, b in zip(from_file.final.players, builtin.final.players):
        np.testing.assert_allclose(a.lower, b.lower, atol=1e-12)
        np.testing.assert_allclose(a.upper, b.upper, atol=1e-12)


def test_small_quadratic_game(tmp_path):
    g, settings = load_game(_write(tmp_path, _quadratic_text()))
    assert g.n == 2
    assert g.players[0].families[1].labels == ("#0",)
    assert settings.max_rounds is None

    trace = solve(g, max_rounds=60, policy=ChoicePolicy.CONFINED)
    # c = E[c_j] / 2 сходится к нулю
    for bounds in trace.final.players:
        np.testing.assert_allclose(bounds.upper, 0.0, atol=1e-9)


def _with_first_belief(table):
    default = UNIFORM_BELIEF.format(label="1", other="2")
    return _quadratic_text().replace(default, table)


def test_family_extremes_are_found_without_indices(tmp_path):
    table = (
        "[beliefs.1.2]\n"
        "breakpoints = [0.0, 0.5, 1.0]\n"
        "members = [[2.0, 0.0], [1.0, 1.0], [0.0, 2.0]]\n"
    )
    g, _ = load_game(_write(tmp_path, _with_first_belief(table)))
    family = g.players[0].families[1]
    assert (family.max_index, family.min_index) == (2, 0)


def test_incomparable_family_without_indices_is_parse_error(tmp_path):
    table = (
        "[beliefs.1.2]\n"
        "breakpoints = [0.0, 0.3, 0.7, 1.0]\n"
        'members = [["2/3", "1/4", "7/3"], ["1/3", "7/4", "2/3"]]\n'
    )
    with pytest.raises(SpecParseError) as error:
        load_game(_write(tmp_path, _with_first_belief(table)))
    assert error.value.field == "beliefs.1.2"


def test_convex_quadratic_spec_is_assumption_violation(tmp_path):
    text = _quadratic_text().replace('"" = [-1.0, 0.0, 0.0]', '"" = [-1.0, 2.0, 0.0]', 1)
    with pytest.raises(AssumptionViolationError) as error:
        load_game(_write(tmp_path, text))
    assert error.value.exit_code == 3
    assert error.value.witness["player"] == 1
    assert error.value.witness["A"] == pytest.approx(1.0)


def test_reversed_interval_is_parse_error(tmp_path):
    with pytest.raises(SpecParseError) as error:
        load_game(_write(tmp_path, _quadratic_text(choice="[1.0, 0.0]")))
    assert error.value.field == "players.1.choice"
    assert error.value.exit_code == 2


def test_quadratic_requires_mode(tmp_path):
    with pytest.raises(SpecParseError) as error:
        load_game(_write(tmp_path, _quadratic_text(mode="")))
    assert error.value.field == "game.mode"


def test_malformed_toml_reports_line(tmp_path):
    with pytest.raises(SpecParseError) as error:
        load_game(_write(tmp_path, '[game]\nmodel = "bertrand"\n[game.params\n'))
    assert error.value.line == 3
    assert error.value.one_line().startswith("error[parse]: ")


def test_builtin_precondition_becomes_parse_error(tmp_path):
    text = '[game]\nmodel = "bertrand"\n[game.params]\na = 1.0\nphi = 1.0\np_bar = 1.0\n'
    with pytest.raises(SpecParseError) as error:
        load_game(_write(tmp_path, text))
    assert isinstance(error.value.__cause__, ArgumentError)


def test_fraction_strings_and_bad_numbers(tmp_path):
    text = '[game]\nmodel = "bertrand"\n[game.params]\na = "1/2"\nphi = 1\np_bar = "3"\n'
    g, _ = load_game(_write(tmp_path, text))
    assert g.params["a"] == 0.5

    bad = '[game]\nmodel = "bertrand"\n[game.params]\na = "half"\nphi = 1\np_bar = 3\n'
    with pytest.raises(SpecParseError) as error:
        load_game(_write(tmp_path, bad, "bad.toml"))
    assert error.value.field == "game.params.a"


def test_unknown_mode_and_missing_model(tmp_path):
    with pytest.raises(SpecParseError):
        load_game(_write(tmp_path, '[game]\nmodel = "bertrand"\nmode = "neutral"\n'))
    with pytest.raises(SpecParseError):
        load_game(_write(tmp_path, '[solver]\nmax_rounds = 3\n', "empty.toml"))


def test_load_dominance(specs_dir):
    inputs = load_dominance(specs_dir / "dominance.toml")
    (beta, f), _ = inputs.first, inputs.second
    assert beta(0.5) == pytest.approx(0.3)
    assert f.values == pytest.approx((2 / 3, 1 / 4, 7 / 3))
    assert (inputs.choice_lo, inputs.choice_hi) == (0.0, 1.0)


def test_dominance_requires_both_pairs(tmp_path):
    with pytest.raises(SpecParseError):
        load_dominance(_write(tmp_path, "[dominance.first]\ndensity_values = [1.0]\n"))
