import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nichols_lift.algebra import SmashElement, format_element, q_bracket, root_vectors
from nichols_lift.config import (
    ConfigError,
    SessionConfig,
    emit_config,
    evaluator_for,
    parse_config,
    parse_expression,
    resolve,
)
from nichols_lift.nichols import Power
from nichols_lift.scalars import CycNumber

from conftest import CONFIGS
from test_algebra import elements

MINIMAL = """
[group]
invariant_factors = [4]
[generators]
g = [[1]]
chi = [[2]]
"""


def test_shipped_configs_parse():
    for name in ("zeta9.cfg", "qplane.cfg", "monomial-fuzz.cfg"):
        resolve(parse_config((CONFIGS / name).read_text()))


def test_zeta9_elaboration(zeta9):
    d = zeta9.datum
    rv = root_vectors(d)
    assert zeta9.definitions["x12"] == rv["12"]
    assert zeta9.definitions["x12"] == q_bracket(SmashElement.letter(d, 1), SmashElement.letter(d, 2), d.q(1, 2))
    z9 = CycNumber.zeta(18, 2)
    assert zeta9.scalars["a"] == z9**7 * d.q(1, 2) * (1 + z9).inverse()
    u = zeta9.relations["x12^18"]
    assert isinstance(u, Power) and u.exponent == 18 and u.base == rv["12"]
    assert [[el.name for el in s] for s in zeta9.stratification.strata] == [
        ["x1^18", "x2^3"], ["x1_122-a*x12^2"], ["x1112"], ["x12^18"]]


def test_empty_relation_list_is_free_session():
    s = resolve(parse_config(MINIMAL))
    assert s.relations == {} and s.stratification is None
    assert s.datum.q(1, 1) == -1


def test_braiding_gives_minimal_realization():
    text = '[group]\nbraiding = [["-1", "1"], ["1", "-1"]]\n'
    s = resolve(parse_config(text))
    assert s.datum.group.invariant_factors == (2, 2)


def test_round_trip_shipped():
    for name in ("zeta9.cfg", "qplane.cfg", "monomial-fuzz.cfg"):
        cfg = parse_config((CONFIGS / name).read_text())
        assert parse_config(emit_config(cfg)) == cfg


NAMES = st.text(alphabet="abcxyz_^-*0123 ", min_size=1, max_size=8).filter(lambda s: s.strip() == s and s)


@st.composite
def configs(draw):
    rel_names = draw(st.lists(NAMES, min_size=0, max_size=4, unique=True))
    cfg = SessionConfig(
        invariant_factors=[draw(st.integers(1, 12)) for _ in range(2)],
        g=[[1, 0], [0, 1]],
        chi=[[draw(st.integers(0, 11)) for _ in range(2)] for _ in range(2)],
        relations={n: draw(st.sampled_from(["x1^2", "x1*x2 - x2*x1", "[x1, x2]", "x2^3"])) for n in rel_names},
        degree_bound=draw(st.integers(1, 99)),
        order=draw(st.sampled_from([None, "x1>x2", "x2>x1"])),
        output_format=draw(st.sampled_from(["human", "machine"])),
        zeta=draw(st.sampled_from([None, 3, 9])),
        scalars={"c": draw(st.sampled_from(["1/2", "z^2 + 1", "-(1/3) * z9"]))},
    )
    if rel_names:
        cfg.strata = [draw(st.lists(st.sampled_from(rel_names), min_size=1, max_size=2))]
        cfg.parameters = {"p\\" + str(i): n for i, n in enumerate(rel_names)}
    return cfg


@settings(max_examples=150, deadline=None)
@given(configs())
def test_round_trip_property(cfg):
    assert parse_config(emit_config(cfg)) == cfg


@settings(max_examples=150, deadline=None)
@given(elements(resolve(parse_config((CONFIGS / "zeta9.cfg").read_text())).datum, max_len=4, max_terms=4))
def test_printed_elements_reparse(a):
    s = resolve(parse_config((CONFIGS / "zeta9.cfg").read_text()))
    ev = evaluator_for(s)
    assert ev.relation(format_element(a), "t") == a


@pytest.mark.parametrize(
    "text, column",
    [("x1 + * x2", 6), ("x1 ^ y", 6), ("[x1, x2", 8), ("x1 $ x2", 4), ("g(1, x)", 6)],
)
def test_syntax_errors_have_columns(text, column):
    with pytest.raises(ConfigError) as err:
        parse_expression(text)
    assert err.value.pos == column


def test_semantic_errors_have_key_paths():
    bad = MINIMAL + '[relations]\nr = "x3^2"\n'
    with pytest.raises(ConfigError) as err:
        resolve(parse_config(bad))
    assert err.value.path == "relations.r"
    with pytest.raises(ConfigError) as err:
        resolve(parse_config('[group]\nbraiding = [["2"]]\n'))
    assert err.value.path == "group.braiding"


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL + "[session]\nspeed = 3\n")
    assert err.value.path == "session.speed"
    with pytest.raises(ConfigError):
        parse_config(MINIMAL + "[bogus]\nx = 1\n")


def test_dangling_stratum_name():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL + '[stratification]\nstrata = [["nope"]]\n')
    assert "nope" in str(err.value)


def test_toml_syntax_error():
    with pytest.raises(ConfigError) as err:
        parse_config("[group\n")
    assert "line 1" in str(err.value)


def test_scalar_grammar(zeta9):
    ev = evaluator_for(zeta9)
    z18 = CycNumber.zeta(18)
    assert ev.scalar("z18^11", "t") == z18**11
    assert ev.scalar("z^2", "t") == z18**4  # bare z is zeta_9 here
    assert ev.scalar("(1 + z)^-1 * (1 + z)", "t") == 1
    assert ev.scalar("3/6", "t") == CycNumber.rational(18, 1) / 2
    assert ev.scalar("q12 * q21", "t") == z18**14
    g = ev.relation("g(1,0) * x2 * g(1,0)^-1", "t")
    assert g == SmashElement.letter(zeta9.datum, 2).scale(zeta9.datum.q(1, 2))
