from fractions import Fraction

import pytest

from asa_bounds.errors import ConfigError, ModuleError, ParseError
from asa_bounds.galois_modules import cyclic_group, regular_module
from asa_bounds.settings import PRIME_BOUND, Settings, load_settings
from asa_bounds.utils.parsing import (
    build_placeset,
    group_from_json,
    load_module_file,
    parse_congruence,
    parse_fraction,
    parse_group,
    parse_module,
    parse_patterns,
    parse_poly,
)
from asa_bounds.utils.serialize import module_to_json, write_json


# --- groupes ---
@pytest.mark.parametrize("text, order", [("c1", 1), ("c5", 5), ("c2xc3", 6), ("klein", 4), ("s3", 6), ("C4", 4)])
def test_parse_group(text, order):
    assert parse_group(text).order == order


@pytest.mark.parametrize("text", ["d4", "c", "c0", ""])
def test_parse_group_rejects(text):
    with pytest.raises(ParseError):
        parse_group(text)


def test_group_from_json_bad_table():
    with pytest.raises(ParseError):
        group_from_json({"order": 2, "table": [["a"]]})


# --- modules ---
def test_parse_module(c4):
    assert parse_module("trivialZ:2", c4).rank == 2
    assert parse_module("regular", c4).rank == 4
    assert parse_module("perm:2", c4).rank == 2
    assert parse_module("sign", c4).name == "Z-"


def test_parse_module_errors(c3):
    with pytest.raises(ModuleError):
        parse_module("sign", c3)
    with pytest.raises(ParseError):
        parse_module("perm:7", c3)
    with pytest.raises(ParseError):
        parse_module("adjoint", c3)


def test_load_module_file(tmp_path):
    path = tmp_path / "module.json"
    write_json(path, module_to_json(regular_module(cyclic_group(3))))
    module = load_module_file(path)
    assert module.rank == 3
    assert module.group.order == 3


def test_load_module_file_missing(tmp_path):
    with pytest.raises(ParseError):
        load_module_file(tmp_path / "absent.json")


# --- polynômes ---
@pytest.mark.parametrize("text", ["x^2+1", "x**2 + 1", "[1,0,1]", "1,0,1"])
def test_parse_poly_forms(text):
    assert parse_poly(text).coeffs == (1, 0, 1)


def test_parse_poly_cyclotomic():
    nf = parse_poly("cyclo:5")
    assert nf.degree == 4
    assert nf.asserted_galois


@pytest.mark.parametrize("text", ["x^2/2+1", "2*x^2+1", "x^2+2*x+1", "y+"])
def test_parse_poly_rejects(text):
    with pytest.raises(ParseError):
        parse_poly(text)


# --- rationnels, congruences, motifs ---
def test_parse_fraction():
    assert parse_fraction(" 3/5 ") == Fraction(3, 5)
    with pytest.raises(ParseError):
        parse_fraction("1/0")


def test_parse_congruence_and_patterns():
    assert parse_congruence("8:1,7") == (8, (1, 7))
    assert parse_patterns("1,1;2") == ((1, 1), (2,))
    with pytest.raises(ParseError):
        parse_congruence("8")


def test_build_placeset():
    assert build_placeset().kind == "split_in_L"
    spec = build_placeset(congruence="4:5", no_archimedean=True)
    assert spec.residues == (1,)
    assert not spec.include_archimedean
    assert build_placeset(all_places=True, symbolic_density="1/3").symbolic_density == Fraction(1, 3)
    with pytest.raises(ParseError):
        build_placeset(split=True, all_places=True)


# --- configuration ---
def test_settings_defaults():
    assert Settings.from_env().prime_bound == PRIME_BOUND


@pytest.mark.parametrize("name, raw", [("ASA_PRIME_BOUND", "50"), ("ASA_PRIME_BOUND", "beaucoup"),
                                       ("ASA_DIRICHLET_S", "1"), ("ASA_DENSITY_WORKERS", "0")])
def test_settings_rejects(monkeypatch, name, raw):
    monkeypatch.setenv(name, raw)
    with pytest.raises(ConfigError):
        Settings.from_env()


def test_load_settings_from_dotenv(tmp_path):
    env = tmp_path / ".env"
    env.write_text("ASA_PRIME_BOUND=20_000\nASA_LOG_LEVEL=info\n", encoding="utf-8")
    s = load_settings(env)
    assert s.prime_bound == 20_000
    assert s.log_level == "INFO"


def test_load_settings_checks_group_order_cap(tmp_path, monkeypatch):
    # plafond lu par current_max_group_order seulement, mais validé au démarrage
    monkeypatch.setenv("ASA_MAX_GROUP_ORDER", "0")
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "absent.env")
    assert "max_group_order" not in Settings.__dataclass_fields__
