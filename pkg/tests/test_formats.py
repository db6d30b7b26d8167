"""Wire format parsing strictness, error positions, and canonical round-trips."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockscope.fixtures import gen_fig6, gen_gcd, gen_random, gen_random_profile
from blockscope.formats import (
    NETLIST_HEADER,
    PROFILE_HEADER,
    ParseError,
    VersionError,
    parse_netlist,
    parse_power_model,
    parse_profile,
    serialize_netlist,
    serialize_profile,
)
from blockscope.power import PowerModel

GOOD_NETLIST = """\
# routing annotated by hand
blockscope-netlist v1
cell top.alu__a IN 0
cell top.alu__b LUT2 7   # adder bit
cell n9 OUT 0
net top.alu__a -> top.alu__b 3
net top.alu__b -> n9 2
"""

GOOD_PROFILE = """\
blockscope-profile v1
cycles 4
rule r0 block top.alu
fires r0 0,2
writes r0 acc
reads top.alu acc
"""


def test_parse_good_netlist():
    doc = parse_netlist(GOOD_NETLIST)
    nl = doc.body
    assert sorted(nl.cell_ids()) == ["n9", "top.alu__a", "top.alu__b"]
    assert nl.cell("top.alu__b").logic_delay == 7
    assert doc.cell_lines["top.alu__b"] == 4


def test_comments_and_blank_lines_ignored_everywhere():
    noisy = GOOD_NETLIST.replace("cell n9 OUT 0", "\n   # interlude\ncell n9 OUT 0 # tail")
    assert parse_netlist(noisy).body == parse_netlist(GOOD_NETLIST).body


def test_missing_header():
    with pytest.raises(ParseError) as err:
        parse_netlist("cell a IN 0\n")
    assert "expected header" in str(err.value)
    assert err.value.line == 1


def test_version_mismatch_is_its_own_error():
    with pytest.raises(VersionError) as err:
        parse_netlist("blockscope-netlist v2\n")
    assert "unsupported version" in str(err.value)
    # a different tool's file is a plain parse error, not a version error
    with pytest.raises(ParseError) as err2:
        parse_netlist("blockscope-profile v1\n")
    assert not isinstance(err2.value, VersionError)


def test_unknown_cell_kind_reports_line_and_column():
    text = NETLIST_HEADER + "\n\n# pad\ncell a LUT9 4\n"
    with pytest.raises(ParseError) as err:
        parse_netlist(text)
    assert "unknown cell kind LUT9" in str(err.value)
    assert err.value.line == 4
    assert err.value.column == 8


def test_malformed_fields_rejected():
    cases = [
        ("cell a IN 0 extra", "expected cell"),
        ("cell a IN -1", "malformed logic delay"),
        ("cell a IN 1.5", "malformed logic delay"),
        ("cell a! IN 0", "malformed cell id"),
        ("net a => b 1", "expected '->'"),
        ("net a -> b 1.5", "malformed net delay"),
        ("gadget a b", "unknown directive"),
    ]
    for line, fragment in cases:
        with pytest.raises(ParseError) as err:
            parse_netlist(f"{NETLIST_HEADER}\n{line}\n")
        assert fragment in str(err.value), line
        assert err.value.line == 2


def test_duplicate_cell_id_caught_at_parse():
    text = f"{NETLIST_HEADER}\ncell a IN 0\ncell a OUT 0\n"
    with pytest.raises(ParseError) as err:
        parse_netlist(text)
    assert "duplicate cell id a" in str(err.value)
    assert err.value.line == 3


def test_validation_errors_map_back_to_source_lines():
    text = f"{NETLIST_HEADER}\ncell a IN 0\ncell q FF_Q 0\nnet a -> q 1\n"
    with pytest.raises(ParseError) as err:
        parse_netlist(text)
    assert err.value.line == 4


def test_cycle_error_names_the_cycle_cells():
    text = (
        f"{NETLIST_HEADER}\n"
        "cell i IN 0\ncell a LUT2 1\ncell b LUT1 1\ncell o OUT 0\n"
        "net i -> a 1\nnet a -> b 1\nnet b -> a 1\nnet b -> o 1\n"
    )
    with pytest.raises(ParseError) as err:
        parse_netlist(text)
    msg = str(err.value)
    assert "combinational cycle" in msg and "a" in msg and "b" in msg
    assert err.value.line == 7  # the cycle's first edge a -> b


def test_netlist_serialization_is_canonical_and_stable():
    for nl in (gen_gcd()[0], gen_fig6(), gen_random(7, 15)):
        blob = serialize_netlist(nl)
        doc = parse_netlist(blob)
        assert doc.body == nl
        assert serialize_netlist(doc) == blob
    assert serialize_netlist(parse_netlist(GOOD_NETLIST)) != GOOD_NETLIST.encode()


def test_parallel_nets_survive_round_trip():
    text = f"{NETLIST_HEADER}\ncell a IN 0\ncell b OUT 0\nnet a -> b 3\nnet a -> b 9\n"
    nl = parse_netlist(text).body
    assert sorted(n.net_delay for n in nl.nets) == [3, 9]
    again = parse_netlist(serialize_netlist(nl)).body
    assert again == nl


def test_parse_good_profile():
    p = parse_profile(GOOD_PROFILE)
    assert p.cycles == 4
    assert p.firings == {"r0": (0, 2)}
    assert ("r0", "acc") in p.writes
    assert {str(b) for b, _ in p.reads} == {"top.alu"}


def test_profile_reference_and_shape_errors():
    cases = [
        ("cycles 4\ncycles 5", "duplicate cycles"),
        ("cycles 0", "cycle count must be >= 1"),
        ("rule r0 block b\nrule r0 block b\ncycles 1", "duplicate rule"),
        ("rule r0 blk b\ncycles 1", "expected 'block'"),
        ("cycles 2\nfires r9 0", "undeclared rule r9"),
        ("cycles 2\nrule r0 block b\nfires r0 0\nfires r0 1", "duplicate fires"),
        ("cycles 2\nrule r0 block b\nfires r0 0,0", "strictly increasing"),
        ("cycles 2\nrule r0 block b\nfires r0 2", "out of range"),
        ("cycles 2\nrule r0 block b\nfires r0 1,x", "malformed firing cycle"),
        ("cycles 2\nwrites r9 s", "undeclared rule r9"),
        ("cycles 2\nrule r0 block b\nwrites r0 s\nwrites r0 s", "duplicate writes"),
        ("cycles 2\nrule r0 block b\nwrites r0 s\nreads c s", "undeclared block c"),
        ("cycles 2\nrule r0 block b\nreads b s", "unwritten state s"),
        ("cycles 2\nrule r0 block b\nwrites r0 s\nreads b s\nreads b s", "duplicate reads"),
        ("rule r0 block b", "missing cycles"),
    ]
    for body, fragment in cases:
        with pytest.raises(ParseError) as err:
            parse_profile(f"{PROFILE_HEADER}\n{body}\n")
        assert fragment in str(err.value), body


def test_rule_without_fires_line_means_it_never_fired():
    p = parse_profile(f"{PROFILE_HEADER}\ncycles 3\nrule r0 block b\n")
    assert p.firings == {"r0": ()}


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 5_000))
def test_random_profiles_round_trip(seed):
    p = gen_random_profile(seed)
    assert parse_profile(serialize_profile(p)) == p


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 5_000), st.integers(2, 18))
def test_random_netlists_round_trip(seed, n):
    nl = gen_random(seed, n)
    blob = serialize_netlist(nl)
    assert parse_netlist(blob).body == nl
    assert serialize_netlist(parse_netlist(blob)) == blob


def _adjacent_swaps(blob: bytes):
    """Every file variant with two adjacent tokens of one line exchanged."""
    lines = blob.decode().splitlines()
    for i, line in enumerate(lines):
        tokens = line.split()
        for j in range(len(tokens) - 1):
            if tokens[j] == tokens[j + 1]:
                continue
            swapped = tokens[:j] + [tokens[j + 1], tokens[j]] + tokens[j + 2:]
            yield "\n".join(lines[:i] + [" ".join(swapped)] + lines[i + 1:]) + "\n"


def test_every_adjacent_field_swap_in_netlist_fails_to_parse():
    checked = 0
    for variant in _adjacent_swaps(serialize_netlist(gen_gcd()[0])):
        with pytest.raises(ParseError):
            parse_netlist(variant)
        checked += 1
    assert checked > 100


def test_every_adjacent_field_swap_in_profile_fails_to_parse():
    checked = 0
    for variant in _adjacent_swaps(serialize_profile(gen_gcd()[1])):
        with pytest.raises(ParseError):
            parse_profile(variant)
        checked += 1
    assert checked > 20


def test_power_model_defaults_and_overrides():
    model = parse_power_model("")
    assert model == PowerModel.default()
    assert model.static_of("LUT3") == pytest.approx(0.3)
    assert model.dynamic_of("FF") == pytest.approx(1.0)
    assert model.frequency_hz == pytest.approx(1e8)

    text = "static LUT3 2.5\ndynamic FF 0.25\nfrequency 5e7\n"
    model = parse_power_model(text)
    assert model.static_of("LUT3") == pytest.approx(2.5)
    assert model.static_of("LUT4") == pytest.approx(0.4)  # untouched default
    assert model.dynamic_of("FF") == pytest.approx(0.25)
    assert model.frequency_hz == pytest.approx(5e7)

    layered = parse_power_model("static FF 9\n", base=model)
    assert layered.static_of("FF") == pytest.approx(9.0)
    assert layered.frequency_hz == pytest.approx(5e7)


def test_power_model_errors():
    cases = [
        ("static LUT9 1", "unknown resource kind"),
        ("static LUT3 1\nstatic LUT3 2", "duplicate static"),
        ("frequency 0", "frequency must be positive"),
        ("frequency 1e8\nfrequency 2e8", "duplicate frequency"),
        ("static LUT3 -1", "malformed static coefficient"),
        ("voltage 1.2", "unknown directive"),
    ]
    for body, fragment in cases:
        with pytest.raises(ParseError) as err:
            parse_power_model(body)
        assert fragment in str(err.value), body
