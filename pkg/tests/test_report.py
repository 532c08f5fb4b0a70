from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest

from dcloja.assoc import find_rho, geometric_grid
from dcloja.errors import InputError
from dcloja.flatness import FlatModel, check_flat_bound
from dcloja.geometry import parse_grid_specs
from dcloja.lojasiewicz import (
    axis_probe,
    classical_loja_fit,
    fit_envelope,
    make_test_function,
    point_zero_set,
    profile_refinements,
    psi_polynomial,
)
from dcloja.geometry import Hyperplane
from dcloja.report import (
    Ex42Report,
    HmPoint,
    build_report,
    decode,
    dumps,
    encode,
    read_report,
    strip_metadata,
    write_csv,
)
from dcloja.series import Polynomial
from dcloja.weights import Gevrey, check_regularity, make_weight_sequence

FACT = make_weight_sequence(Gevrey(1, 0))


def test_encode_scalars():
    assert encode(Fraction(-3, 4)) == "-3/4"
    assert encode(Fraction(5)) == "5/1"
    assert encode(math.inf) == "inf" and encode(-math.inf) == "-inf"
    assert encode((1, Fraction(1, 2))) == [1, "1/2"]
    assert decode(Fraction, "-3/4") == Fraction(-3, 4)
    assert decode(float, "-inf") == -math.inf
    assert decode(float | None, None) is None


def test_float_formatting_is_shortest_round_trip():
    text = dumps(build_report("x", {}, HmPoint(0.1, 0.5, -math.log(2), 1), "verified", 0.0))
    assert '"t": 0.1' in text
    assert json.loads(text)["payload"]["log_value"] == -math.log(2)


def round_trip(payload):
    text = dumps(build_report("test", {"a": 1}, payload, "verified", 1.25))
    data, back = read_report(text)
    assert data["metadata"] == {"wall_time_s": 1.25}
    assert encode(back) == encode(payload)
    return back


def test_round_trip_regularity():
    back = round_trip(check_regularity(make_weight_sequence(Gevrey(2, 1)), 20))
    assert back.moderate_growth_witness == tuple(back.moderate_growth_witness)


def test_round_trip_rho():
    round_trip(find_rho(FACT, geometric_grid(1e-4, 1, 50)))


def test_round_trip_envelope_and_witnesses():
    F = make_test_function(Polynomial.parse("x1*(x1^2 + x2^4)"), Hyperplane(1))
    grid = parse_grid_specs(["x1:1/16:1/2:3,geom", "x2:-1/2:1/2:3"])
    profs = profile_refinements(F, FACT, 1.0, grid, 4, 2)
    back = round_trip(profs[-1])
    assert back.witnesses[2].x == profs[-1].witnesses[2].x
    assert all(isinstance(v, Fraction) for v in back.witnesses[2].x)
    round_trip(fit_envelope(profs))


def test_round_trip_probe_and_classical():
    p = axis_probe(2, FACT)
    c = classical_loja_fit(
        make_test_function(psi_polynomial(2), point_zero_set()),
        parse_grid_specs(["x1:-1/2:1/2:5", "x2:-1/2:1/2:5"]),
    )
    back = round_trip(Ex42Report(p, c, "contrast"))
    assert back.probe.t_ladder == [Fraction(1, 5), Fraction(1, 10), Fraction(1, 20), Fraction(1, 40)]
    assert back.probe.cross_checks[3].closed_form == p.cross_checks[3].closed_form


def test_round_trip_flat():
    xs = [Fraction(1, q) for q in range(1, 40)]
    round_trip(check_flat_bound(FlatModel(1), FACT, xs, 5))


def test_strip_metadata():
    a = dumps(build_report("x", {}, HmPoint(1.0, 1.0, 0.0, 0), "verified", 1.0))
    b = dumps(build_report("x", {}, HmPoint(1.0, 1.0, 0.0, 0), "verified", 2.0))
    assert a != b and strip_metadata(a) == strip_metadata(b)


def test_sorted_keys():
    text = dumps(build_report("x", {"z": 1, "a": 2}, HmPoint(1.0, 1.0, 0.0, 0), "verified", 0.0))
    keys = list(json.loads(text))
    assert keys == sorted(keys)


def test_unknown_payload():
    with pytest.raises(InputError):
        read_report('{"payload_type": "Nope", "payload": {}}')


def test_csv(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(path, ["x", "v"], [(Fraction(1, 3), math.inf), ((1, 2), 0.5)])
    assert path.read_text().splitlines() == ["x,v", "1/3,inf", '"[1, 2]",0.5']
