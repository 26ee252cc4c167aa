import json
import math
from pathlib import Path

import numpy as np
import pytest

from qgenbound import bounds, framework as fw, jsonio
from qgenbound.errors import ConfigurationError

from oracles import memorizer_quantum

DOCS = Path(__file__).resolve().parents[1] / "docs" / "examples"


def test_parse_matrix_forms():
    np.testing.assert_allclose(jsonio.parse_matrix([[1, 0], [0, 2]]), np.diag([1, 2]))
    m = jsonio.parse_matrix({"rows": 1, "cols": 2, "data": [[1.0, 0.5], [0.0, -1.0]]})
    np.testing.assert_allclose(m, [[1 + 0.5j, -1j]])


def test_parse_matrix_error_names_path():
    with pytest.raises(ConfigurationError, match=r"\$\.x"):
        jsonio.parse_matrix({"rows": 2, "cols": 2, "data": [[1, 0]]}, "$.x")


def test_load_json_reports_position():
    with pytest.raises(ConfigurationError, match="line 1"):
        jsonio.load_json('{"a": ')


def test_instance_round_trip():
    inst = memorizer_quantum()
    text = jsonio.dumps(jsonio.instance_to_json(inst))
    back = jsonio.load_instance(text)
    j1, j2 = fw.induce(inst), fw.induce(back)
    assert fw.expected_gen(j1, inst) == pytest.approx(fw.expected_gen(j2, back), abs=1e-15)


def test_missing_field_named():
    obj = jsonio.instance_to_json(memorizer_quantum())
    del obj["losses"]
    with pytest.raises(ConfigurationError, match="losses"):
        jsonio.parse_instance(obj)


def test_dumps_infinity_and_sorted_keys():
    s = jsonio.dumps({"b": math.inf, "a": 1})
    assert json.loads(s) == {"a": 1, "b": "+inf"}
    assert s.index('"a"') < s.index('"b"')


@pytest.mark.parametrize("path", sorted(DOCS.glob("*.json")), ids=lambda p: p.name)
def test_shipped_examples_load_and_bound(path):
    inst = jsonio.load_instance(str(path))
    j = fw.induce(inst)
    rep = bounds.bound_kl(j, inst)
    assert math.isfinite(rep.value) and rep.sound
