import io

import numpy as np

from thetatwist import jsonimpl
from thetatwist.fitting import fit_exponent


def test_complex_and_numpy_values():
    data = {
        "z": 1 + 2j,
        "zz": np.complex128(-0.5j),
        "i": np.int64(7),
        "f": np.float32(0.25),
        "b": np.bool_(True),
        "a": np.arange(3),
    }
    assert jsonimpl.loads(jsonimpl.dumps(data)) == {
        "z": {"re": 1.0, "im": 2.0},
        "zz": {"re": -0.0, "im": -0.5},
        "i": 7,
        "f": 0.25,
        "b": True,
        "a": [0, 1, 2],
    }


def test_objects_with_as_dict():
    fit = fit_exponent([(2, 4), (4, 16), (8, 64)])
    assert jsonimpl.loads(jsonimpl.dumps({"fit": fit}))["fit"]["slope"] == fit.slope


def test_output_is_sorted_and_indented():
    text = jsonimpl.dumps({"b": 1, "a": 2})
    assert text == '{\n  "a": 2,\n  "b": 1\n}'
    assert jsonimpl.dumps({"b": 1, "a": 2}, indent=None) == '{"a": 2, "b": 1}'


def test_dump_and_load():
    fp = io.StringIO()
    jsonimpl.dump({"x": [1j]}, fp)
    fp.seek(0)
    assert jsonimpl.load(fp) == {"x": [{"re": 0.0, "im": 1.0}]}
