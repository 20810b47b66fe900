import math

import pytest

import dynlab


def test_rotation_analyze():
    m = dynlab.analyze({"system": "rotation", "density": 64, "horizon": 64})
    for key in ("ns", "ae", "le", "hns"):
        assert m["verdicts"][key]["positive"]
        assert m["verdicts"][key]["scales"]["horizon"] == 64
    assert m["violations"] == []


def test_threads_do_not_change_verdicts():
    spec = dynlab.gallery_spec("rotation-quarter")
    one = dynlab.analyze(spec, threads=1)["verdicts"]
    four = dynlab.analyze(spec, threads=4)["verdicts"]
    assert one == four


def test_classify_morse():
    m = dynlab.classify({"system": "morse", "density": 64})
    assert m["verdicts"]["classification"]["rn"] == "not-RN"
    assert m["verdicts"]["complexity"]["profile"][:4] == [2, 4, 6, 10]


def test_envelope_quarter_rotation():
    m = dynlab.envelope({"system": "rotation", "params": {"alpha": 0.25}, "density": 32, "horizon": 8}, eps_grid=[0.5])
    assert m["verdicts"]["envelope_size"]["value"] == 4
    assert m["verdicts"]["f_semigroup"]["value"]


def test_chain_takens():
    m = dynlab.chain(dynlab.gallery_spec("takens"))
    assert m["verdicts"]["birkhoff"]["final_size"] == 2


def test_helpers():
    assert dynlab.rotation_dh(math.sqrt(2) - 1, 0.1, 0.3, 100) == pytest.approx(0.2)
    assert dynlab.complexity({"kind": "sft", "forbidden": ["11"]}, 5) == [2, 3, 5, 8, 13]
    assert [dynlab.morse_symbol(n) for n in range(8)] == [0, 1, 1, 0, 1, 0, 0, 1]
    assert "two-arrows" in dynlab.gallery_ids()


def test_errors():
    with pytest.raises(dynlab.InputError, match="dnesity"):
        dynlab.analyze({"system": "rotation", "dnesity": 4})
    with pytest.raises(ValueError):
        dynlab.analyze('{"system": ')
    with pytest.raises(dynlab.InputError):
        dynlab.classify({"system": "shift", "params": {"kind": "explicit", "generator": {"core": "1"}}})
