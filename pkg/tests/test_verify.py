import json

import pytest

from chargedbose import verify
from chargedbose.config import to_jsonable

SUITES = ["fock", "bogolubov", "kernels", "packets", "berezin", "dyson", "jellium"]


@pytest.mark.parametrize("name", SUITES)
def test_suite_passes(name):
    out = verify.run_suite(name, seed=3)
    failed = [k for k, c in out["checks"].items() if not c["ok"]]
    assert out["ok"], failed


def test_suite_is_deterministic():
    a = json.dumps(to_jsonable(verify.run_suite("berezin", seed=9)), sort_keys=True)
    b = json.dumps(to_jsonable(verify.run_suite("berezin", seed=9)), sort_keys=True)
    assert a == b


def test_unknown_suite():
    with pytest.raises((KeyError, ValueError)):
        verify.run_suite("nope")
