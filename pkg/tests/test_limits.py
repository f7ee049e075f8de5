import pytest

from kgc import limits
from kgc.limits import Limits


def test_limits_init():
    lim = Limits()
    assert lim.cap_order == 8192
    assert lim.budget_prefixes == 2**31
    assert lim.h2_cap == 128
    assert lim.membership_tuples == 2**16
    assert lim.seed == 0


def test_limits_setters():
    lim = Limits()
    lim.cap_order = 100
    assert lim.cap_order == 100

    with pytest.raises(ValueError, match="Invalid cap_order"):
        lim.cap_order = 0
    with pytest.raises(ValueError, match="Invalid budget_prefixes"):
        lim.budget_prefixes = -5
    with pytest.raises(ValueError, match="Invalid h2_cap"):
        lim.h2_cap = 2.5
    with pytest.raises(ValueError, match="Invalid seed"):
        lim.seed = -1


def test_limits_from_json_dict():
    lim = Limits.from_json_dict({"cap_order": 4096, "seed": 7})
    assert lim.cap_order == 4096
    assert lim.seed == 7
    assert lim.h2_cap == Limits.H2_CAP

    with pytest.raises(ValueError, match="Unknown budget keys"):
        Limits.from_json_dict({"cap": 12})
    with pytest.raises(ValueError, match="Invalid standin_components"):
        Limits.from_json_dict({"standin_components": 0})


def test_limits_duplicate():
    lim = Limits(cap_order=512, membership_samples=10)
    dup = lim.duplicate()
    assert dup is not lim
    assert dup.to_json_dict() == lim.to_json_dict()


def test_configure():
    mine = Limits(h2_cap=16)
    previous = limits.configure(mine)
    try:
        assert limits.current() is mine
    finally:
        restored = limits.configure(previous)
    assert restored is mine
    assert limits.current() is previous
