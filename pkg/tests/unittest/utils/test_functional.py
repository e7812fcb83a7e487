from dataclasses import dataclass
from typing import Optional

import numpy as np
import pytest

from clinrisk.utils import functional


@pytest.mark.parametrize(
    "given,valid,raises",
    [
        ({"a": 1}, {"a", "b"}, False),
        ({}, {"a"}, False),
        ({"a": 1, "c": 2}, {"a", "b"}, True),
    ],
)
def test_check_known_keys(given, valid, raises):
    if raises:
        with pytest.raises(KeyError, match="c not a valid key for \\[semi\\]"):
            functional.check_known_keys(given, valid, "[semi]")
    else:
        functional.check_known_keys(given, valid, "[semi]")


def test_to_jsonable():
    value = {
        "t": (1, 2),
        "a": np.array([[1.5, 2.0]]),
        "b": np.bool_(True),
        "i": np.int64(3),
        "f": np.float32(0.5),
        1: None,
    }
    assert functional.to_jsonable(value) == {
        "t": [1, 2],
        "a": [[1.5, 2.0]],
        "b": True,
        "i": 3,
        "f": 0.5,
        "1": None,
    }
    assert type(functional.to_jsonable(np.int64(3))) is int


@dataclass
class Declared:
    rate: float
    count: int
    flag: bool
    limit: Optional[float]
    bounds: tuple[float, float]
    widths: tuple[int, ...]
    name: str = "x"


def test_declared_fields():
    fields = functional.declared_fields(Declared(0, 3, True, 2, (0, np.int64(1)), (4, 8)))
    assert fields == {
        "rate": 0.0,
        "count": 3,
        "flag": True,
        "limit": 2.0,
        "bounds": [0.0, 1.0],
        "widths": [4, 8],
        "name": "x",
    }
    assert type(fields["rate"]) is float
    assert type(fields["count"]) is int
    assert [type(b) for b in fields["bounds"]] == [float, float]
    assert type(fields["widths"][0]) is int
    unset = functional.declared_fields(Declared(0.5, 1, False, None, (0.1, 0.9), ()))
    assert unset["limit"] is None
    assert unset["widths"] == []


class TestContentHash:
    def test_key_order(self):
        assert functional.content_hash({"a": 1, "b": [1, 2]}) == functional.content_hash(
            {"b": (1, 2), "a": 1}
        )

    def test_sensitive(self):
        assert functional.content_hash({"a": 1}) != functional.content_hash({"a": 2})

    def test_length(self):
        digest = functional.content_hash({"a": 1})
        assert len(digest) == 16
        int(digest, 16)


class TestAbstractClassProperty:
    class Base:
        name = functional.AbstractClassProperty()

    class Child(Base):
        name = "child"

    def test_unset(self):
        with pytest.raises(NotImplementedError, match="name"):
            self.Base().name

    def test_set(self):
        assert self.Child().name == "child"
