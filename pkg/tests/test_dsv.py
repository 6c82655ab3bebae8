import numpy as np
import pytest

from swcca.dsv import read_matrix, write_matrix
from swcca.errors import DataFormatError


def test_round_trip_exact(tmp_path, rng):
    X = rng.normal(size=(7, 4)) * 10.0 ** rng.integers(-8, 8, size=(7, 4))
    write_matrix(tmp_path / "m.csv", X, ["a", "b", "c", "d"])
    values, names = read_matrix(tmp_path / "m.csv")
    np.testing.assert_array_equal(values, X)
    assert names == ["a", "b", "c", "d"]


@pytest.mark.parametrize("suffix,delim", [(".csv", ","), (".tsv", "\t"), (".txt", ";"), (".txt", " ")])
def test_delimiters(tmp_path, suffix, delim):
    path = tmp_path / f"m{suffix}"
    path.write_text(delim.join(["1", "2.5"]) + "\n" + delim.join(["-3", "4e2"]) + "\n")
    values, names = read_matrix(path)
    np.testing.assert_array_equal(values, [[1, 2.5], [-3, 400]])
    assert names is None


def test_bad_field_location(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x1,x2\n1,2\n3,oops\n")
    with pytest.raises(DataFormatError) as exc:
        read_matrix(path)
    assert (exc.value.line, exc.value.column) == (3, 2)
    assert "bad.csv:3:2:" in str(exc.value)


def test_ragged_and_empty(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text("1,2\n3\n")
    with pytest.raises(DataFormatError) as exc:
        read_matrix(path)
    assert exc.value.line == 2
    (tmp_path / "empty.csv").write_text("\n")
    with pytest.raises(DataFormatError):
        read_matrix(tmp_path / "empty.csv")
    (tmp_path / "nan.csv").write_text("1,nan\n")
    with pytest.raises(DataFormatError):
        read_matrix(tmp_path / "nan.csv")
