import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from depthkit import Dataset, DepthResult, Region, load_dataset, load_dissimilarity, save_dataset
from depthkit import write_region, write_results
from depthkit.errors import DataError


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_three_line_csv(tmp_path):
    ds = load_dataset(write(tmp_path, "a.csv", "0,0\n1,0\n0,1\n"))
    assert (ds.n, ds.d) == (3, 2)
    assert np.array_equal(ds.points, [[0, 0], [1, 0], [0, 1]])
    assert ds.ids == (0, 1, 2)


def test_na_sets_missing_mask(tmp_path):
    # row 2, column 1 (1-based) holds NA
    ds = load_dataset(write(tmp_path, "a.csv", "x,y\n1,2\nNA,4\n5,\n"))
    assert ds.has_missing
    assert ds.missing_mask[1, 0] and ds.missing_mask[2, 1]
    assert ds.missing_mask.sum() == 2
    assert ds.columns == ("x", "y")


def test_empty_file(tmp_path):
    with pytest.raises(DataError, match="empty dataset"):
        load_dataset(write(tmp_path, "e.csv", ""))


def test_non_numeric_cell_reports_position(tmp_path):
    with pytest.raises(DataError) as err:
        load_dataset(write(tmp_path, "a.csv", "1,2\n3,abc\n"))
    assert err.value.row == 2 and err.value.column == 2


def test_inconsistent_width(tmp_path):
    with pytest.raises(DataError, match="inconsistent row width"):
        load_dataset(write(tmp_path, "a.csv", "1,2\n3\n"))


def test_id_column_and_json(tmp_path):
    ds = load_dataset(write(tmp_path, "a.csv", "name,x\na,1\nb,2\n"), id_column="name")
    assert ds.ids == ("a", "b") and ds.d == 1
    js = load_dataset(write(tmp_path, "b.json", '{"points": [[0, 1], [null, 2]], "ids": ["p", "q"]}'))
    assert js.ids == ("p", "q") and js.missing_mask[1, 0]


def test_dissimilarity_examples(tmp_path):
    ok = load_dissimilarity(write(tmp_path, "ok.csv", "0,1\n1,0\n"))
    assert np.array_equal(ok, [[0, 1], [1, 0]])
    with pytest.raises(DataError, match="asymmetric"):
        load_dissimilarity(write(tmp_path, "asym.csv", "0,1\n2,0\n"))
    with pytest.raises(DataError, match="negative dissimilarity"):
        load_dissimilarity(write(tmp_path, "neg.csv", "0,-1\n-1,0\n"))


def test_write_one_result(tmp_path):
    out = tmp_path / "r.csv"
    write_results([DepthResult(0, "halfspace", "exact", 0.5)], out)
    lines = out.read_text().splitlines()
    assert lines == ["point_id,notion,method,value,elapsed_ns", "0,halfspace,exact,0.5,0"]


def test_write_empty_results(tmp_path):
    with pytest.raises(DataError):
        write_results([], tmp_path / "r.csv")


def test_write_square_region_ccw(tmp_path):
    sq = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float)
    out = tmp_path / "poly.csv"
    write_region(Region("polygon2d", 0.25, "halfspace", vertices=sq), out)
    rows = [list(map(float, r.split(","))) for r in out.read_text().splitlines()[1:]]
    assert len(rows) == 4
    xy = np.array(rows)[:, 1:]
    area = 0.5 * sum(xy[i, 0] * xy[(i + 1) % 4, 1] - xy[(i + 1) % 4, 0] * xy[i, 1] for i in range(4))
    assert area > 0


def test_write_to_bad_path_names_path(tmp_path):
    with pytest.raises(DataError, match="nodir"):
        write_results([DepthResult(0, "halfspace", "exact", 0.5)], tmp_path / "nodir" / "r.csv")


@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 4)),
              elements=st.floats(-1e12, 1e12, allow_nan=False, allow_subnormal=False)))
def test_round_trip_is_bit_exact(tmp_path_factory, pts):
    path = tmp_path_factory.mktemp("rt") / "d.csv"
    save_dataset(Dataset(pts), path)
    back = load_dataset(path)
    assert np.array_equal(back.points, pts)


def test_dataset_is_immutable():
    ds = Dataset([[0.0, 1.0]])
    with pytest.raises(ValueError):
        ds.points[0, 0] = 3.0
