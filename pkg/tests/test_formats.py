import numpy as np
import pytest

from rkaczmarz.formats import (
    FormatError,
    atomic_open,
    read_matrix,
    read_vector,
    write_csv,
    write_matrix,
    write_vector,
)
from rkaczmarz.generators import EnsembleSpec, gen_gaussian, gen_partial_fourier


def test_real_matrix_round_trip(tmp_path):
    A = gen_gaussian(EnsembleSpec("gaussian", 20, 5, seed=7))
    write_matrix(tmp_path / "a.rkmat", A)
    B = read_matrix(tmp_path / "a.rkmat")
    assert B.dtype == np.float64 and np.array_equal(A, B)


def test_complex_matrix_round_trip(tmp_path):
    A = gen_partial_fourier(EnsembleSpec("partial_fourier", 30, 7, seed=7))
    write_matrix(tmp_path / "f.rkmat", A)
    B = read_matrix(tmp_path / "f.rkmat")
    assert B.dtype == np.complex128 and np.array_equal(A, B)
    assert (tmp_path / "f.rkmat").read_text().splitlines()[0] == "rkmat 1 complex 30 7"


def test_extreme_floats_round_trip(tmp_path):
    v = np.array([5e-324, 1.7976931348623157e308, -0.0, 0.1, 1 / 3])
    write_vector(tmp_path / "v.rkvec", v)
    assert np.array_equal(read_vector(tmp_path / "v.rkvec"), v)


def test_vector_layout(tmp_path):
    write_vector(tmp_path / "v.rkvec", np.array([1.5, -2.0]))
    assert (tmp_path / "v.rkvec").read_text() == "rkvec 1 real 2\n1.5\n-2\n"
    write_vector(tmp_path / "c.rkvec", np.array([1 + 2j]))
    assert (tmp_path / "c.rkvec").read_text() == "rkvec 1 complex 1\n1,2\n"


@pytest.mark.parametrize(
    "text",
    [
        "",
        "rkvec 1 real 2 2\n1 2\n3 4\n",
        "rkmat 2 real 1 1\n1\n",
        "rkmat 1 quaternion 1 1\n1\n",
        "rkmat 1 real 2 2\n1 2\n",
        "rkmat 1 real 1 2\n1\n",
        "rkmat 1 real 1 1\nabc\n",
        "rkmat 1 complex 1 1\n1\n",
        "rkmat 1 real 0 1\n",
    ],
)
def test_bad_matrix_files(tmp_path, text):
    p = tmp_path / "bad.rkmat"
    p.write_text(text)
    with pytest.raises(FormatError):
        read_matrix(p)


def test_bad_vector_length(tmp_path):
    p = tmp_path / "bad.rkvec"
    p.write_text("rkvec 1 real 3\n1\n2\n")
    with pytest.raises(FormatError):
        read_vector(p)


def test_csv_format(tmp_path):
    write_csv(tmp_path / "t.csv", ("trial", "iter", "error"), [(1, 0, 0.1), (1, 5, 2.0)])
    assert (tmp_path / "t.csv").read_text() == "trial,iter,error\n1,0,0.10000000000000001\n1,5,2\n"


def test_atomic_write_leaves_nothing_on_failure(tmp_path):
    target = tmp_path / "out.txt"
    with pytest.raises(RuntimeError):
        with atomic_open(target) as fh:
            fh.write("partial")
            raise RuntimeError("boom")
    assert list(tmp_path.iterdir()) == []
