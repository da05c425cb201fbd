"""Dataset file round trips and validation."""

import numpy as np
import pytest

from dshlab.datasets import read_dataset, write_dataset
from dshlab._rng import stream


def test_hamming_round_trip(tmp_path):
    rng = stream(5)
    pts = rng.integers(0, 2, size=(20, 12)).astype(np.uint8)
    path = str(tmp_path / "h.txt")
    write_dataset(path, "hamming", pts)
    domain, back = read_dataset(path)
    assert domain == "hamming"
    assert back.dtype == np.uint8
    assert np.array_equal(back, pts)


def test_sphere_round_trip_is_exact(tmp_path):
    rng = stream(6)
    pts = rng.standard_normal((15, 5))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    path = str(tmp_path / "s.txt")
    write_dataset(path, "sphere", pts)
    domain, back = read_dataset(path)
    assert domain == "sphere"
    # 17 significant digits reproduce the doubles bit for bit
    assert np.array_equal(back, pts)


def test_euclidean_round_trip(tmp_path):
    rng = stream(7)
    pts = 10.0 * rng.standard_normal((8, 3))
    path = str(tmp_path / "e.txt")
    write_dataset(path, "euclidean", pts)
    domain, back = read_dataset(path)
    assert domain == "euclidean"
    assert np.array_equal(back, pts)


def test_empty_dataset_is_legal(tmp_path):
    path = str(tmp_path / "empty.txt")
    write_dataset(path, "hamming", np.zeros((0, 9), dtype=np.uint8))
    domain, back = read_dataset(path)
    assert domain == "hamming"
    assert back.shape == (0, 9)


def test_header_validation(tmp_path):
    path = str(tmp_path / "bad.txt")

    path_obj = tmp_path / "bad.txt"
    path_obj.write_text("torus 4\n0 0 0 0\n")
    with pytest.raises(ValueError):
        read_dataset(path)

    path_obj.write_text("hamming\n")
    with pytest.raises(ValueError):
        read_dataset(path)

    path_obj.write_text("hamming 0\n")
    with pytest.raises(ValueError):
        read_dataset(path)


def test_body_validation(tmp_path):
    p = tmp_path / "body.txt"

    p.write_text("hamming 3\n0 1\n")
    with pytest.raises(ValueError):
        read_dataset(str(p))

    p.write_text("hamming 3\n0 1 2\n")
    with pytest.raises(ValueError):
        read_dataset(str(p))

    p.write_text("sphere 2\n3.0 4.0\n")
    with pytest.raises(ValueError):
        read_dataset(str(p))


def test_write_validation(tmp_path):
    path = str(tmp_path / "w.txt")
    with pytest.raises(ValueError):
        write_dataset(path, "torus", np.zeros((2, 2)))
    with pytest.raises(ValueError):
        write_dataset(path, "hamming", np.zeros(4, dtype=np.uint8))
