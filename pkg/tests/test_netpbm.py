import numpy as np
import pytest

from morphsample.errors import ImageFormatError
from morphsample.grid import BinaryImage, GreyImage
from morphsample.netpbm import (
    format_pgm,
    format_sem,
    parse_pgm,
    parse_sem,
    read_image,
    read_pgm,
    read_sem,
    write_image,
)


def test_plain_pgm_with_comments():
    data = b"P2\n# made by hand\n3 2\n9\n1 2 3\n4 5 # trailing\n 9\n"
    f = parse_pgm(data)
    assert f.ceiling == 9
    assert f.values.tolist() == [[1, 2, 3], [4, 5, 9]]
    assert f.origin == (0, 0)


def test_raw_pgm_eight_and_sixteen_bit():
    f = parse_pgm(b"P5\n2 1\n255\n" + bytes([7, 200]))
    assert f.to_mapping() == {(0, 0): 7, (0, 1): 200}
    wide = parse_pgm(b"P5\n1 1\n1000\n" + (999).to_bytes(2, "big"))
    assert wide.value((0, 0)) == 999
    assert wide.ceiling == 1000


@pytest.mark.parametrize(
    "data",
    [
        b"P3\n1 1\n255\n0\n",
        b"P2\n1 1\n",
        b"P2\n2 2\n9\n1 2 3\n",
        b"P2\n1 1\n9\n12\n",
        b"P5\n2 2\n255\n\x00",
        b"P2\n1 1\n0\n0\n",
    ],
)
def test_malformed_pgm(data):
    with pytest.raises(ImageFormatError):
        parse_pgm(data)


def test_pgm_refuses_partial_domains():
    f = GreyImage.from_mapping({(0, 0): 1, (1, 1): 2}, 255)
    with pytest.raises(ImageFormatError):
        format_pgm(f)


def test_pgm_encodings_agree():
    f = GreyImage(np.array([[0, 128], [255, 3]]), ceiling=255)
    assert parse_pgm(format_pgm(f)) == f
    assert parse_pgm(format_pgm(f, plain=True)) == f
    assert format_pgm(f, plain=True).startswith(b"P2\n2 2\n255\n")


def test_sem_holds_partial_domains_and_origins():
    text = "# comment\nSEM 2 3 1 1 15\n. 4 .\n1 0 .\n"
    f = parse_sem(text)
    assert f.to_mapping() == {(-1, 0): 4, (0, -1): 1, (0, 0): 0}
    assert f.ceiling == 15
    assert parse_sem(format_sem(f)) == f


def test_sem_grid_always_contains_the_origin():
    f = GreyImage.from_mapping({(2, 3): 5}, 9)
    text = format_sem(f)
    assert text.splitlines()[0] == "SEM 3 4 0 0 9"
    assert parse_sem(text) == f


def test_empty_image_round_trips_through_sem():
    assert parse_sem(format_sem(GreyImage.empty(2, 7))).is_empty


@pytest.mark.parametrize(
    "text",
    [
        "PGM 1 1 0 0 9\n0\n",
        "SEM 1 1 0 0 9\n",
        "SEM 1 1 1 0 9\n0\n",
        "SEM 1 2 0 0 9\n0 10\n",
        "SEM 1 1 0 0 9\nx\n",
        "SEM 1 1 0 0 0\n0\n",
    ],
)
def test_malformed_sem(text):
    with pytest.raises(ImageFormatError):
        parse_sem(text)


def test_files_are_dispatched_by_content(tmp_path):
    f = GreyImage(np.array([[1, 2], [3, 4]]), ceiling=15)
    write_image(f, tmp_path / "a.pgm")
    write_image(f, tmp_path / "a.sem")
    assert (tmp_path / "a.pgm").read_bytes().startswith(b"P5")
    assert read_image(tmp_path / "a.pgm") == f
    assert read_image(tmp_path / "a.sem") == f
    assert read_pgm(tmp_path / "a.pgm") == read_sem(tmp_path / "a.sem")
    (tmp_path / "junk.txt").write_text("hello")
    with pytest.raises(ImageFormatError):
        read_image(tmp_path / "junk.txt")


def test_sem_writes_binary_sets_as_unit_images():
    F = BinaryImage.from_points([(0, 0), (1, 1)])
    text = format_sem(GreyImage.constant(F, 1, 1))
    assert text == "SEM 2 2 0 0 1\n1 .\n. 1\n"
