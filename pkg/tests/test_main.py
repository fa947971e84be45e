import numpy as np
import pytest

from morphsample.elements import builtin
from morphsample.grey_morph import gclose, gdilate
from morphsample.grid import BinaryImage, GreyImage, Sieve, le
from morphsample.main import (
    EXIT_FAILED,
    EXIT_IO,
    EXIT_OK,
    EXIT_PRECONDITION,
    EXIT_USAGE,
    main,
)
from morphsample.netpbm import format_sem, parse_sem, read_image, write_image
from morphsample.pooling import rho, sigma
from morphsample.sampling import FilterSpec


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def image_path(tmp_path, full_image):
    path = tmp_path / "f.pgm"
    write_image(full_image(), path)
    return path


def test_help_and_usage_errors(capsys):
    assert main(["--help"]) == EXIT_OK
    assert main([]) == EXIT_USAGE
    assert main(["sample", "--image", "f.pgm", "--spacing", "2"]) == EXIT_USAGE


def test_validate_builtin_filter(capsys):
    assert main(["validate", "--filter", "k2", "--spacing", "2,2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "CONDITION VII pass" in out
    assert out.strip().endswith("VALID yes")


def test_validate_reports_failing_filters(tmp_path, capsys):
    path = tmp_path / "box5.sem"
    write_image(GreyImage.constant(BinaryImage.centered_box(2), 0, 255), path)
    assert main(["validate", "--filter", str(path), "--spacing", "2,2"]) == EXIT_FAILED
    assert "CONDITION III fail" in capsys.readouterr().out
    assert main(["validate", "--filter", str(path), "--spacing", "2,2", "--binary-only"]) == EXIT_FAILED


def test_sample_with_unit_spacing_is_identity(image_path, capsys):
    assert main(["sample", "--image", str(image_path), "--spacing", "1,1"]) == EXIT_OK
    assert capsys.readouterr().out == format_sem(read_image(image_path))


def test_sample_compact(image_path, capsys):
    assert main(["sample", "--image", str(image_path), "--spacing", "2x2", "--compact"]) == EXIT_OK
    compact = parse_sem(capsys.readouterr().out)
    assert compact.shape == (5, 5)
    assert compact.value((1, 1)) == read_image(image_path).value((2, 2))


def test_op_writes_pgm(image_path, tmp_path, flat3):
    out = tmp_path / "g.pgm"
    assert main(["op", "dilate", "--image", str(image_path), "--se", "flat3", "--out", str(out)]) == EXIT_OK
    # PGM drops the (-1, -1) origin of the grown frame
    expected = gdilate(read_image(image_path), flat3)
    assert read_image(out).values.tolist() == expected.values.tolist()


def test_reconstruct_samples_its_input_first(image_path, capsys):
    assert main(["reconstruct", "max", "--image", str(image_path), "--filter", "k2", "--spacing", "2,2"]) == EXIT_OK
    rebuilt = parse_sem(capsys.readouterr().out)
    assert rebuilt.value((0, 0)) == read_image(image_path).value((0, 0))


def test_pool_needs_sampled_input_for_sigma_dot(image_path):
    args = ["pool", "sigma-dot", "--image", str(image_path), "--filter", "k2", "--spacing", "2,2"]
    assert main(args) == EXIT_PRECONDITION
    assert main(["pool", "sigma", *args[2:]]) == EXIT_OK


def test_io_errors(tmp_path):
    junk = tmp_path / "junk.pgm"
    junk.write_bytes(b"P2\n2 2\n9\n1\n")
    assert main(["sample", "--image", str(junk), "--spacing", "2,2"]) == EXIT_IO
    assert main(["sample", "--image", str(tmp_path / "missing.pgm"), "--spacing", "2,2"]) == EXIT_IO


def test_partial_images_cannot_be_written_as_pgm(tmp_path):
    src = tmp_path / "holes.sem"
    write_image(GreyImage.from_mapping({(0, 0): 1, (1, 1): 2}, 15), src)
    out = tmp_path / "out.pgm"
    assert main(["sample", "--image", str(src), "--spacing", "1,1", "--out", str(out)]) == EXIT_IO


def test_verify_small_run(capsys):
    args = ["verify", "--suite", "duality", "--trials", "2", "--size", "6,6", "--threads", "1"]
    assert main(args) == EXIT_OK
    assert "VERDICT pass" in capsys.readouterr().out


def test_verify_unknown_suite():
    assert main(["verify", "--suite", "no-such-suite", "--trials", "1"]) == EXIT_USAGE


def test_verify_rejects_inverted_value_range():
    assert main(["verify", "--trials", "1", "--value-min", "9", "--value-max", "3"]) == EXIT_USAGE


def test_exhaustive_cli(capsys):
    assert main(["exhaustive", "--predicate", "grey-adjunction", "--ceiling", "1"]) == EXIT_OK
    assert "evaluations=256" in capsys.readouterr().out


def test_demo_figures_are_byte_identical(image_path, tmp_path, capsys):
    outdir = tmp_path / "figures"
    assert main(["demo", "figures", "--image", str(image_path), "--outdir", str(outdir)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "IDENTICAL sample_dilation yes" in out
    assert "IDENTICAL sample_erosion yes" in out
    assert "IDENTICAL sigma_dilation yes" in out
    assert len(list(outdir.glob("*.sem"))) == 41
    assert (outdir / "sample_then_dilate.sem").read_bytes() == (
        outdir / "min_reconstruction_dilate_sample.sem"
    ).read_bytes()
    assert np.all(read_image(outdir / "f.sem").values >= 40)


def test_demo_figures_cover_pooling_with_a_sieve_element(image_path, tmp_path, capsys):
    outdir = tmp_path / "figures"
    assert main(["demo", "figures", "--image", str(image_path), "--outdir", str(outdir)]) == EXIT_OK
    out = capsys.readouterr().out
    for part in ("I", "II", "III", "IV", "V", "VI", "VII", "VIII"):
        assert f"RESULT h2_relations.{part} pass" in out
    f = read_image(image_path)
    k, c = builtin("k2"), builtin("c2")
    spec = FilterSpec.build(k, Sieve(spacing=(2, 2)))
    assert read_image(outdir / "sigma_dilate_c.sem") == sigma(gdilate(f, c), spec)
    assert read_image(outdir / "rho_then_close_c.sem") == gclose(rho(f, spec), c)
    assert read_image(outdir / "rho_dilate_k_close_c.sem") == rho(gclose(gdilate(f, k), c), spec)
    assert le(read_image(outdir / "rho_then_close_c.sem"), read_image(outdir / "rho_dilate_k_close_c.sem"))


def test_demo_rejects_a_sieve_element_off_the_sieve(image_path, tmp_path):
    args = ["demo", "figures", "--image", str(image_path), "--outdir", str(tmp_path / "out"), "--c", "flat3"]
    assert main(args) == EXIT_PRECONDITION
