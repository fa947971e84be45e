"""morphsample CLI - morphology, sampling, pooling and theorem verification."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from pydantic import ValidationError

from .config import Settings, load_settings
from .elements import BUILTIN_ELEMENTS, load_element
from .errors import ImageFormatError, MorphError, UnknownPredicateError
from .grey_morph import clamp_free, gclose, gdilate, gerode, gopen
from .grid import GreyImage, Sieve, restrict
from .netpbm import format_sem, read_image, write_image
from .pooling import delta, h2_relations, rho, sampled_filter, sigma, sigma_dot
from .sampling import FilterSpec, max_reconstruct, min_reconstruct, validate_binary_conditions
from .tracing import task, workflow
from .verify import EXHAUSTIVE, SUITES, ExhaustiveBounds, TrialConfig, exhaustive_small, run_suite

# Setup logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%H:%M:%S",
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_PRECONDITION = 3
EXIT_FAILED = 4
EXIT_INTERRUPTED = 130

SE_CHOICES = {"flat5": "flat_b", "b2": "b2", "random": "random_opened"}


# --- Argument types ---


def _pair(text: str) -> tuple[int, int]:
    """Parse "R,C" or "RxC"."""
    parts = text.replace("x", ",").split(",")
    try:
        values = tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected R,C got {text!r}") from None
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected two integers, got {text!r}")
    return values


def _sieve(text: str) -> Sieve:
    rows, cols = _pair(text)
    if rows < 1 or cols < 1:
        raise argparse.ArgumentTypeError(f"spacings must be positive, got {text!r}")
    return Sieve(spacing=(rows, cols))


# --- I/O helpers ---


def _emit(image: GreyImage, out: Path | None, plain: bool = False) -> None:
    if out is None:
        sys.stdout.write(format_sem(image))
        return
    write_image(image, out, plain)
    logger.info(f"Wrote {out}")


def _spec(args: argparse.Namespace, ceiling: int) -> FilterSpec:
    return FilterSpec.build(load_element(args.filter, ceiling), args.spacing)


def _banner(title: str) -> None:
    logger.info("=" * 50)
    logger.info(title)
    logger.info("=" * 50)


# --- Subcommands ---


def cmd_op(args: argparse.Namespace) -> int:
    f = read_image(args.image)
    se = load_element(args.se, f.ceiling)
    ops: dict[str, Callable[[GreyImage, GreyImage], GreyImage]] = {
        "dilate": gdilate,
        "erode": gerode,
        "open": gopen,
        "close": gclose,
    }
    _emit(ops[args.operation](f, se), args.out, args.plain)
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    f = read_image(args.image)
    sampled = restrict(f, args.spacing)
    if args.compact:
        sampled = args.spacing.compact(sampled)
    _emit(sampled, args.out, args.plain)
    return EXIT_OK


def _sampled_input(f: GreyImage, spec: FilterSpec) -> GreyImage:
    if spec.sieve.is_sampled(f):
        return f
    logger.info("Input is not on the sieve; sampling it first")
    return restrict(f, spec.sieve)


def cmd_reconstruct(args: argparse.Namespace) -> int:
    f = read_image(args.image)
    spec = _spec(args, f.ceiling)
    g = _sampled_input(f, spec)
    result = max_reconstruct(g, spec) if args.kind == "max" else min_reconstruct(g, spec)
    _emit(result, args.out, args.plain)
    return EXIT_OK


def cmd_pool(args: argparse.Namespace) -> int:
    f = read_image(args.image)
    spec = _spec(args, f.ceiling)
    ops = {"sigma": sigma, "sigma-dot": sigma_dot, "rho": rho, "delta": delta}
    _emit(ops[args.operator](f, spec), args.out, args.plain)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    k = load_element(args.filter)
    if args.binary_only:
        report = validate_binary_conditions(k.domain, args.spacing)
    else:
        report = FilterSpec.build(k, args.spacing).report
    print(report.render())
    return EXIT_OK if report.passed else EXIT_FAILED


@workflow(name="verify_cli")
def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    k = load_element(args.filter, args.ceiling)
    spec = FilterSpec.build(k, args.spacing)
    overrides: dict[str, object] = {
        "seed": args.seed,
        "trials": args.trials,
        "image_size": args.size,
        "suite": args.suite,
        "holes": not args.no_holes,
        "threads": args.threads or settings.threads,
    }
    if args.value_min is not None:
        overrides["value_min"] = args.value_min
    if args.value_max is not None:
        overrides["value_max"] = args.value_max
    config = TrialConfig.canonical(spec, SE_CHOICES[args.se], **overrides)

    _banner(f"VERIFY {', '.join(args.suite)}: {config.trials} trials, seed {config.seed}")
    logger.info(f"Values in [{config.value_min}, {config.value_max}], ceiling {config.ceiling}")
    report = run_suite(config, settings)
    logger.info(f"Wall time: {report.wall_time:.2f}s")
    print(report.json_lines() if args.format == "json" else report.render())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_exhaustive(args: argparse.Namespace, settings: Settings) -> int:
    k = None
    if args.filter is not None:
        k = load_element(args.filter, args.ceiling)
    bounds = ExhaustiveBounds(shape=args.shape, ceiling=args.ceiling, spacing=args.spacing.spacing, filter=k)
    report = exhaustive_small(args.predicate, bounds, settings)
    logger.info(f"Wall time: {report.wall_time:.2f}s")
    print(report.json_lines() if args.format == "json" else report.render())
    return EXIT_OK if report.passed else EXIT_FAILED


@task(name="write_figure")
def _figure(outdir: Path, name: str, image: GreyImage) -> Path:
    path = outdir / f"{name}.sem"
    write_image(image, path)
    return path


@workflow(name="demo_figures")
def cmd_demo(args: argparse.Namespace) -> int:
    """Write every figure pipeline for one input image, one file per image."""
    f = read_image(args.image)
    s = args.spacing
    spec = _spec(args, f.ceiling)
    spec.require_valid()
    k = spec.k
    b = load_element(args.se, f.ceiling)
    if gopen(b, k) != b:
        logger.warning(f"{args.se} is not open under {args.filter}; using its opening")
        b = gopen(b, k)
    if not clamp_free(f, k, b, k):
        logger.warning("Input is not clamp-free for these elements; identities may not hold")

    args.outdir.mkdir(parents=True, exist_ok=True)
    fS, bS = restrict(f, s), restrict(b, s)
    dil, clo = gdilate(fS, k), gclose(fS, k)
    bSk = gdilate(bS, k)

    _banner("STEP 1: Sampling and reconstruction")
    figures = {
        "f": f,
        "f_S": fS,
        "max_reconstruction": dil,
        "min_reconstruction": clo,
    }
    _banner("STEP 2: Sample dilation and erosion")
    figures.update(
        {
            "dilate_then_sample": restrict(gdilate(f, b), s),
            "sample_then_dilate": gdilate(fS, bS),
            "min_reconstruction_dilate_sample": restrict(gdilate(clo, b), s),
            "erode_then_sample": restrict(gerode(f, b), s),
            "sample_then_erode": gerode(fS, bS),
            "max_reconstruction_erode_sample": restrict(gerode(dil, b), s),
        }
    )
    _banner("STEP 3: Opening and closing bounds")
    figures.update(
        {
            "opening_lower": restrict(gopen(f, bSk), s),
            "opening_sampled": gopen(fS, bS),
            "opening_upper": restrict(gopen(dil, b), s),
            "closing_lower": restrict(gclose(clo, b), s),
            "closing_sampled": gclose(fS, bS),
            "closing_upper": restrict(gclose(f, bSk), s),
        }
    )
    _banner("STEP 4: Pooling")
    figures.update({"sigma": sigma(f, spec), "rho": rho(f, spec), "delta": delta(f, spec)})

    _banner(f"STEP 5: Pooling and morphology by {args.c}")
    c = sampled_filter(load_element(args.c, f.ceiling), spec)
    fk = gdilate(f, k)
    ops = {"dilate": gdilate, "erode": gerode, "open": gopen, "close": gclose}
    for op_name, op in ops.items():
        figures[f"sigma_{op_name}_c"] = sigma(op(f, c), spec)
        figures[f"sigma_then_{op_name}_c"] = op(sigma(f, spec), c)
        figures[f"rho_{op_name}_c"] = rho(op(f, c), spec)
        figures[f"rho_then_{op_name}_c"] = op(rho(f, spec), c)
        if op_name != "dilate":
            figures[f"sigma_dilate_k_{op_name}_c"] = sigma(op(fk, c), spec)
            figures[f"rho_dilate_k_{op_name}_c"] = rho(op(fk, c), spec)
    relations = h2_relations(f, c, spec)

    for name, image in figures.items():
        _figure(args.outdir, name, image)
    logger.info(f"Wrote {len(figures)} figures to {args.outdir}")

    pairs = [
        ("sample_dilation", "sample_then_dilate", "min_reconstruction_dilate_sample"),
        ("sample_erosion", "sample_then_erode", "max_reconstruction_erode_sample"),
        ("sigma_dilation", "sigma_dilate_c", "sigma_then_dilate_c"),
    ]
    ok = True
    for label, left, right in pairs:
        same = (args.outdir / f"{left}.sem").read_bytes() == (args.outdir / f"{right}.sem").read_bytes()
        ok &= same
        print(f"IDENTICAL {label} {'yes' if same else 'no'}")
    print(relations.render())
    return EXIT_OK if ok and relations.passed else EXIT_FAILED


# --- Parser ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morphsample",
        description="Grey-value morphological sampling, max-pooling and theorem verification",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  morphsample validate --filter k2 --spacing 2,2
  morphsample op dilate --image f.pgm --se flat3 --out g.pgm
  morphsample verify --suite grey-sample-dilation --seed 7 --trials 200 --filter k2 --se b2
  morphsample demo figures --image f.pgm --outdir figures
        """,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def io_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--image", type=Path, required=True, help="Input PGM or SEM image")
        p.add_argument("--out", type=Path, default=None, help="Output path (.pgm writes PGM, else SEM; default stdout)")
        p.add_argument("--plain", action="store_true", help="Write plain (P2) PGM")

    p = sub.add_parser("op", help="Apply a grey morphological operator")
    p.add_argument("operation", choices=["dilate", "erode", "open", "close"])
    p.add_argument("--se", required=True, help=f"Structuring element: path or one of {', '.join(BUILTIN_ELEMENTS)}")
    io_args(p)

    p = sub.add_parser("sample", help="Restrict an image to the sieve")
    p.add_argument("--spacing", type=_sieve, required=True, help="Sieve spacing R,C")
    p.add_argument("--compact", action="store_true", help="Divide sampled coordinates by the spacing")
    io_args(p)

    p = sub.add_parser("reconstruct", help="Minimal or maximal reconstruction from samples")
    p.add_argument("kind", choices=["min", "max"])
    p.add_argument("--filter", required=True, help="Sampling filter k: path or built-in name")
    p.add_argument("--spacing", type=_sieve, required=True)
    io_args(p)

    p = sub.add_parser("pool", help="Generalized max-pooling operators")
    p.add_argument("operator", choices=["sigma", "sigma-dot", "rho", "delta"])
    p.add_argument("--filter", required=True)
    p.add_argument("--spacing", type=_sieve, required=True)
    io_args(p)

    p = sub.add_parser("validate", help="Check the sampling conditions for a filter and sieve")
    p.add_argument("--filter", required=True)
    p.add_argument("--spacing", type=_sieve, required=True)
    p.add_argument("--binary-only", action="store_true", help="Check the binary conditions on the domain only")

    p = sub.add_parser("verify", help="Run randomized theorem suites")
    p.add_argument("--suite", action="append", default=None, help=f"Suite or predicate name (repeatable): {', '.join(SUITES)}")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--size", type=_pair, default=(24, 24), help="Image size RxC")
    p.add_argument("--filter", default="flat3", help="flat3, k2 or a path")
    p.add_argument("--se", choices=sorted(SE_CHOICES), default="flat5")
    p.add_argument("--spacing", type=_sieve, default=Sieve(spacing=(2, 2)))
    p.add_argument("--ceiling", type=int, default=None, help="Grey ceiling l for built-in filters")
    p.add_argument("--value-min", type=int, default=None)
    p.add_argument("--value-max", type=int, default=None)
    p.add_argument("--no-holes", action="store_true", help="Draw full-rectangle images")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("exhaustive", help="Check a law on every image within small bounds")
    p.add_argument("--predicate", choices=[*EXHAUSTIVE, *(n.replace("_", "-") for n in EXHAUSTIVE if "_" in n)], required=True)
    p.add_argument("--shape", type=_pair, default=(2, 2))
    p.add_argument("--ceiling", type=int, default=3)
    p.add_argument("--spacing", type=_sieve, default=Sieve(spacing=(2, 2)))
    p.add_argument("--filter", default=None, help="Filter k (default flat 3x3)")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("demo", help="Reproduce the figure pipelines")
    demo = p.add_subparsers(dest="demo", required=True)
    p = demo.add_parser("figures", help="Write every figure pipeline output for one image")
    p.add_argument("--image", type=Path, required=True)
    p.add_argument("--outdir", type=Path, required=True)
    p.add_argument("--filter", default="k2")
    p.add_argument("--se", default="b2")
    p.add_argument("--c", default="c2", help="Element on the sieve for the pooling figures")
    p.add_argument("--spacing", type=_sieve, default=Sieve(spacing=(2, 2)))
    return parser


def _dispatch(args: argparse.Namespace, settings: Settings) -> int:
    if args.command == "verify":
        args.suite = args.suite or ["all"]
        return cmd_verify(args, settings)
    if args.command == "exhaustive":
        return cmd_exhaustive(args, settings)
    handlers = {
        "op": cmd_op,
        "sample": cmd_sample,
        "reconstruct": cmd_reconstruct,
        "pool": cmd_pool,
        "validate": cmd_validate,
        "demo": cmd_demo,
    }
    return handlers[args.command](args)


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    settings = load_settings()
    logging.getLogger().setLevel(logging.DEBUG if args.verbose else settings.log_level)

    try:
        return _dispatch(args, settings)
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        return EXIT_INTERRUPTED
    except UnknownPredicateError as exc:
        logger.error(str(exc))
        return EXIT_USAGE
    except ValidationError as exc:
        logger.error(f"Invalid configuration: {exc}")
        return EXIT_USAGE
    except (OSError, ImageFormatError) as exc:
        logger.error(f"I/O error: {exc}")
        return EXIT_IO
    except MorphError as exc:
        logger.error(f"Precondition failed: {exc}")
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
