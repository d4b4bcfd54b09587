"""Command-line surface: symbol-file ingestion, engine dispatch, and
deterministic CSV/JSON/binary report emission.

Grammar::

    gsio <command> --symbol <path> [--order N] [--grid M] [--radii r1,r2]
         [--out path] [--format csv|json|bin] [--seed S]

Commands: assemble, spectrum, berezin, rho, index, region, factorize,
verdict, classify, verify.

Exit codes: 0 success (including definite negative verdicts), 1 usage or
input errors, 2 honest abstention (the computation declined to certify an
answer, e.g. probe instability or an uncertified Fourier tail).

GSIO_THREADS caps BLAS parallelism; it must be read before numpy loads,
so the engine modules are imported lazily inside main().
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

_COMMANDS = ("assemble", "spectrum", "berezin", "rho", "index", "region",
             "factorize", "verdict", "classify", "verify")


@dataclass
class RunConfig:
    command: str
    symbol_path: str | None = None
    order: int = 64
    grid: int = 256
    radii: tuple = (0.9, 0.99)
    out_path: str | None = None
    format: str = "csv"
    seed: int = 0

    def validate(self):
        if self.command not in _COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not 4 <= self.order <= 4096:
            raise ValueError("order must lie in [4, 4096]")
        if not 16 <= self.grid <= 8192:
            raise ValueError("grid must lie in [16, 8192]")
        if any(not 0 < r < 1 for r in self.radii):
            raise ValueError("radii must lie in (0, 1)")
        if self.format not in ("csv", "json", "bin"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.command != "verify" and self.symbol_path is None:
            raise ValueError(f"command {self.command!r} needs --symbol")
        return self


def _fmt(x):
    return f"{float(x):.17g}"


def load_symbol_file(path):
    """Parse and validate a 2x2 symbol JSON file; denominator certification
    runs inside the symbol constructors at load time."""
    from .errors import ParseError
    from .symbols import matrix_symbol_from_json

    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return matrix_symbol_from_json(doc)


# ---------------------------------------------------------------------------
# Report writers (bit-stable: fixed orders, 17-significant-digit floats).
# ---------------------------------------------------------------------------

def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_bytes(path, payload):
    if path is None:
        sys.stdout.buffer.write(payload)
    else:
        with open(path, "wb") as fh:
            fh.write(payload)


def _matrix_report(section, fmt, path):
    import numpy as np

    if fmt == "bin":
        data = np.ascontiguousarray(section.data.astype("<c16"))
        _write_bytes(path, data.tobytes())
        return
    lines = ["row_mode,col_mode,re,im"]
    for i, (_, rm) in enumerate(section.row_grading):
        for j, (_, cm) in enumerate(section.grading):
            v = section.data[i, j]
            lines.append(f"{rm},{cm},{_fmt(v.real)},{_fmt(v.imag)}")
    _write_text(path, "\n".join(lines) + "\n")


def _points_report(points, fmt, path):
    rows = sorted((float(p.real), float(p.imag)) for p in points)
    if fmt == "json":
        _write_text(path, json.dumps(
            [[_fmt(a), _fmt(b)] for a, b in rows], indent=1) + "\n")
        return
    lines = ["re,im"] + [f"{_fmt(a)},{_fmt(b)}" for a, b in rows]
    _write_text(path, "\n".join(lines) + "\n")


def _pair_report(pair, fmt, path):
    lines = ["theta,f_re,f_im,psi_re,psi_im"]
    for theta, fv, pv in pair.rows():
        lines.append(",".join([_fmt(theta), _fmt(fv.real), _fmt(fv.imag),
                               _fmt(pv.real), _fmt(pv.imag)]))
    _write_text(path, "\n".join(lines) + "\n")


def _region_report(region, fmt, path):
    lines = ["re,im,indicator"]
    for re_, im_, flag in region.rows():
        lines.append(f"{_fmt(re_)},{_fmt(im_)},{int(flag)}")
    _write_text(path, "\n".join(lines) + "\n")


def _factor_entry_json(entry):
    from .symbols import symbol_to_json

    return symbol_to_json(entry)


def _factorization_report(fac, path):
    from .symbols import as_rational

    if fac.scalar:
        minus = _factor_entry_json(as_rational(fac.f_minus))
        plus = _factor_entry_json(as_rational(fac.f_plus))
    else:
        minus = [[_factor_entry_json(as_rational(e)) for e in row]
                 for row in fac.f_minus]
        plus = [[_factor_entry_json(as_rational(e)) for e in row]
                for row in fac.f_plus]
    doc = {
        "kappa": sorted(fac.kappa, reverse=True),
        "reconstruction_residual": fac.reconstruction_residual,
        "f_minus": minus,
        "f_plus": plus,
    }
    _write_text(path, json.dumps(doc, indent=1, sort_keys=True) + "\n")


def write_report(result, fmt="csv", path=None):
    """Emit a result artifact, dispatching on its type.

    Output is bit-stable for fixed inputs: rows follow fixed orders and
    floats carry 17 significant digits, so CSV round-trips are lossless.
    """
    import numpy as np

    from .sections import FiniteSection
    from .spectral import InclusionRegion, SymbolPair
    from .wiener_hopf import WHFactorization

    if isinstance(result, FiniteSection):
        _matrix_report(result, fmt, path)
    elif isinstance(result, SymbolPair):
        _pair_report(result, fmt, path)
    elif isinstance(result, InclusionRegion):
        _region_report(result, fmt, path)
    elif isinstance(result, WHFactorization):
        _factorization_report(result, path)
    elif isinstance(result, np.ndarray):
        _points_report(result, fmt, path)
    else:
        raise TypeError(f"no report writer for {type(result).__name__}")


# ---------------------------------------------------------------------------
# Dispatch.
# ---------------------------------------------------------------------------

def run_command(cfg: RunConfig) -> int:
    from . import acceptance, sections, spectral, wiener_hopf
    from .errors import GsioError
    from .sections import gsio_section

    if cfg.command == "verify":
        results = acceptance.run_all(cfg.seed)
        for res in results:
            print(res.line())
        return 0 if all(r.passed for r in results) else 1

    try:
        h = load_symbol_file(cfg.symbol_path)
    except GsioError as exc:
        exc.load_time = True  # invalid input file, not a failed computation
        raise

    if cfg.command == "assemble":
        write_report(gsio_section(h, cfg.order), cfg.format, cfg.out_path)
    elif cfg.command == "spectrum":
        eigs = spectral.dense_spectrum(gsio_section(h, cfg.order))
        write_report(eigs, cfg.format, cfg.out_path)
    elif cfg.command == "berezin":
        import numpy as np

        r = cfg.radii[0]
        grid = np.exp(2j * np.pi * np.arange(cfg.grid) / cfg.grid)
        vals = [spectral.berezin_pair(h, r, xi) for xi in grid]
        pair = spectral.SymbolPair(
            grid, np.array([v[0] for v in vals]),
            np.array([v[1] for v in vals]), float("nan"))
        write_report(pair, cfg.format, cfg.out_path)
    elif cfg.command == "rho":
        pair = spectral.symbol_map_rho(h, cfg.grid, cfg.radii)
        write_report(pair, cfg.format, cfg.out_path)
    elif cfg.command == "index":
        print(f"index={spectral.fredholm_index(h)}")
    elif cfg.command == "region":
        nx = max(16, min(cfg.grid, 128))
        region = spectral.inclusion_region(h, (nx, nx))
        write_report(region, cfg.format, cfg.out_path)
    elif cfg.command == "factorize":
        blocks = sections.extension_blocks(h)
        fac = wiener_hopf.wh_matrix2(blocks.binv_a)
        write_report(fac, "json", cfg.out_path)
    elif cfg.command == "verdict":
        verdict = wiener_hopf.fredholm_verdict(h)
        print(verdict.describe())
    elif cfg.command == "classify":
        flags = spectral.classify(h)
        print(json.dumps(flags.as_dict(), indent=1, sort_keys=True))
    return 0


def _parser():
    p = argparse.ArgumentParser(
        prog="gsio",
        description="Finite-section numerics for generalized singular "
                    "integral operators on the unit circle.",
    )
    p.add_argument("command", choices=_COMMANDS)
    p.add_argument("--symbol", dest="symbol_path")
    p.add_argument("--order", type=int, default=64)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--radii", default="0.9,0.99")
    p.add_argument("--out", dest="out_path")
    p.add_argument("--format", choices=("csv", "json", "bin"), default="csv")
    p.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    threads = os.environ.get("GSIO_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)

    args = _parser().parse_args(argv)
    from .errors import GsioError, ParseError

    try:
        radii = tuple(float(r) for r in str(args.radii).split(",") if r)
        cfg = RunConfig(args.command, args.symbol_path, args.order, args.grid,
                        radii, args.out_path, args.format, args.seed).validate()
    except ValueError as exc:
        print(f"error reason=bad_config detail={exc}", file=sys.stderr)
        return 1

    try:
        return run_command(cfg)
    except ParseError as exc:
        print(f"error reason={exc.reason} detail={exc}", file=sys.stderr)
        return 1
    except GsioError as exc:
        print(f"error reason={exc.reason} detail={exc}", file=sys.stderr)
        return 1 if getattr(exc, "load_time", False) else 2
    except OSError as exc:
        print(f"error reason=io_error detail={exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
