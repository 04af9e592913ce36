"""Command-line front end.

Usage::

    huapickrell [options] COMMAND [options]

Options may appear before or after the command.  ``--config FILE`` reads an
INI file whose ``[run]`` section uses the same keys as the long options
(dashes replaced by underscores); flags given on the command line win.
Results go to ``--output`` (default ``results``); the environment variable
``HUAPICKRELL_OUTPUT_DIR`` overrides the output directory.
"""
import argparse
import concurrent.futures
import configparser
from dataclasses import asdict, dataclass, field
import math
import os
import sys

import numpy as np

from . import __version__, ergodic, hua_pickrell as hp, limit_kernel as lk, records
from .errors import HuaPickrellError, UsageError

COMMANDS = ("eval-kernel", "sample", "estimate-corr", "converge", "disjointness", "gamma2", "painleve", "selftest")
CHUNK = 1000

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_IO = 5


@dataclass
class RunConfig:
    command: str
    s_re: float = 0.0
    s_im: float = 0.0
    N: int = 10
    N_list: list = field(default_factory=lambda: [25, 50, 100, 200])
    seed: int = 0
    samples: int = 1000
    x_min: float = 0.1
    x_max: float = 2.0
    grid: int = 50
    boxes: list = field(default_factory=lambda: [[0.1, 0.2], [0.2, 0.4], [0.4, 1.0]])
    k: int = 1
    eps_list: list = field(default_factory=lambda: [0.2, 0.1, 0.05])
    t_list: list = field(default_factory=lambda: [0.8, 1.0, 2.0])
    s1: complex = 0.0
    s2: complex = 1.0
    N_max: int = 10000
    order: int = 40
    workers: int = 0
    output: str = "results"
    archive: str = None
    dump: bool = False

    @property
    def s(self):
        return complex(self.s_re, self.s_im)


# ---------------------------------------------------------------------------
# parsing

_CONVERT = {
    "s_re": float, "s_im": float, "N": int, "seed": int, "samples": int, "x_min": float,
    "x_max": float, "grid": int, "k": int, "N_max": int, "order": int, "workers": int,
    "output": str, "archive": str,
}


def _float_list(text):
    return [float(v) for v in str(text).replace(",", " ").split()]


def _int_list(text):
    return [int(v) for v in str(text).replace(",", " ").split()]


def _boxes(text):
    out = []
    for tok in str(text).replace(",", " ").split():
        lo, hi = tok.split(":")
        out.append([float(lo), float(hi)])
    return out


def _complex(text):
    return complex(str(text).replace(" ", "").replace("i", "j"))


def _bool(text):
    return str(text).strip().lower() in ("1", "true", "yes", "on")


_LISTS = {"N_list": _int_list, "eps_list": _float_list, "t_list": _float_list, "boxes": _boxes,
          "s1": _complex, "s2": _complex, "dump": _bool}


def _add_options(p, suppress):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--config", default=d, help="INI file with a [run] section")
    p.add_argument("--s-re", dest="s_re", default=d, help="real part of s (must exceed -1/2)")
    p.add_argument("--s-im", dest="s_im", default=d, help="imaginary part of s")
    p.add_argument("--N", dest="N", default=d, help="matrix size / particle number")
    p.add_argument("--N-list", dest="N_list", default=d, help="comma-separated sizes")
    p.add_argument("--seed", default=d, help="64-bit seed")
    p.add_argument("--samples", default=d, help="number of Monte Carlo samples")
    p.add_argument("--x-min", dest="x_min", default=d)
    p.add_argument("--x-max", dest="x_max", default=d)
    p.add_argument("--grid", default=d, help="grid points per axis")
    p.add_argument("--boxes", default=d, help="intervals lo:hi separated by commas")
    p.add_argument("--k", default=d, help="correlation order (1 or 2)")
    p.add_argument("--eps-list", dest="eps_list", default=d)
    p.add_argument("--t-list", dest="t_list", default=d)
    p.add_argument("--s1", default=d)
    p.add_argument("--s2", default=d)
    p.add_argument("--N-max", dest="N_max", default=d)
    p.add_argument("--order", default=d, help="quadrature order for Fredholm determinants")
    p.add_argument("--workers", default=d, help="worker processes (default: all cores)")
    p.add_argument("--output", default=d, help="output directory")
    p.add_argument("--archive", default=d, help="sample archive to read instead of sampling")
    p.add_argument("--dump", default=d, action="store_const", const="1", help="also write binary matrix dumps")


def build_parser():
    parser = argparse.ArgumentParser(prog="huapickrell", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _add_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        _add_options(sp, suppress=True)
    return parser




def _convert(key, raw):
    try:
        if key in _LISTS:
            return _LISTS[key](raw)
        return _CONVERT[key](raw)
    except (ValueError, TypeError) as exc:
        raise UsageError(key, f"cannot parse {raw!r}: {exc}") from None


def parse_config(argv):
    """Parse flags (and an optional config file) into a validated RunConfig."""
    parser = build_parser()

    def fail(message):
        raise UsageError("arguments", message)

    parser.error = fail
    for sp in parser._subparsers._group_actions[0].choices.values():
        sp.error = fail
    ns = vars(parser.parse_args(argv))
    command = ns.pop("command", None)
    values = {}
    cfg = ns.pop("config", None)
    if cfg:
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        try:
            ok = cp.read(cfg)
        except configparser.Error as exc:
            raise UsageError("config", f"malformed config file: {exc}") from None
        if not ok:
            raise UsageError("config", f"cannot read {cfg}")
        section = cp["run"] if cp.has_section("run") else cp[cp.default_section]
        for key, raw in section.items():
            key = key.replace("-", "_")
            if key == "command":
                # a manifest can be fed back in; an explicit command wins
                command = command or raw.strip()
                continue
            if key not in _CONVERT and key not in _LISTS:
                raise UsageError(key, "unknown configuration key")
            values[key] = _convert(key, raw)
    if command not in COMMANDS:
        raise UsageError("command", "a command is required: " + ", ".join(COMMANDS))
    for key, raw in ns.items():
        if raw is not None:
            values[key] = _convert(key, raw)
    cfg_obj = RunConfig(command=command, **values)
    validate(cfg_obj)
    return cfg_obj


def validate(c):
    if not c.s_re > -0.5:
        raise UsageError("s_re", "Re s must exceed -1/2")
    for key in ("s1", "s2"):
        if not complex(getattr(c, key)).real > -0.5:
            raise UsageError(key, "Re s must exceed -1/2")
    if c.samples < 1:
        raise UsageError("samples", "sample count must be at least 1")
    if c.N < 1:
        raise UsageError("N", "N must be positive")
    if c.command == "sample" and c.N > hp.N_CAP:
        raise UsageError("N", f"sampling supports N <= {hp.N_CAP}")
    if not c.N_list or any(n < 1 for n in c.N_list):
        raise UsageError("N_list", "N list must be nonempty and positive")
    if c.grid < 1:
        raise UsageError("grid", "grid must be nonempty")
    if not c.x_min < c.x_max:
        raise UsageError("x_min", "need x_min < x_max")
    if not c.boxes:
        raise UsageError("boxes", "at least one box is required")
    if not c.eps_list or any(e <= 0 for e in c.eps_list):
        raise UsageError("eps_list", "epsilons must be positive")
    if not c.t_list or any(t <= 0 for t in c.t_list):
        raise UsageError("t_list", "t values must be positive")
    if c.k not in (1, 2):
        raise UsageError("k", "k must be 1 or 2")
    if c.N_max < 3:
        raise UsageError("N_max", "N_max must be at least 3")
    if c.workers < 0:
        raise UsageError("workers", "workers must be nonnegative")
    if not 0 <= c.seed < 2**64:
        raise UsageError("seed", "seed must be a 64-bit nonnegative integer")


# ---------------------------------------------------------------------------
# sampling with deterministic chunking


def _chunk_job(args):
    N, s, child, size, want_matrices = args
    rng = np.random.default_rng(child)
    if want_matrices:
        X = hp.sample_matrices(N, s, rng, size)
        return np.linalg.eigvalsh(X), X
    return hp.sample_spectra(N, s, rng, size), None


def sample_spectra_parallel(N, s, seed, count, workers=0, want_matrices=False):
    """Spectra (ascending) of ``count`` samples; identical for any worker count.

    Samples are produced in fixed chunks of ``CHUNK``, each with its own child
    of ``SeedSequence(seed)``; chunks are merged in index order.
    """
    n_chunks = (count + CHUNK - 1) // CHUNK
    children = np.random.SeedSequence(int(seed)).spawn(n_chunks)
    jobs = [(N, complex(s), children[i], min(CHUNK, count - i * CHUNK), want_matrices) for i in range(n_chunks)]
    workers = workers or os.cpu_count() or 1
    if workers == 1 or n_chunks == 1:
        parts = [_chunk_job(j) for j in jobs]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=min(workers, n_chunks)) as ex:
            parts = list(ex.map(_chunk_job, jobs))
    spectra = np.concatenate([p[0] for p in parts])
    mats = np.concatenate([p[1] for p in parts]) if want_matrices else None
    return spectra, mats


# ---------------------------------------------------------------------------
# commands


def _cmd_eval_kernel(c):
    xs = np.linspace(c.x_min, c.x_max, c.grid)
    K = lk.kernel_inf_matrix(xs, xs, c.s)
    K = 0.5 * (K + K.T)
    rows = [(xs[i], xs[j], K[i, j]) for i in range(xs.size) for j in range(xs.size)]
    return ["x1", "x2", "kernel"], rows, {}


def _cmd_sample(c, outdir):
    spectra, mats = sample_spectra_parallel(c.N, c.s, c.seed, c.samples, c.workers, c.dump)
    records.write_archive(os.path.join(outdir, "sample.jsonl"),
                          records.archive_records(spectra, c.seed, c.N, c.s))
    if c.dump:
        records.write_matrix_dump(os.path.join(outdir, "sample.bin"), mats)
    rows = []
    for i, lam in enumerate(spectra):
        sm = ergodic.spectral_summary(lam[::-1], c.N)
        rows.append((i, lam[-1], lam[0], sm.c, sm.d))
    return ["index", "lambda_max", "lambda_min", "c", "d"], rows, {"archive": "sample.jsonl"}


def _load_or_sample(c, N):
    if c.archive:
        recs = records.read_archive(c.archive)
        return records.archive_spectra(r for r in recs if r["N"] == N)
    return sample_spectra_parallel(N, c.s, c.seed, c.samples, c.workers)[0]


def _cmd_estimate_corr(c):
    spectra = _load_or_sample(c, c.N)
    scaled = spectra / c.N
    if c.k == 1:
        boxes = [(tuple(b),) for b in c.boxes]
    else:
        boxes = [(tuple(b1), tuple(b2)) for b1 in c.boxes for b2 in c.boxes]
    est = ergodic.estimate_correlation(scaled, boxes, c.k)
    from .pseudo_jacobi import EnsembleParams

    exact = ergodic.expected_box_counts(EnsembleParams(c.s, c.N), boxes, c.k)
    rows = []
    for b, m, se, ex in zip(boxes, est.counts, est.stderr, exact):
        flat = [v for iv in b for v in iv]
        if c.k == 1:
            flat += [float("nan"), float("nan")]
        rows.append(tuple(flat) + (m, se, ex))
    cols = ["lo1", "hi1", "lo2", "hi2", "count", "stderr", "analytic"]
    return cols, rows, {"n_samples": est.n_samples}


def _cmd_converge(c):
    xs = np.linspace(c.x_min, c.x_max, c.grid)
    rows = []
    prev = None
    for N in c.N_list:
        g = lk.kernel_convergence_gap_grid(xs, c.s, N)
        mx = float(g.max())
        rows.append((N, mx, float(g.mean()), mx / prev if prev else float("nan")))
        prev = mx
    return ["N", "max_gap", "mean_gap", "ratio_to_previous"], rows, {}


def _cmd_disjointness(c):
    rep = hp.kakutani_divergence_report(c.s1, c.s2, c.N_max)
    Ns = rep["N"]
    pick = np.unique(np.geomspace(2, Ns[-1], 40).astype(int))
    rows = [(int(n), float(rep["partial_products"][n - 2]), hp.hellinger_affinity(c.s1, c.s2, int(n)))
            for n in pick]
    print(f"fitted slope {rep['slope']:.6f} (expected {rep['expected_slope']:.6f})")
    return ["N", "partial_product", "affinity"], rows, {"slope": rep["slope"],
                                                          "expected_slope": rep["expected_slope"]}


def _cmd_gamma2(c):
    samples = {N: _load_or_sample(c, N) for N in c.N_list}
    rep = ergodic.gamma2_diagnostic(samples, c.N_list, c.eps_list, c.s)
    rows = [(r["N"], r["eps"], r["mean"], r["stderr"], r.get("closed_form", float("nan")))
            for r in rep["rows"]]
    return ["N", "eps", "mean", "stderr", "closed_form"], rows, {"decreasing_in_eps": rep["decreasing_in_eps"]}


def _cmd_painleve(c):
    rows = []
    for t in c.t_list:
        det = lk.fredholm_det(c.s, (1.0 / t, math.inf), c.order)
        sig = lk.sigma(t, c.s, c.order)
        lhs, rhs = lk.painleve_sides(t, c.s, order=c.order)
        res = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
        rows.append((t, det, sig, lhs, rhs, res))
    return ["t", "det", "sigma", "lhs", "rhs", "relative_residual"], rows, {}


def _cmd_selftest():
    from .selftest import run_checks

    results = run_checks()
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    rows = [(name.replace(",", ";"), int(ok)) for name, ok in results]
    return ["check", "passed"], rows, {"all_passed": all(ok for _, ok in results)}


def output_dir(c):
    return os.environ.get("HUAPICKRELL_OUTPUT_DIR") or c.output


def run(c):
    """Execute a validated configuration and write results; returns an exit status."""
    outdir = output_dir(c)
    try:
        os.makedirs(outdir, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create {outdir}: {exc}", file=sys.stderr)
        return EXIT_IO
    name = c.command
    if name == "eval-kernel":
        cols, rows, extra = _cmd_eval_kernel(c)
    elif name == "sample":
        cols, rows, extra = _cmd_sample(c, outdir)
    elif name == "estimate-corr":
        cols, rows, extra = _cmd_estimate_corr(c)
    elif name == "converge":
        cols, rows, extra = _cmd_converge(c)
    elif name == "disjointness":
        cols, rows, extra = _cmd_disjointness(c)
    elif name == "gamma2":
        cols, rows, extra = _cmd_gamma2(c)
    elif name == "painleve":
        cols, rows, extra = _cmd_painleve(c)
    else:
        cols, rows, extra = _cmd_selftest()
    manifest_name = f"{name}.manifest"
    text = records.emit_table(name, cols, rows, manifest_name)
    config = {k: v for k, v in asdict(c).items() if k not in ("workers", "output")}
    config["boxes"] = [f"{lo!r}:{hi!r}" for lo, hi in c.boxes]
    manifest = records.emit_manifest(config, __version__, records.content_hash(text), extra)
    try:
        with open(os.path.join(outdir, f"{name}.csv"), "w", encoding="utf-8") as fh:
            fh.write(text)
        with open(os.path.join(outdir, manifest_name), "w", encoding="utf-8") as fh:
            fh.write(manifest)
    except OSError as exc:
        print(f"error: cannot write results: {exc}", file=sys.stderr)
        return EXIT_IO
    if name == "selftest" and not extra["all_passed"]:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def main(argv=None):
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
        return run(config)
    except HuaPickrellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
