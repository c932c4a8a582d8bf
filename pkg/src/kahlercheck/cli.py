"""Command-line front end: ``verify``.

Builds a geometry, runs the selected check suites as parallel jobs and
writes a JSON report (CSV optionally). Exit status: 0 when every applicable
check passes, 1 when a check fails, 2 on a configuration error.

Configuration comes from defaults (complex hyperbolic sphere ``a = 0.5``,
all suites), then an optional ``key=value`` file (``--config``), then the
command line. The thread count can also be set with ``KAHLERCHECK_THREADS``.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import __version__
from . import verify as V
from .ambient import SpaceForm
from .errors import KahlerCheckError
from .hypersurface import Hypersurface, ellipsoid, levelset, sphere, tube

SCHEMA_VERSION = "1"
THREADS_ENV = "KAHLERCHECK_THREADS"
SPACES = {"flat": 0, "ch": -1, "cp": 1}
SUITES = ("ambient", "identity", "boundary", "spectra", "minkowski", "inequalities", "rigidity", "extend")
CSV_HEADER = ("check_id", "anchor", "lhs", "rhs", "residual", "tolerance", "pass")


class ConfigError(ValueError):
    """Invalid run configuration (exit status 2)."""


# ---------------------------------------------------------------------------
# named level sets (``--levelset ID``)


def _anisotropic(x):
    # x1^2 + y1^2 / 1.3^2 + |z2|^2 = 1: not U(1)-invariant in z1
    import jax.numpy as jnp

    return x[0] ** 2 + x[1] ** 2 / 1.69 + jnp.sum(x[2:] ** 2) - 1.0


def _quartic(x):
    import jax.numpy as jnp

    r2 = x * x
    return jnp.sum(r2[:2]) ** 2 + jnp.sum(r2[2:]) - 1.0


LEVELSETS = {
    "anisotropic": (_anisotropic, 1.0),
    "quartic": (_quartic, 1.0),
}


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    space: str = "ch"
    n: int = 2
    geometry: str = "sphere"
    geometry_params: tuple = (0.5,)
    suites: tuple = SUITES
    surface_order: int = V.SURFACE_ORDER
    identity_order: int = V.IDENTITY_SURFACE_ORDER
    volume_order: int = V.VOLUME_ORDER
    radial_order: int = V.RADIAL_ORDER
    duality_order: int = V.DUALITY_ORDER
    extend_order: int = 32
    points: int = V.POINTS
    tolerances: tuple = ()
    threads: int = 1
    seed: int = 0
    output: Optional[str] = None
    csv: Optional[str] = None
    timings: bool = False

    def echo(self) -> dict:
        """Configuration as recorded in the report. Execution settings
        (threads, output paths, timing) are left out: they do not change
        any computed value, and the report bytes must not depend on them."""
        return {
            "space": self.space,
            "n": self.n,
            "geometry": self.geometry,
            "geometry_params": list(self.geometry_params),
            "suites": list(self.suites),
            "surface_order": self.surface_order,
            "identity_order": self.identity_order,
            "volume_order": self.volume_order,
            "radial_order": self.radial_order,
            "duality_order": self.duality_order,
            "extend_order": self.extend_order,
            "points": self.points,
            "tolerances": {k: v for k, v in self.tolerances},
            "seed": self.seed,
        }

    def tol(self, key):
        return dict(self.tolerances).get(key)


def space_form(config: RunConfig) -> SpaceForm:
    return SpaceForm(SPACES[config.space], config.n)


def build_surface(config: RunConfig) -> Hypersurface:
    space = space_form(config)
    p = config.geometry_params
    if config.geometry == "sphere":
        return sphere(space, p[0])
    if config.geometry == "tube":
        return tube(space, int(p[0]), p[1])
    if config.geometry == "ellipsoid":
        return ellipsoid(space, p)
    rho, r0 = LEVELSETS[p[0]]
    return levelset(space, rho, r0, tag=f"levelset({p[0]})")


def validate(config: RunConfig) -> RunConfig:
    """Reject invalid combinations before any computation."""
    if config.space not in SPACES:
        raise ConfigError(f"unknown space {config.space!r}; choose from {', '.join(SPACES)}")
    if config.n < 2:
        raise ConfigError(f"complex dimension n must be >= 2, got {config.n}")
    p = config.geometry_params
    if config.geometry == "sphere":
        a = p[0]
        if not a > 0:
            raise ConfigError(f"sphere radius must be positive, got {a:g}")
        if config.space == "cp" and a >= math.pi / 2:
            raise ConfigError("radius must be < π/2 in cp")
    elif config.geometry == "tube":
        if config.space != "cp":
            raise ConfigError(f"tubes about CP^k exist only in cp, not in {config.space}")
        k, a = p
        if k != int(k) or not 0 <= k <= config.n - 1:
            raise ConfigError(f"tube needs an integer 0 <= k <= m = {config.n - 1}, got {k:g}")
        if not 0 < a < math.pi / 2:
            raise ConfigError(f"tube radius must lie in (0, π/2), got {a:g}")
    elif config.geometry == "ellipsoid":
        if len(p) != config.n:
            raise ConfigError(f"ellipsoid needs {config.n} semi-axes, got {len(p)}")
        if min(p) <= 0:
            raise ConfigError("ellipsoid semi-axes must be positive")
        if config.space == "ch" and max(p) >= 1:
            raise ConfigError("ellipsoid semi-axes must be < 1 in the ch chart")
    elif config.geometry == "levelset":
        if p[0] not in LEVELSETS:
            raise ConfigError(f"unknown level set {p[0]!r}; choose from {', '.join(LEVELSETS)}")
        if config.space == "ch":
            raise ConfigError("named level sets reach |z| = 1 and do not fit in the ch chart")
    else:
        raise ConfigError(f"unknown geometry {config.geometry!r}")
    for s in config.suites:
        if s not in SUITES:
            raise ConfigError(f"unknown suite {s!r}; choose from {', '.join(SUITES + ('all',))}")
    for name in ("surface_order", "identity_order", "volume_order", "radial_order", "duality_order", "extend_order", "points"):
        if getattr(config, name) < 2:
            raise ConfigError(f"{name.replace('_', '-')} must be >= 2")
    if config.threads < 1:
        raise ConfigError(f"thread count must be >= 1, got {config.threads}")
    for key, value in config.tolerances:
        if key not in V.TOL:
            raise ConfigError(f"unknown tolerance {key!r}; choose from {', '.join(sorted(V.TOL))}")
        if not value >= 0:
            raise ConfigError(f"tolerance {key} must be >= 0")
    return config


# ---------------------------------------------------------------------------
# jobs


@dataclass
class Job:
    name: str
    run: Callable[[], list]
    reports: list = field(default_factory=list)
    seconds: float = 0.0


CR_DATA = (
    ("z1^2 z2", lambda z: z[0] ** 2 * z[1]),
    ("1/(z1-2)", lambda z: 1.0 / (z[0] - 2.0)),
    ("z2^3", lambda z: z[1] ** 3),
    ("conj(z1)", lambda z: z[0].conj()),
)


def _one(fn, *args, **kw):
    return lambda: [fn(*args, **kw)]


def plan(config: RunConfig) -> List[Job]:
    """The jobs of the selected suites, in report order."""
    from .jets import ScalarField

    space = space_form(config)
    surface = build_surface(config)
    t, pts, seed = config.tol, config.points, config.seed
    jobs = []
    add = lambda name, run: jobs.append(Job(name, run))  # noqa: E731
    suites = set(config.suites)
    battery = V.field_battery(config.n, seed)

    if "ambient" in suites:
        add("curvature", _one(V.check_curvature_normalization, space, 20, seed, t("curvature")))
        add("potential", _one(V.check_potential_hessian, space, 100, seed, t("potential")))
        add("hessian_r", _one(V.check_hessian_r, space, None, pts, seed, t("hessian_r")))
    if "identity" in suites:
        for F in battery:
            add(f"identity:{F.name}", _one(V.check_main_identity, surface, F, config.identity_order, config.volume_order, config.radial_order, t("main_identity")))
    if "boundary" in suites:
        add("div_T", _one(V.check_div_T, surface, pts, seed, t("div_T")))
        for F in battery:
            add(f"compare:{F.name}", _one(V.check_compare, surface, F, pts, seed, t("compare")))
        add("duality", _one(V.check_duality, surface, None, 20, seed, config.duality_order, t("duality")))
    if "spectra" in suites:
        is_tube = surface.params.get("k", 0) > 0
        add("spectrum", _one(V.check_spectrum, surface, pts, seed, t("tube_spectrum" if is_tube else "sphere_spectrum")))
    if "minkowski" in suites:
        add("hopf", _one(V.check_hopf, surface, pts, seed, t("hopf")))
        add("minkowski", _one(V.check_minkowski, surface, config.surface_order, t("minkowski"), t("hopf")))
        add("alpha_constant", _one(V.check_alpha_constant, surface, 200, seed, t("alpha_constant"), t("hopf")))
    if "inequalities" in suites:
        orders = (config.surface_order, config.volume_order, config.radial_order)
        add("invHb", _one(V.check_invHb, surface, *orders, t("invHb")))
        add("iso", _one(V.check_iso, surface, *orders, t("iso")))
        add("equality_lemma", _one(V.check_equality_case_lemma, surface, pts, seed, t("equality_lemma")))
        add("jaj", _one(V.check_jaj, surface, pts, seed, t("jaj")))
    if "rigidity" in suites:
        overrides = {k: v for k, v in config.tolerances}
        add("rigidity", lambda: V.check_rigidity_chain(surface, pts, seed, overrides))
    if "extend" in suites:
        tol = t("holomorphy")
        for label, fn in CR_DATA:
            F = ScalarField(fn, label)
            kw = {} if tol is None else {"tol": tol}
            add(f"extend:{label}", _one(V.check_energy_identity_CR, F, config.extend_order, n=config.n, label=label, **kw))
    return jobs


def execute(jobs: Sequence[Job], threads: int = 1) -> List[Job]:
    """Run jobs on a thread pool; results are kept in job order."""

    def work(job):
        start = time.perf_counter()
        job.reports = list(job.run())
        job.seconds = time.perf_counter() - start
        return job

    if threads == 1:
        return [work(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, jobs))


# ---------------------------------------------------------------------------
# reports


@dataclass
class RunReport:
    config: RunConfig
    reports: list
    seconds: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports if r.status not in (V.HYPOTHESIS_FAILED, V.NOT_APPLICABLE))

    def counts(self) -> dict:
        out = {s: 0 for s in (V.PASS, V.FAIL, V.HYPOTHESIS_FAILED, V.NOT_APPLICABLE)}
        for r in self.reports:
            out[r.status] += 1
        return out

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "version": __version__,
            "config": self.config.echo(),
            "pass": self.passed,
            "counts": self.counts(),
            "reports": [r.to_dict() for r in self.reports],
        }
        if self.config.timings:
            d["wall_clock_seconds"] = {k: round(v, 3) for k, v in self.seconds.items()}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def run(config: RunConfig) -> RunReport:
    """Validate, plan and execute; returns the assembled report."""
    validate(config)
    jobs = execute(plan(config), config.threads)
    reports = [r for j in jobs for r in j.reports]
    return RunReport(config, reports, {j.name: j.seconds for j in jobs})


def _csv_value(v):
    if isinstance(v, complex):
        return repr(v.real) if v.imag == 0 else f"{v.real!r}{v.imag:+}j"
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def report_csv(report: RunReport) -> str:
    """One row per check: ``check_id, anchor, lhs, rhs, residual, tolerance, pass``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in report.reports:
        w.writerow([r.check_id, r.anchor, _csv_value(r.lhs), _csv_value(r.rhs), _csv_value(r.residual), _csv_value(r.tolerance), r.status])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# argument handling


def _floats(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _tolerance(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {key} is not a number: {value!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


GEOMETRY_FLAGS = ("sphere", "tube", "ellipsoid", "levelset")


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="verify", description="Verify Kahler space-form identities on a hypersurface.")
    p.add_argument("--config", help="key=value file; command-line flags override it")
    p.add_argument("--space", choices=sorted(SPACES), help="ambient space form (default ch)")
    p.add_argument("--n", type=int, help="complex dimension (default 2)")
    p.add_argument("--sphere", type=float, metavar="A", help="geodesic sphere of radius A (default 0.5)")
    p.add_argument("--tube", type=float, nargs=2, metavar=("K", "A"), help="tube of radius A about CP^K (cp only)")
    p.add_argument("--ellipsoid", type=_floats, metavar="S1,S2,...", help="chart ellipsoid sum |z_i|^2/s_i^2 = 1")
    p.add_argument("--levelset", choices=sorted(LEVELSETS), help="named star-shaped level set")
    p.add_argument("--suite", help=f"comma-separated suites: {','.join(SUITES)}, all (default) or none")
    p.add_argument("--surface-order", type=int)
    p.add_argument("--identity-order", type=int)
    p.add_argument("--volume-order", type=int)
    p.add_argument("--radial-order", type=int)
    p.add_argument("--duality-order", type=int)
    p.add_argument("--extend-order", type=int)
    p.add_argument("--points", type=int, help="sample points for pointwise checks")
    p.add_argument("--tol", type=_tolerance, action="append", metavar="KEY=VALUE", help="override a tolerance")
    p.add_argument("--threads", type=int, help=f"worker threads (default 1, or ${THREADS_ENV})")
    p.add_argument("--seed", type=int)
    p.add_argument("--output", "-o", help="JSON report path (default stdout)")
    p.add_argument("--csv", help="also write the CSV projection here")
    p.add_argument("--timings", action="store_true", default=None, help="record wall-clock seconds per job")
    return p


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines (``#`` comments) into flag values."""
    out = {}
    try:
        lines = open(path, encoding="utf-8").read().splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e.strerror}")
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{no}: expected key=value")
        out.setdefault(key.strip().replace("_", "-"), []).append(value.strip())
    return out


def _file_args(values: dict) -> list:
    argv = []
    for key, vals in values.items():
        for v in vals:
            if key == "timings":
                if v.lower() in ("1", "true", "yes", "on"):
                    argv.append("--timings")
                continue
            argv += [f"--{key}"] + v.split()
    return argv


def config_from_args(argv: Optional[Sequence[str]] = None, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    parser = make_parser()
    cli = parser.parse_args(argv)
    base = argparse.Namespace(**{k: None for k in vars(cli)})
    if cli.config:
        base = parser.parse_args(_file_args(read_config_file(cli.config)))
    # command-line geometry replaces any geometry from the file
    if any(getattr(cli, g) is not None for g in GEOMETRY_FLAGS):
        for g in GEOMETRY_FLAGS:
            setattr(base, g, None)
    merged = {k: (getattr(cli, k) if getattr(cli, k) is not None else getattr(base, k)) for k in vars(cli)}
    tolerances = (base.tol or []) + (cli.tol or [])

    given = [g for g in GEOMETRY_FLAGS if merged[g] is not None]
    if len(given) > 1:
        raise ConfigError(f"choose one geometry, got --{' and --'.join(given)}")
    geometry, params = "sphere", (0.5,)
    if given:
        geometry = given[0]
        v = merged[geometry]
        params = (v,) if geometry in ("sphere", "levelset") else tuple(v)

    suites = SUITES
    if merged["suite"] is not None:
        names = [s.strip() for s in merged["suite"].split(",") if s.strip() and s.strip() != "none"]
        suites = SUITES if "all" in names else tuple(s for s in SUITES if s in names) + tuple(
            s for s in names if s not in SUITES
        )

    threads = merged["threads"]
    if threads is None:
        env = environ.get(THREADS_ENV)
        try:
            threads = int(env) if env else 1
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}")

    defaults = RunConfig()
    pick = lambda key: merged[key] if merged[key] is not None else getattr(defaults, key)  # noqa: E731
    return RunConfig(
        space=pick("space"),
        n=pick("n"),
        geometry=geometry,
        geometry_params=params,
        suites=suites,
        surface_order=pick("surface_order"),
        identity_order=pick("identity_order"),
        volume_order=pick("volume_order"),
        radial_order=pick("radial_order"),
        duality_order=pick("duality_order"),
        extend_order=pick("extend_order"),
        points=pick("points"),
        tolerances=tuple(sorted(dict(tolerances).items())),
        threads=threads,
        seed=pick("seed"),
        output=merged["output"],
        csv=merged["csv"],
        timings=bool(merged["timings"]),
    )


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = validate(config_from_args(argv))
        report = run(config)
    except (ConfigError, KahlerCheckError) as e:
        print(f"verify: error: {e}", file=sys.stderr)
        return 2
    try:
        _write(config.output, report.to_json())
        if config.csv:
            _write(config.csv, report_csv(report))
    except OSError as e:
        print(f"verify: cannot write report: {e}", file=sys.stderr)
        return 2
    c = report.counts()
    print(
        f"verify: {len(report.reports)} checks, {c[V.PASS]} passed, {c[V.FAIL]} failed, "
        f"{c[V.HYPOTHESIS_FAILED]} hypothesis failed, {c[V.NOT_APPLICABLE]} not applicable",
        file=sys.stderr,
    )
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
