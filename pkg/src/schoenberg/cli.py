"""Command-line driver: one JSON job file in, CSV tables and a manifest out.

Exit status: 0 success, 1 invalid configuration, 2 numerical failure,
3 a positivity check found a violation (witness written to ``witness.csv``).
"""

import argparse
import copy
import csv
import json
import re
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .exceptions import (
    CapExceededError,
    DomainError,
    GroupAxiomError,
    NotHermitianError,
    QuadratureError,
)
from .groups import GroupFunction, make_cyclic, make_trivial, read_group_table
from .pdcheck import gram_check, revalidate, sample_sphere
from .quadrature import delta_convergence_probe
from .series import CoefficientTable
from .sphere_complex import (
    DiscPowerSeries,
    DiscSeries,
    all_indices,
    dimension_walk,
    extract_table_complex,
    limit_study_complex,
)
from .sphere_real import GegenbauerSeries, PowerSeries, extract_table_real, limit_study_real
from .symdiff import rodrigues_check_complex, rodrigues_check_real

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_NOT_PD = 0, 1, 2, 3

TASKS = ["extract", "evaluate", "check-pd", "walk", "limit-table", "measure-moments", "rodrigues-check"]
KERNEL_KINDS = ["monomial", "gegenbauer", "disc", "demo:x2", "demo:zzbar"]

_levels = {
    "anyOf": [
        {"type": "integer"},
        {"type": "array", "items": {"type": "integer"}, "minItems": 1},
        {"type": "string", "pattern": r"^\s*-?\d+\s*\.\.\s*-?\d+\s*$"},
    ]
}

SCHEMA = {
    "type": "object",
    "required": ["task"],
    "additionalProperties": False,
    "properties": {
        "task": {"enum": TASKS},
        "seed": {"type": "integer"},
        "kernel": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": KERNEL_KINDS},
                "d": {"type": "integer", "minimum": 1},
                "q": {"type": "integer", "minimum": 2},
                "phi": {"type": "array", "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}},
                "coefficients": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["index", "re"],
                        "additionalProperties": False,
                        "properties": {
                            "index": {
                                "anyOf": [
                                    {"type": "integer", "minimum": 0},
                                    {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2},
                                ]
                            },
                            "element": {"type": "integer", "minimum": 0},
                            "re": {"type": "number"},
                            "im": {"type": "number"},
                        },
                    },
                },
            },
        },
        "group": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "builtin": {"enum": ["trivial", "cyclic"]},
                "k": {"type": "integer", "minimum": 1},
                "table_file": {"type": "string"},
            },
        },
        "params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "d": _levels,
                "q": _levels,
                "n": _levels,
                "m": {"type": "integer", "minimum": 0},
                "max_degree": {"type": "integer", "minimum": 0},
                "x": {"type": "array", "items": {"type": "number"}},
                "z": {"type": "array", "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}},
                "count": {"type": "integer", "minimum": 1},
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "elements": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "steps": {"type": "integer", "minimum": 1},
                "family": {"enum": ["tau", "nu"]},
                "g": {"type": "string"},
                "parameters": {"type": "array", "items": {"type": "number", "exclusiveMinimum": -1}, "minItems": 1},
                "nodes": {"type": "integer", "minimum": 1},
                "angular_nodes": {"type": "integer", "minimum": 1},
                "space": {"enum": ["real", "complex"]},
                "samples": {"type": "integer", "minimum": 1},
            },
        },
    },
}

DEFAULTS = {"count": 15, "tol": 1e-10, "steps": 1, "samples": 21}


class ConfigError(ValueError):
    """Invalid job configuration; ``field`` names the offending entry."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class PositivityViolation(Exception):
    """A Gram check refuted positive definiteness; ``files`` were still written."""

    def __init__(self, message, files):
        super().__init__(message)
        self.files = files


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------


def _path(err):
    out = "config"
    for part in err.absolute_path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def parse_levels(value, field):
    if isinstance(value, int):
        return [value]
    if isinstance(value, list):
        return [int(v) for v in value]
    a, b = (int(v) for v in value.split(".."))
    if b < a:
        raise ConfigError(field, f"empty range {value!r}")
    return list(range(a, b + 1))


def load_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError("--config", str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("--config", f"not valid JSON: {exc}") from exc
    return cfg


def validate_config(cfg):
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        raise ConfigError(_path(errors[0]), errors[0].message)
    task = cfg["task"]
    if task not in ("measure-moments", "rodrigues-check") and "kernel" not in cfg:
        raise ConfigError("config.kernel", f"task {task!r} needs a kernel")
    return cfg


def build_group(cfg, base_dir):
    desc = cfg.get("group", {"builtin": "trivial"})
    if "table_file" in desc:
        path = Path(desc["table_file"])
        if not path.is_absolute():
            path = base_dir / path
        try:
            return read_group_table(path)
        except OSError as exc:
            raise ConfigError("config.group.table_file", str(exc)) from exc
        except GroupAxiomError as exc:
            raise ConfigError("config.group.table_file", f"{exc} (witness {exc.witness})") from exc
    kind = desc.get("builtin", "trivial")
    if kind == "cyclic":
        if "k" not in desc:
            raise ConfigError("config.group.k", "cyclic group needs k")
        return make_cyclic(desc["k"])
    return make_trivial()


def _demo_phi(kernel, group):
    if "phi" not in kernel:
        return GroupFunction.constant(group, 1.0)
    if len(kernel["phi"]) != group.order:
        raise ConfigError("config.kernel.phi", f"needs {group.order} (re, im) pairs")
    return GroupFunction(group, [complex(a, b) for a, b in kernel["phi"]])


def build_kernel(cfg, group):
    """Return ``(model, space)`` with ``space`` either ``'real'`` or ``'complex'``."""
    kernel = cfg["kernel"]
    kind = kernel["kind"]
    if kind == "demo:x2":
        return PowerSeries(CoefficientTable({2: _demo_phi(kernel, group)}, group)), "real"
    if kind == "demo:zzbar":
        return DiscPowerSeries(CoefficientTable({(1, 1): _demo_phi(kernel, group)}, group)), "complex"
    records = kernel.get("coefficients", [])
    pairs = {isinstance(r["index"], list) for r in records}
    if len(pairs) > 1:
        raise ConfigError("config.kernel.coefficients", "mixes integer and (m, n) indices")
    complex_index = pairs == {True} or kind == "disc"
    if kind == "gegenbauer" and complex_index:
        raise ConfigError("config.kernel.coefficients", "gegenbauer kernels take integer indices")
    if kind == "disc" and pairs == {False}:
        raise ConfigError("config.kernel.coefficients", "disc kernels take [m, n] indices")
    values = {}
    for i, rec in enumerate(records):
        el = rec.get("element", 0)
        if el >= group.order:
            raise ConfigError(f"config.kernel.coefficients[{i}].element", f"no element {el} in a group of order {group.order}")
        key = tuple(rec["index"]) if complex_index else rec["index"]
        values.setdefault(key, np.zeros(group.order, dtype=complex))
        values[key][el] += complex(rec["re"], rec.get("im", 0.0))
    table = CoefficientTable({k: GroupFunction(group, v) for k, v in values.items()}, group)
    if kind == "gegenbauer":
        if "d" not in kernel:
            raise ConfigError("config.kernel.d", "gegenbauer kernels need d")
        return GegenbauerSeries(kernel["d"], table), "real"
    if kind == "disc":
        if "q" not in kernel:
            raise ConfigError("config.kernel.q", "disc kernels need q")
        return DiscSeries(kernel["q"], table), "complex"
    return (DiscPowerSeries(table), "complex") if complex_index else (PowerSeries(table), "real")


def _require(params, key, task):
    if key not in params:
        raise ConfigError(f"config.params.{key}", f"required by task {task!r}")
    return params[key]


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v) + 0.0)
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


# --------------------------------------------------------------------------
# tasks
# --------------------------------------------------------------------------


def task_extract(cfg, model, space, params, out):
    rows = []
    group = model.group
    if space == "real":
        levels = parse_levels(_require(params, "d", "extract"), "config.params.d")
        idx = parse_levels(params.get("n", f"0..{model.degree}"), "config.params.n")
        for d in levels:
            table = extract_table_real(model, d, max(idx), params.get("nodes"))
            for n in idx:
                for u in group.elements:
                    v = table[n](u)
                    rows.append((d, n, u, v.real, v.imag))
        write_csv(out / "extract.csv", ["d", "n", "element", "re", "im"], rows)
    else:
        levels = parse_levels(_require(params, "q", "extract"), "config.params.q")
        top = params.get("max_degree", model.degree)
        for q in levels:
            table = extract_table_complex(model, q, all_indices(top))
            for m, n in all_indices(top):
                for u in group.elements:
                    v = table[(m, n)](u)
                    rows.append((q, m, n, u, v.real, v.imag))
        write_csv(out / "extract.csv", ["q", "m", "n", "element", "re", "im"], rows)
    return ["extract.csv"]


def task_evaluate(cfg, model, space, params, out):
    rows = []
    if space == "real":
        xs = np.array(_require(params, "x", "evaluate"), dtype=float)
        if np.any(np.abs(xs) > 1):
            raise ConfigError("config.params.x", "points must lie in [-1, 1]")
        for u in model.group.elements:
            vals = np.atleast_1d(model(xs, u))
            rows.extend((x, u, v.real, v.imag) for x, v in zip(xs, vals))
        write_csv(out / "evaluate.csv", ["x", "element", "re", "im"], rows)
    else:
        zs = np.array([complex(a, b) for a, b in _require(params, "z", "evaluate")])
        if np.any(np.abs(zs) > 1):
            raise ConfigError("config.params.z", "points must lie in the closed unit disc")
        for u in model.group.elements:
            vals = np.atleast_1d(model(zs, u))
            rows.extend((z.real, z.imag, u, v.real, v.imag) for z, v in zip(zs, vals))
        write_csv(out / "evaluate.csv", ["z_re", "z_im", "element", "re", "im"], rows)
    return ["evaluate.csv"]


def task_check_pd(cfg, model, space, params, out):
    key = "d" if space == "real" else "q"
    dims = parse_levels(_require(params, key, "check-pd"), f"config.params.{key}")
    tol = params["tol"]
    elements = params.get("elements")
    if elements is not None and any(u >= model.group.order for u in elements):
        raise ConfigError("config.params.elements", "element outside the group")
    rows, failures = [], []
    for dim in dims:
        pts = sample_sphere(space, dim, params["count"], cfg["seed"])
        rep = gram_check(model, pts, elements, tol)
        rows.append((space, dim, len(pts), rep.size, rep.min_eigenvalue, rep.trace, rep.threshold, rep.verdict))
        if not rep.is_pd:
            failures.append((dim, pts, rep))
    write_csv(
        out / "check_pd.csv",
        ["space", "dim", "count", "size", "min_eigenvalue", "trace", "threshold", "verdict"],
        rows,
    )
    files = ["check_pd.csv"]
    if failures:
        wrows = []
        for dim, pts, rep in failures:
            value = revalidate(rep, model, pts, elements)
            for (i, u), c in zip(rep.labels, rep.witness):
                if c != 0:
                    wrows.append((dim, i, u, c.real, c.imag, value))
        write_csv(out / "witness.csv", ["dim", "point", "element", "c_re", "c_im", "quadratic_form"], wrows)
        files.append("witness.csv")
        raise PositivityViolation(
            f"kernel is not positive definite for {key} = {[f[0] for f in failures]}; witness in witness.csv",
            files,
        )
    return files


def task_walk(cfg, model, space, params, out):
    if not isinstance(model, DiscSeries):
        raise ConfigError("config.kernel.kind", "walk needs a 'disc' kernel")
    rows = []
    q, table = model.q, model.coeffs
    for _ in range(params["steps"]):
        nxt = dimension_walk(table, q)
        direct = extract_table_complex(model, q + 1, nxt.indices)
        for m, n in nxt.indices:
            for u in model.group.elements:
                v, w = nxt[(m, n)](u), direct[(m, n)](u)
                rows.append((q, q + 1, m, n, u, v.real, v.imag, w.real, w.imag))
        q, table = q + 1, nxt
    write_csv(
        out / "walk.csv",
        ["q_from", "q_to", "m", "n", "element", "re", "im", "direct_re", "direct_im"],
        rows,
    )
    return ["walk.csv"]


def task_limit_table(cfg, model, space, params, out):
    rows = []
    if space == "real":
        n = _require(params, "n", "limit-table")
        if not isinstance(n, int):
            raise ConfigError("config.params.n", "limit-table takes a single degree")
        levels = parse_levels(_require(params, "d", "limit-table"), "config.params.d")
        for row in limit_study_real(model, n, levels):
            for u, err in zip(model.group.elements, row.errors):
                v, lim = row.value(u), row.limit(u)
                rows.append((row.level, n, u, v.real, v.imag, lim.real, lim.imag, err))
        header = ["d", "n", "element", "phi_re", "phi_im", "limit_re", "limit_im", "error"]
    else:
        m, n = _require(params, "m", "limit-table"), _require(params, "n", "limit-table")
        if not isinstance(n, int):
            raise ConfigError("config.params.n", "limit-table takes a single degree")
        levels = parse_levels(_require(params, "q", "limit-table"), "config.params.q")
        for row in limit_study_complex(model, m, n, levels):
            for u, err in zip(model.group.elements, row.errors):
                v, lim = row.value(u), row.limit(u)
                rows.append((row.level, m, n, u, v.real, v.imag, lim.real, lim.imag, err))
        header = ["q", "m", "n", "element", "phi_re", "phi_im", "limit_re", "limit_im", "error"]
    write_csv(out / "limit_table.csv", header, rows)
    return ["limit_table.csv"]


_G_REAL = re.compile(r"^\s*x\s*\^\s*(\d+)\s*$")
_G_ABS = re.compile(r"^\s*\|z\|\s*\^\s*(\d+)\s*$")
_G_MIXED = re.compile(r"^\s*z\s*\^\s*(\d+)\s*\*?\s*zbar\s*\^\s*(\d+)\s*$")


def parse_test_function(text, family):
    """Monomial test integrands: ``1``, ``x^k`` (tau); ``1``, ``|z|^k``, ``z^a zbar^b`` (nu)."""
    if text.strip() == "1":
        return lambda t: np.ones_like(t)
    if family == "tau" and (hit := _G_REAL.match(text)):
        k = int(hit.group(1))
        return lambda x: x**k
    if family == "nu" and (hit := _G_ABS.match(text)):
        k = int(hit.group(1))
        return lambda z: np.abs(z) ** k
    if family == "nu" and (hit := _G_MIXED.match(text)):
        a, b = int(hit.group(1)), int(hit.group(2))
        return lambda z: z**a * np.conj(z) ** b
    raise ConfigError("config.params.g", f"unsupported test function {text!r} for family {family!r}")


def task_measure_moments(cfg, model, space, params, out):
    family = _require(params, "family", "measure-moments")
    g = parse_test_function(_require(params, "g", "measure-moments"), family)
    values = _require(params, "parameters", "measure-moments")
    nodes = params.get("nodes", 16)
    angular = params.get("angular_nodes", 17)
    rows = []
    for p, v, err in delta_convergence_probe(family, g, values, nodes, angular):
        v = complex(v)
        rows.append((family, p, v.real, v.imag, err))
    write_csv(out / "moments.csv", ["family", "parameter", "value_re", "value_im", "error"], rows)
    return ["moments.csv"]


def task_rodrigues_check(cfg, model, space, params, out):
    which = params.get("space", "real")
    tol = params.get("tol", 1e-11)
    rows, worst = [], 0.0
    if which == "real":
        xs = np.linspace(-1, 1, params["samples"] + 2)[1:-1]
        for d in parse_levels(_require(params, "d", "rodrigues-check"), "config.params.d"):
            for n in parse_levels(params.get("n", "0..6"), "config.params.n"):
                dev = rodrigues_check_real(d, n, xs)
                worst = max(worst, dev)
                rows.append((d, n, dev))
        write_csv(out / "rodrigues.csv", ["d", "n", "deviation"], rows)
    else:
        k = params["samples"]
        r = np.linspace(0.0, 0.95, k)
        zs = r * np.exp(2j * np.pi * np.arange(k) / k * 3.0)
        top = params.get("max_degree", 6)
        for q in parse_levels(_require(params, "q", "rodrigues-check"), "config.params.q"):
            for m, n in all_indices(top):
                dev = rodrigues_check_complex(q, m, n, zs)
                worst = max(worst, dev)
                rows.append((q, m, n, dev))
        write_csv(out / "rodrigues.csv", ["q", "m", "n", "deviation"], rows)
    if worst > tol:
        raise QuadratureError(f"Rodrigues deviation {worst:.3e} exceeds {tol:.1e}")
    return ["rodrigues.csv"]


HANDLERS = {
    "extract": task_extract,
    "evaluate": task_evaluate,
    "check-pd": task_check_pd,
    "walk": task_walk,
    "limit-table": task_limit_table,
    "measure-moments": task_measure_moments,
    "rodrigues-check": task_rodrigues_check,
}


def resolve(cfg, seed_override=None):
    """Fill defaults; the result is what the manifest echoes."""
    cfg = copy.deepcopy(cfg)
    if seed_override is not None:
        cfg["seed"] = seed_override
    cfg.setdefault("seed", 0)
    cfg.setdefault("group", {"builtin": "trivial"})
    params = cfg.setdefault("params", {})
    for k, v in DEFAULTS.items():
        params.setdefault(k, v)
    return cfg


def run(cfg, out_dir, base_dir=Path("."), seed=None, log=print):
    """Execute one job; returns the exit status."""
    out = Path(out_dir)
    try:
        validate_config(cfg)
        cfg = resolve(cfg, seed)
        group = build_group(cfg, Path(base_dir))
        model, space = build_kernel(cfg, group) if "kernel" in cfg else (None, None)
    except ConfigError as exc:
        log(f"error: invalid configuration: {exc}")
        return EXIT_CONFIG
    except DomainError as exc:
        log(f"error: invalid configuration: config.kernel: {exc}")
        return EXIT_CONFIG
    out.mkdir(parents=True, exist_ok=True)
    status, files, message = EXIT_OK, [], "ok"
    try:
        files = HANDLERS[cfg["task"]](cfg, model, space, cfg["params"], out)
    except ConfigError as exc:
        log(f"error: invalid configuration: {exc}")
        return EXIT_CONFIG
    except PositivityViolation as exc:
        status, files, message = EXIT_NOT_PD, exc.files, str(exc)
    except (QuadratureError, np.linalg.LinAlgError, CapExceededError) as exc:
        status, message = EXIT_NUMERIC, f"numerical failure: {exc}"
    except NotHermitianError as exc:
        status, message = EXIT_NOT_PD, f"kernel values are not hermitian: {exc}"
    except DomainError as exc:
        log(f"error: invalid configuration: {exc}")
        return EXIT_CONFIG
    manifest = {
        "version": __version__,
        "task": cfg["task"],
        "resolved_config": cfg,
        "outputs": files,
        "exit_status": status,
        "message": message,
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    log(message if status else f"wrote {', '.join(files)} to {out}")
    return status


def main(argv=None):
    parser = argparse.ArgumentParser(prog="schoenberg", description=__doc__.splitlines()[0])
    parser.add_argument("--config", required=True, help="JSON job file")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="overrides the seed in the config")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    def log(msg):
        if not args.quiet or msg.startswith("error"):
            print(msg, file=sys.stderr)

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        log(f"error: invalid configuration: {exc}")
        return EXIT_CONFIG
    return run(cfg, args.out, Path(args.config).resolve().parent, args.seed, log)


if __name__ == "__main__":
    sys.exit(main())
