"""Command-line interface: ``markovtfp <group> <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 resource limit (time, size).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import ResourceError, ValidationError
from .fiberwalk import enumerate_fiber, fiber_connected, margins, mcmc_walk
from .graphs import GlueSpec, StateGraph, glue
from .ideal.binomial import parse_binomial
from .ideal.groebner import time_budget
from .ideal.toric import degree_histogram, markov_basis, markov_basis_report
from .model import ModelMatrix, config_index, model_matrix, parse_matrix_text
from .monoid import ColumnSumMatrix, generation_bound_check, rank_one_ideal, variable_names, wqo_search
from .monoid import divides as monoid_divides
from .tfp import GroupedIdeal, glue_vs_tfp, tfp_ideal

EXIT_OK, EXIT_INVALID, EXIT_RESOURCE = 0, 2, 3
DEFAULT_TIME_LIMIT = 600.0


# -- input helpers -----------------------------------------------------------

def read_json(path: str | Path) -> Any:
    """Parse a JSON file, turning syntax errors into messages with line and column."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from exc


def load_graph_file(path: str) -> StateGraph:
    data = read_json(path)
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: a graph is a JSON object with 'nodes' and 'edges'")
    return StateGraph.from_dict(data, name=data.get("name", Path(path).stem))


def load_spec_file(path: str) -> GlueSpec:
    data = read_json(path)
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: a glue specification is a JSON object")
    return GlueSpec.from_dict(data, base_dir=Path(path).parent)


def load_matrix_file(path: str) -> ModelMatrix:
    """A model-matrix JSON (as written by ``model matrix``) or the plain-text format."""
    p = Path(path)
    if p.suffix == ".json":
        data = read_json(p)
        if isinstance(data, list):
            return ModelMatrix.from_array(data)
        return ModelMatrix.from_dict(data)
    try:
        return ModelMatrix.from_array(parse_matrix_text(p.read_text()))
    except OSError as exc:
        raise ValidationError(f"cannot read {p}: {exc.strerror}") from exc


def model_from_args(args) -> ModelMatrix:
    if getattr(args, "matrix", None):
        return load_matrix_file(args.matrix)
    if not getattr(args, "graph", None):
        raise ValidationError("give a graph file or --matrix")
    return model_matrix(load_graph_file(args.graph))


def load_table(arg: str, A: ModelMatrix) -> list[int]:
    """Table from a JSON file or inline JSON: a list of counts or ``{"1,2": count, ...}``."""
    data = read_json(arg) if Path(arg).exists() else _inline_json(arg)
    if isinstance(data, dict) and "counts" in data:
        data = data["counts"]
    n = A.shape[1]
    if isinstance(data, list):
        if len(data) != n:
            raise ValidationError(f"table needs {n} counts, got {len(data)}")
        return [int(x) for x in data]
    if isinstance(data, dict):
        t = [0] * n
        for label, count in data.items():
            config = [int(x) for x in str(label).strip("()[] ").split(",")]
            t[config_index(config, A.dims)] += int(count)
        return t
    raise ValidationError("a table is a JSON list of counts or an object keyed by configuration")


def _inline_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"<argument>:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from exc


def parse_range(text: str) -> list[int]:
    """``"1..4"``, ``"1-4"`` or ``"1,2,5"``."""
    try:
        for sep in ("..", "-"):
            if sep in text:
                lo, hi = text.split(sep)
                out = list(range(int(lo), int(hi) + 1))
                break
        else:
            out = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ValidationError(f"cannot parse range {text!r}") from exc
    if not out or min(out) < 0:
        raise ValidationError(f"range {text!r} is empty or negative")
    return out


# -- output helpers ----------------------------------------------------------

def emit(obj: Any, fmt: str, out, text: str | None = None, rows: list[dict] | None = None) -> None:
    if fmt == "json":
        json.dump(obj, out, indent=2, default=_jsonable)
        out.write("\n")
    elif fmt == "csv" and rows is not None:
        _write_csv(rows, out)
    else:
        out.write((text if text is not None else json.dumps(obj, default=_jsonable)) + "\n")


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")


def _write_csv(rows: list[dict], out) -> None:
    if not rows:
        return
    w = csv.DictWriter(out, fieldnames=list(rows[0]))
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})


def _hist_json(h: dict[int, int]) -> dict[str, int]:
    return {str(k): v for k, v in h.items()}


# -- commands --------------------------------------------------------------

def cmd_graph_glue(args, out) -> int:
    g = glue(load_spec_file(args.spec), name=args.name)
    d = g.to_dict()
    text = f"{len(g.nodes)} nodes, {len(g.edges)} edges: " + ", ".join("-".join(e) for e in g.sorted_edges())
    emit(d, args.format, out, text)
    return EXIT_OK


def cmd_model_matrix(args, out) -> int:
    A = model_matrix(load_graph_file(args.graph))
    if args.format == "json":
        emit(A.to_dict(), "json", out)
    elif args.format == "csv":
        buf = io.StringIO()
        np.savetxt(buf, A.entries, fmt="%d", delimiter=",")
        out.write(buf.getvalue())
    else:
        out.write(A.to_text())
    return EXIT_OK


def cmd_ideal_markov(args, out) -> int:
    A = model_from_args(args)
    names = A.variable_names()
    basis, truncated = markov_basis_report(A, max_variables=args.max_variables,
                                           degree_limit=args.max_degree_truncate)
    hist = degree_histogram(basis)
    obj = {"variables": names, "generators": [b.to_text(names) for b in basis],
           "degree_histogram": _hist_json(hist), "max_degree": max(hist, default=0),
           "truncated": truncated}
    rows = [{"generator": b.to_text(names), "degree": b.degree} for b in basis]
    emit(obj, args.format, out, "\n".join(obj["generators"]), rows)
    return EXIT_OK


def cmd_tfp_compute(args, out) -> int:
    X = GroupedIdeal.from_dict(read_json(args.x))
    Y = GroupedIdeal.from_dict(read_json(args.y))
    res = tfp_ideal(X, Y, method=args.method)
    obj = res.ideal.to_dict()
    obj["trace"] = res.trace
    emit(obj, args.format, out, "\n".join(obj["generators"]))
    return EXIT_OK


def cmd_tfp_verify(args, out) -> int:
    rep = glue_vs_tfp(load_spec_file(args.spec), method=args.method)
    emit(rep.to_dict(), args.format, out, rep.to_text(), [rep.to_dict()])
    return EXIT_OK if rep.equal else 1


def _moves(args, A: ModelMatrix):
    if args.moves is not None:
        data = read_json(args.moves) if Path(args.moves).exists() else _inline_json(args.moves)
        texts = data["generators"] if isinstance(data, dict) else data
        names = A.variable_names()
        return [parse_binomial(t, names) for t in texts]
    return markov_basis(A)


def cmd_fiber_check(args, out) -> int:
    A = model_from_args(args)
    t = load_table(args.table, A)
    b = margins(A, t)
    res = fiber_connected(A, b, _moves(args, A), limit=args.limit)
    obj = {"margins": list(b), "fiber_size": res.size, "components": res.components,
           "connected": res.connected}
    emit(obj, args.format, out,
         f"fiber of size {res.size}: {'connected' if res.connected else f'{res.components} components'}",
         [obj])
    return EXIT_OK


def cmd_fiber_walk(args, out) -> int:
    A = model_from_args(args)
    t = load_table(args.table, A)
    states = mcmc_walk(A, t, _moves(args, A), args.steps, seed=args.seed, thin=args.thin)
    labels = [",".join(map(str, c)) for c in A.cols]
    obj = {"seed": args.seed, "steps": args.steps, "thin": args.thin, "labels": labels,
           "states": [list(s) for s in states]}
    rows = [{"step": k * args.thin, **{lab: v for lab, v in zip(labels, s)}} for k, s in enumerate(states)]
    emit(obj, args.format, out, "\n".join(" ".join(map(str, s)) for s in states), rows)
    return EXIT_OK


def cmd_fiber_enumerate(args, out) -> int:
    A = model_from_args(args)
    t = load_table(args.table, A)
    members = enumerate_fiber(A, margins(A, t), limit=args.limit)
    emit({"size": len(members), "members": [list(m) for m in members]}, args.format, out,
         "\n".join(" ".join(map(str, m)) for m in members))
    return EXIT_OK


def cmd_monoid_divides(args, out) -> int:
    a = ColumnSumMatrix.from_json(read_json(args.alpha))
    b = ColumnSumMatrix.from_json(read_json(args.beta))
    w = monoid_divides(a, b, limit=args.limit)
    if w is None:
        obj = {"divides": False}
        text = "no witness"
    else:
        obj = {"divides": True, "pi": list(w.pi.values), "gamma": w.gamma.to_json()}
        text = f"pi = {list(w.pi.values)}\ngamma =\n{w.gamma}"
    emit(obj, args.format, out, text)
    return EXIT_OK


def cmd_monoid_wqo(args, out) -> int:
    data = read_json(args.sequence)
    if not isinstance(data, list):
        raise ValidationError("a sequence is a JSON array of matrices")
    seq = [ColumnSumMatrix.from_json(x) for x in data]
    hit = wqo_search(seq, limit=args.limit)
    if hit is None:
        obj, text = {"found": False, "length": len(seq)}, "no divisible pair"
    else:
        i, j, w = hit
        obj = {"found": True, "i": i, "j": j, "pi": list(w.pi.values), "gamma": w.gamma.to_json()}
        text = f"element {i} divides element {j} via pi = {list(w.pi.values)}"
    emit(obj, args.format, out, text)
    return EXIT_OK


def cmd_monoid_rank_one(args, out) -> int:
    gens = rank_one_ideal(args.n, args.s)
    names = variable_names(args.n, args.s)
    obj: dict[str, Any] = {"n": args.n, "s": args.s, "generators": [g.to_text(names) for g in gens]}
    if args.check_bound:
        obj["generation_bound_check"] = generation_bound_check(args.n, args.s).to_dict()
    emit(obj, args.format, out, "\n".join(obj["generators"]))
    return EXIT_OK


def _plateau(rows: list[dict]) -> dict | None:
    """Largest multiplicity from which the observed max degree stays constant (>= 2 points)."""
    done = [r for r in rows if r["status"] == "ok"]
    if len(done) < 2:
        return None
    last = done[-1]["max_degree"]
    k = len(done) - 1
    while k > 0 and done[k - 1]["max_degree"] == last:
        k -= 1
    if len(done) - k < 2:
        return None
    return {"from": done[k]["multiplicities"], "max_degree": last,
            "note": "observed, not proven"}


def stabilize(spec: GlueSpec, copies: Sequence[int], component: int = 0, *,
              time_limit: float | None = DEFAULT_TIME_LIMIT, max_variables: int | None = None,
              degree_limit: int | None = None) -> dict:
    """Markov bases of the glued graphs as one component's multiplicity varies."""
    if not 0 <= component < len(spec.components):
        raise ValidationError(f"component index {component} out of range")
    rows = []
    for a in copies:
        mults = list(spec.multiplicities)
        mults[component] = a
        row: dict[str, Any] = {"multiplicities": mults}
        t0 = time.perf_counter()
        try:
            g = glue(spec.with_multiplicities(mults))
            with time_budget(time_limit):
                A = model_matrix(g)
                basis, truncated = markov_basis_report(A, max_variables=max_variables,
                                                       degree_limit=degree_limit)
            hist = degree_histogram(basis)
            row.update(n_generators=len(basis), degree_histogram=_hist_json(hist),
                       max_degree=max(hist, default=0),
                       status="truncated" if truncated else "ok")
        except ResourceError as exc:
            row.update(n_generators=None, degree_histogram=None, max_degree=None,
                       status="skipped", reason=str(exc))
        except ValidationError as exc:
            row.update(n_generators=None, degree_histogram=None, max_degree=None,
                       status="error", reason=str(exc))
        row["wall_ms"] = round((time.perf_counter() - t0) * 1000, 1)
        rows.append(row)
    return {"instances": rows, "plateau": _plateau(rows)}


def cmd_stabilize(args, out) -> int:
    spec = load_spec_file(args.spec)
    rep = stabilize(spec, parse_range(args.copies), args.component, time_limit=args.time_limit,
                    max_variables=args.max_variables, degree_limit=args.max_degree_truncate)
    cols = ("multiplicities", "n_generators", "degree_histogram", "max_degree", "wall_ms", "status")
    rows = [{k: r.get(k) for k in cols} for r in rep["instances"]]
    lines = [" ".join(f"{k}={r[k]}" for k in cols) for r in rows]
    if rep["plateau"]:
        p = rep["plateau"]
        lines.append(f"plateau: max degree {p['max_degree']} from {p['from']} ({p['note']})")
    emit(rep, args.format, out, "\n".join(lines), rows)
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    common.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT,
                        help="seconds before a computation is abandoned (default 600)")
    common.add_argument("--max-degree-truncate", type=int, default=None,
                        help="skip S-pairs above this degree (results then describe a sub-ideal)")
    common.add_argument("--max-variables", type=int, default=None,
                        help="refuse models with more columns than this")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")

    p = argparse.ArgumentParser(prog="markovtfp", description=__doc__.splitlines()[0])
    groups = p.add_subparsers(dest="group", required=True)

    def sub(parent, name, func, help_):
        q = parent.add_parser(name, parents=[common], help=help_)
        q.set_defaults(func=func)
        return q

    g = groups.add_parser("graph", help="graph operations").add_subparsers(dest="cmd", required=True)
    q = sub(g, "glue", cmd_graph_glue, "glue copies of component graphs")
    q.add_argument("spec")
    q.add_argument("--name", default="glued")

    g = groups.add_parser("model", help="model matrices").add_subparsers(dest="cmd", required=True)
    q = sub(g, "matrix", cmd_model_matrix, "model matrix of a graph")
    q.add_argument("graph")

    g = groups.add_parser("ideal", help="toric ideals").add_subparsers(dest="cmd", required=True)
    q = sub(g, "markov", cmd_ideal_markov, "minimal Markov basis of a graph or matrix")
    q.add_argument("graph", nargs="?")
    q.add_argument("--matrix", help="model matrix file (.json or text) instead of a graph")

    g = groups.add_parser("tfp", help="toric fibre products").add_subparsers(dest="cmd", required=True)
    q = sub(g, "compute", cmd_tfp_compute, "fibre product of two grouped ideals")
    q.add_argument("x")
    q.add_argument("y")
    q.add_argument("--method", choices=("auto", "buchberger", "lattice"), default="auto")
    q = sub(g, "verify-glue", cmd_tfp_verify, "compare glued graph ideal with the iterated product")
    q.add_argument("spec")
    q.add_argument("--method", choices=("auto", "buchberger", "lattice"), default="auto")

    g = groups.add_parser("fiber", help="fibers and walks").add_subparsers(dest="cmd", required=True)
    for name, func, help_ in (("check", cmd_fiber_check, "connectivity of a fiber under moves"),
                              ("walk", cmd_fiber_walk, "random walk on a fiber"),
                              ("enumerate", cmd_fiber_enumerate, "list a fiber")):
        q = sub(g, name, func, help_)
        q.add_argument("graph", nargs="?")
        q.add_argument("--matrix")
        q.add_argument("--table", required=True, help="JSON file or inline JSON")
        q.add_argument("--moves", help="JSON file or inline list of binomials (default: computed Markov basis)")
        q.add_argument("--limit", type=int, default=10**5)
        if name == "walk":
            q.add_argument("--steps", type=int, default=1000)
            q.add_argument("--thin", type=int, default=1)

    g = groups.add_parser("monoid", help="constant column sum matrices").add_subparsers(dest="cmd", required=True)
    q = sub(g, "divides", cmd_monoid_divides, "search a division witness")
    q.add_argument("alpha")
    q.add_argument("beta")
    q.add_argument("--limit", type=int, default=10)
    q = sub(g, "wqo-search", cmd_monoid_wqo, "first divisible pair in a sequence")
    q.add_argument("sequence")
    q.add_argument("--limit", type=int, default=10)
    q = sub(g, "rank-one", cmd_monoid_rank_one, "generators of the rank-one tensor ideal")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--check-bound", action="store_true")

    q = groups.add_parser("stabilize", parents=[common], help="degree sweep over multiplicities")
    q.set_defaults(func=cmd_stabilize)
    q.add_argument("spec")
    q.add_argument("--copies", default="1..2", help="e.g. 1..4 or 1,2,5")
    q.add_argument("--component", type=int, default=0, help="index of the component to scale")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = open(args.output, "w") if getattr(args, "output", None) else sys.stdout
    try:
        if args.func is cmd_stabilize:
            return args.func(args, out)
        with time_budget(args.time_limit):
            return args.func(args, out)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
