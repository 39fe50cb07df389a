"""Command-line interface and experiment log.

Every command reads a coloring in the JSON interchange format (where it
needs one), writes one canonical JSON (or CSV) artifact, and optionally
appends an :class:`ExperimentRecord` to a newline-delimited JSON log.
Errors are reported as a JSON object on stderr with a nonzero exit code.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from ._rng import SEED_ENV, default_seed
from .coloring import (
    PQParams,
    dumps_coloring,
    is_pq_coloring,
    loads_coloring,
    max_color_degree,
)
from .energy import color_energy, holder_lower_bound, power_sum
from .errors import ColorEnergyError, InvalidParams
from .exact import THEOREMS, exact_f, exponent_table
from .gen import find_subgraph, generate_coloring, parse_pattern
from .planted import planted_coloring
from .prune import Partition, build_pruned
from .reveal import RevealInstance, project, reveal_ledger
from .witness import (
    PipelineParams,
    extract_subKt,
    extract_subKtt,
    extract_theta,
    greedy_low_color_clique,
    incidence_witness,
)

__all__ = ["ExperimentRecord", "main", "run_experiment"]

VERSION = "colorenergy-0.1.0"
LOG_ENV = "COLORENERGY_LOG"


@dataclass
class ExperimentRecord:
    command: str
    params: dict
    seed: int
    input_digest: str | None
    output_digest: str
    version: str
    started: float
    finished: float
    outputs: object = field(default=None)

    def to_json(self) -> dict:
        return asdict(self)


# --- serialization helpers ------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    if isinstance(x, list):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if hasattr(x, "item"):  # numpy scalars
        return x.item()
    return x


def render(result, fmt: str) -> str:
    data = _jsonable(result)
    if fmt == "json":
        return json.dumps(data, sort_keys=True) + "\n"
    if fmt != "csv":
        raise InvalidParams(f"unknown format {fmt!r}")
    rows = data if isinstance(data, list) else [data]
    cols = sorted({k for row in rows for k in row})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({
            k: json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v
            for k, v in row.items()
        })
    return buf.getvalue()


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _append_log(path, record: ExperimentRecord) -> None:
    line = json.dumps(_jsonable(record.to_json()), sort_keys=True) + "\n"
    with open(path, "a") as fh:
        fh.write(line)


def _digest(text: str | bytes) -> str:
    if isinstance(text, str):
        text = text.encode()
    return "sha256:" + hashlib.sha256(text).hexdigest()


# --- command implementations ---------------------------------------------------------------

def _need(params, *names):
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise InvalidParams(f"missing required option(s): {', '.join('--' + m for m in missing)}")


def _load_partition(path) -> Partition | None:
    if path is None:
        return None
    data = json.loads(Path(path).read_text())
    return Partition(
        tuple(tuple(c) for c in data["classes"]),
        tuple((frozenset(a), frozenset(b)) for a, b in data["sides"]),
    )


def _partition_json(part: Partition) -> dict:
    return {
        "classes": [list(c) for c in part.classes],
        "sides": [[sorted(a), sorted(b)] for a, b in part.sides],
    }


def _pruned(g, params, seed):
    _need(params, "r")
    return build_pruned(g, params["r"], seed=seed, partition=_load_partition(params.get("partition")))


def cmd_verify(g, params, seed):
    _need(params, "p", "q")
    pq = PQParams(params["p"], params["q"])
    mode = params.get("mode") or "exhaustive"
    verdict = is_pq_coloring(g, pq, mode=mode, trials=params.get("trials") or 1000, seed=seed)
    out = {"verdict": verdict.ok, "mode": verdict.mode, "checked": verdict.checked,
           "p": pq.p, "q": pq.q}
    if verdict.violator is not None:
        v = verdict.violator
        out["violator"] = {"subset": list(v.subset), "distinct_colors": v.distinct_colors,
                           "repetitions": v.repetitions}
    return out


def cmd_gen(g, params, seed):
    _need(params, "n")
    pattern = params.get("plant")
    if pattern:
        _need(params, "r")
        inst = planted_coloring(params["n"], parse_pattern(pattern), params["r"], seed=seed,
                                filler_palette=params.get("colors"))
        if params.get("partition_out"):
            atomic_write(params["partition_out"],
                         json.dumps(_partition_json(inst.partition), sort_keys=True) + "\n")
        return json.loads(dumps_coloring(inst.g))
    scheme = params.get("scheme") or "random"
    out = generate_coloring(params["n"], scheme, params.get("colors"), seed=seed)
    return json.loads(dumps_coloring(out))


def cmd_energy(g, params, seed):
    _need(params, "r")
    r = params["r"]
    hb = holder_lower_bound(g, r)
    return {
        "r": r,
        "num_colors": g.num_colors,
        "class_sizes": g.class_sizes().tolist(),
        "paper_edge_statistic": power_sum(g, r),
        "edge_count_exact": 2 ** (r - 1) * power_sum(g, r),
        "color_energy": color_energy(g),
        "holder_bound_float": hb.bound_float,
        "holder_ratio": hb.ratio,
        "certificate_ok": hb.certificate_ok,
    }


def cmd_prune(g, params, seed):
    pg = _pruned(g, params, seed)
    out = pg.summary()
    out["properties_ok"] = True
    out["max_color_degree"] = max_color_degree(g)
    if params.get("edges"):
        out["edges"] = [[list(a), list(b)] for a, b in pg.edges]
    return out


def cmd_reveal(g, params, seed):
    """Reveal a copy of a pattern found in the pruned graph, rooted at its vertex 0."""
    _need(params, "pattern")
    pg = _pruned(g, params, seed)
    pattern = parse_pattern(params["pattern"])
    res = find_subgraph(pg.adjacency, pattern, limit=1, budget=params.get("budget"))
    if not res.embeddings:
        return {"found": False, "search_complete": res.complete, "nodes": res.nodes}
    emb = res.embeddings[0]
    H = project(vertices=[emb[0]])
    T = [(emb[u], emb[v]) for u, v in pattern.edges]
    inst = RevealInstance.generate(pg, H, T)
    ledger = reveal_ledger(inst)
    out = ledger.to_json()
    out.update({"found": True, "pattern": pattern.spec_string,
                "embedding": [list(t) for t in emb.map], "H": H.to_json()})
    return out


def cmd_witness(g, params, seed):
    _need(params, "pipeline")
    pipe = params["pipeline"]
    pp = PipelineParams(multiplicity=params.get("multiplicity"),
                        budget=params.get("budget"), seed=seed)
    if pipe == "greedy":
        _need(params, "k", "m")
        rep = greedy_low_color_clique(g, params["k"], params["m"])
    elif pipe == "incidence":
        _need(params, "pattern", "gamma")
        rep = incidence_witness(g, parse_pattern(params["pattern"]), params["gamma"], params=pp)
    else:
        pg = _pruned(g, params, seed)
        if pipe == "subkt":
            _need(params, "t")
            rep = extract_subKt(pg, params["t"], pp)
        elif pipe == "theta":
            _need(params, "a", "b")
            rep = extract_theta(pg, params["a"], params["b"], pp)
        elif pipe == "subktt":
            _need(params, "b", "ell")
            rep = extract_subKtt(pg, params["b"], params["ell"], pp)
        else:
            raise InvalidParams(f"unknown pipeline {pipe!r}")
    return rep.to_json()


def cmd_exact(g, params, seed):
    _need(params, "n", "p", "q")
    res = exact_f(params["n"], params["p"], params["q"], cache=params.get("cache"))
    return res.to_json()


def _parse_ranges(text: str | None) -> dict:
    """``"r=2,a=3..5,b=2"`` -> ``{"r": range(2,3), "a": range(3,6), "b": range(2,3)}``."""
    out = {}
    for part in (text or "").split(","):
        part = part.strip()
        if not part:
            continue
        name, _, value = part.partition("=")
        lo, _, hi = value.partition("..")
        try:
            out[name.strip()] = range(int(lo), int(hi or lo) + 1)
        except ValueError as exc:
            raise InvalidParams(f"bad parameter range {part!r}") from exc
    return out


def cmd_exponents(g, params, seed):
    _need(params, "theorem")
    theorem = params["theorem"]
    if theorem not in THEOREMS:
        raise InvalidParams(f"unknown theorem {theorem!r}; choose from {sorted(THEOREMS)}")
    ranges = _parse_ranges(params.get("params"))
    missing = [x for x in THEOREMS[theorem][1] if x not in ranges]
    if missing:
        raise InvalidParams(f"theorem {theorem} needs parameters {missing}")
    rows = exponent_table(theorem, ranges, skip_invalid=not params.get("strict"))
    out = []
    for row in rows:
        flat = row.to_json()
        flat.update({f"param_{k}": v for k, v in flat.pop("params").items()})
        out.append(flat)
    return out


def cmd_report(g, params, seed):
    """Summarize an experiment log: one row per record."""
    _need(params, "log")
    rows = []
    for line in Path(params["log"]).read_text().splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        rows.append({
            "command": rec["command"], "seed": rec["seed"], "input_digest": rec["input_digest"],
            "output_digest": rec["output_digest"], "version": rec["version"],
            "seconds": round(rec["finished"] - rec["started"], 6),
        })
    return rows


COMMANDS = {
    "verify": (cmd_verify, True),
    "gen": (cmd_gen, False),
    "energy": (cmd_energy, True),
    "prune": (cmd_prune, True),
    "reveal": (cmd_reveal, True),
    "witness": (cmd_witness, True),
    "exact": (cmd_exact, False),
    "exponents": (cmd_exponents, False),
    "report": (cmd_report, False),
}


def run_experiment(
    command: str,
    params: dict | None = None,
    seed: int | None = None,
    input_path=None,
    output_path=None,
    fmt: str = "json",
    log_path=None,
) -> ExperimentRecord:
    """Dispatch one command, write its artifact atomically, log the record."""
    if command not in COMMANDS:
        raise InvalidParams(f"unknown command {command!r}; choose from {sorted(COMMANDS)}")
    params = dict(params or {})
    seed = default_seed() if seed is None else int(seed)
    fn, needs_input = COMMANDS[command]
    started = time.time()
    g = None
    digest = None
    if input_path is not None:
        text = Path(input_path).read_text()
        digest = _digest(text)
        g = loads_coloring(text)
    elif needs_input:
        raise InvalidParams(f"command {command!r} needs --input")
    result = fn(g, params, seed)
    text = render(result, fmt)
    if output_path is not None:
        atomic_write(output_path, text)
    record = ExperimentRecord(
        command=command,
        params={k: v for k, v in sorted(params.items()) if v is not None},
        seed=seed, input_digest=digest, output_digest=_digest(text), version=VERSION,
        started=started, finished=time.time(), outputs=_jsonable(result),
    )
    if log_path is not None:
        _append_log(log_path, record)
    record.text = text
    return record


# --- argument parsing ---------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help=f"master seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--input", help="coloring JSON file")
    common.add_argument("--output", help="write the artifact here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--budget", type=int, default=None, help="search node budget")
    common.add_argument("--log", dest="log_path", default=os.environ.get(LOG_ENV),
                        help=f"append an experiment record to this NDJSON file (default ${LOG_ENV})")

    parser = argparse.ArgumentParser(prog="colorenergy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check a (p,q)-coloring")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--mode", choices=("exhaustive", "sampled"))
    p.add_argument("--trials", type=int)

    p = sub.add_parser("gen", parents=[common], help="generate a coloring")
    p.add_argument("--n", type=int)
    p.add_argument("--scheme", choices=("random", "round_robin", "modular"))
    p.add_argument("--colors", type=int, help="color count (random/modular) or filler palette")
    p.add_argument("--plant", help="pattern to plant, e.g. theta:3,2")
    p.add_argument("--r", type=int)
    p.add_argument("--partition-out", dest="partition_out")

    p = sub.add_parser("energy", parents=[common], help="energy statistics and power-mean bound")
    p.add_argument("--r", type=int)

    p = sub.add_parser("prune", parents=[common], help="build and verify a pruned energy graph")
    p.add_argument("--r", type=int)
    p.add_argument("--partition")
    p.add_argument("--edges", action="store_true", help="include the retained edge list")

    p = sub.add_parser("reveal", parents=[common], help="ledger of a revealed pattern copy")
    p.add_argument("--r", type=int)
    p.add_argument("--pattern")
    p.add_argument("--partition")

    p = sub.add_parser("witness", parents=[common], help="extract a low-color clique")
    p.add_argument("--pipeline", choices=("subkt", "theta", "subktt", "greedy", "incidence"))
    p.add_argument("--r", type=int)
    for name in ("t", "a", "b", "ell", "k", "m", "multiplicity"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--pattern")
    p.add_argument("--partition")

    p = sub.add_parser("exact", parents=[common], help="exact f(n,p,q) for tiny n")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--cache")

    p = sub.add_parser("exponents", parents=[common], help="exponent table rows")
    p.add_argument("--theorem", choices=sorted(THEOREMS))
    p.add_argument("--params", help="e.g. r=2,a=3..5,b=2")
    p.add_argument("--strict", action="store_true", help="fail on invalid rows")

    p = sub.add_parser("report", parents=[common], help="summarize an experiment log")
    p.add_argument("--from-log", dest="log")
    return parser


_GLOBAL = {"seed", "input", "output", "format", "log_path", "command"}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in _GLOBAL}
    try:
        record = run_experiment(
            args.command, params, seed=args.seed, input_path=args.input,
            output_path=args.output, fmt=args.format, log_path=args.log_path,
        )
    except ColorEnergyError as exc:
        err = {"error": exc.code, "message": str(exc), "context": _jsonable(exc.context)}
        sys.stderr.write(json.dumps(err, sort_keys=True, default=str) + "\n")
        return 1
    except (OSError, ValueError, KeyError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "context": {}}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 1
    if args.output is None:
        sys.stdout.write(record.text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
