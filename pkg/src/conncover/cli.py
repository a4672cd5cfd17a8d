"""Command-line front end.  Every command prints one JSON report on stdout.

Exit codes: 0 success (including "unknown" answers), 2 input error,
3 internal assertion failure, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from pathlib import Path

from . import simplicial as sc
from .covers import SearchBudget, cover_from_json, cover_to_json, gamma_bounds, search_cover_with_homology, validate_cover
from .errors import CapExceeded, InputError
from .experiments import FIXTURES
from .graphs import MinorCaps, from_graph6, has_minor, named_graph, parse_graph
from .helly import helly_number, minor_from_helly_configuration, piercing_number, pq_property

EXIT_OK, EXIT_INPUT, EXIT_ASSERT, EXIT_CAP = 0, 2, 3, 4

_NAMED = [
    (re.compile(r"^K(\d+)$"), lambda m: named_graph("complete", int(m[1]))),
    (re.compile(r"^K(\d+(?:,\d+)+)$"), lambda m: named_graph("multipartite", *map(int, m[1].split(",")))),
    (re.compile(r"^C(\d+)$"), lambda m: named_graph("cycle", int(m[1]))),
    (re.compile(r"^P(\d+)$"), lambda m: named_graph("path", int(m[1]))),
    (re.compile(r"^(?:W8|wagner)$"), lambda m: named_graph("wagner")),
    (re.compile(r"^wheel(\d+)$"), lambda m: named_graph("wheel", int(m[1]))),
]


class Run:
    """Collects the raw inputs of one command so the report can carry their digest."""

    def __init__(self) -> None:
        self.raw: list[str] = []

    def text(self, source: str) -> str:
        if source == "-":
            data = sys.stdin.read()
        else:
            path = Path(source)
            if not path.is_file():
                raise InputError(f"no such file: {source}")
            data = path.read_text()
        self.raw.append(data)
        return data

    def graph(self, spec: str) -> "Graph":  # noqa: F821
        """A file path, '-', a named graph (K5, K3,3, C6, P4, wheel5, W8) or a graph6 string."""
        if spec != "-" and not Path(spec).is_file():
            for pattern, build in _NAMED:
                m = pattern.match(spec)
                if m:
                    self.raw.append(spec)
                    return build(m)
            self.raw.append(spec)
            return from_graph6(spec)
        return parse_graph(self.text(spec))

    def cover(self, source: str):
        return cover_from_json(self.text(source))

    def digest(self, args: dict) -> str:
        h = hashlib.sha256()
        h.update(json.dumps(args, sort_keys=True).encode())
        for r in self.raw:
            h.update(b"\0" + r.encode())
        return h.hexdigest()


def _budget(ns) -> SearchBudget:
    return SearchBudget(max_members=ns.budget_members, max_pool=ns.budget_pool)


def _caps(ns) -> MinorCaps:
    return MinorCaps(max_host=ns.cap_vertices)


# --- commands -----------------------------------------------------------------


def cmd_gamma(ns, run: Run) -> tuple[dict, str]:
    g = run.graph(ns.graph)
    b = gamma_bounds(g, _budget(ns), exhaustive=ns.exhaustive, caps=_caps(ns))
    status = "ok" if b.upper is not None else "unknown-budget-exhausted"
    return b.to_json(), status


def _nerve_payload(c) -> dict:
    k = c.nerve()
    return {"maximal_faces": [list(f) for f in k.maximal_faces()], "betti": sc.betti(k)}


def cmd_nerve(ns, run: Run) -> tuple[dict, str]:
    c = run.cover(ns.cover)
    report = validate_cover(c)
    return {**_nerve_payload(c), "validation": report.to_json()}, "ok"


def cmd_betti(ns, run: Run) -> tuple[dict, str]:
    if ns.complex:
        k = sc.parse_complex(run.text(ns.cover))
        return {"betti": sc.betti(k), "f_vector": k.f_vector()}, "ok"
    c = run.cover(ns.cover)
    return {"betti": sc.betti(c.nerve())}, "ok"


def cmd_validate(ns, run: Run) -> tuple[dict, str]:
    c = run.cover(ns.cover)
    report = validate_cover(c)
    if not report.valid:
        raise _InvalidCover(report.to_json())
    return report.to_json(), "ok"


class _InvalidCover(InputError):
    def __init__(self, payload: dict):
        super().__init__("cover is not connected at " + str(payload["violation"]))
        self.payload = payload


def cmd_minor(ns, run: Run) -> tuple[dict, str]:
    g = run.graph(ns.graph)
    h = run.graph(ns.pattern)
    cert = has_minor(g, h, _caps(ns))
    return {"found": cert is not None, "certificate": cert.to_json() if cert else "none"}, "ok"


def cmd_helly(ns, run: Run) -> tuple[dict, str]:
    c = run.cover(ns.cover)
    h, hc = helly_number(c)
    out: dict = {"helly_number": h, "configuration": list(hc.member_indices) if hc else None}
    if hc is not None and hc.m >= 3:
        out["certificate"] = minor_from_helly_configuration(c, hc).to_json()
    return out, "ok"


def cmd_pierce(ns, run: Run) -> tuple[dict, str]:
    c = run.cover(ns.cover)
    return piercing_number(c).to_json(), "ok"


def cmd_pq(ns, run: Run) -> tuple[dict, str]:
    c = run.cover(ns.cover)
    return {"p": ns.p, "q": ns.q, "holds": pq_property(c, ns.p, ns.q)}, "ok"


def cmd_tchain(ns, run: Run) -> tuple[dict, str]:
    tau, file_order = sc.parse_chain(run.text(ns.chain))
    if ns.order_file:
        # same simplices, listed in the wanted order
        _, order = sc.parse_chain(run.text(ns.order_file))
        if sorted(order) != sorted(file_order):
            raise InputError("order file must list exactly the simplices of the chain")
    elif ns.order == "lex":
        order = sorted(tau.simplices, key=sc.labels)
    else:
        order = file_order
    t = sc.tchain(tau, order)
    dt = sc.boundary(t)
    if dt != tau:
        raise AssertionError("boundary of T differs from tau")
    return {"T": t.as_lists(), "boundary_T": dt.as_lists(), "equals_tau": True}, "ok"


def cmd_search(ns, run: Run) -> tuple[dict, str]:
    g = run.graph(ns.graph)
    res = search_cover_with_homology(g, ns.d, _budget(ns))
    out = {
        "status": res.status.value,
        "families_checked": res.families_checked,
        "pool_size": res.pool_size,
        "pool_truncated": res.pool_truncated,
        "cover": cover_to_json(res.cover) if res.cover else None,
    }
    return out, ("unknown-budget-exhausted" if res.status.name == "EXHAUSTED" else "ok")


def cmd_reproduce(ns, run: Run) -> tuple[dict, str]:
    if ns.name not in FIXTURES:
        raise InputError(f"unknown fixture {ns.name!r}; known: {', '.join(sorted(FIXTURES))}")
    checks = FIXTURES[ns.name](ns.seed)
    payload = {"fixture": ns.name, "seed": ns.seed, "checks": [c.to_json() for c in checks]}
    if not all(c.passed for c in checks):
        raise _FailedReproduction(payload)
    return payload, "ok"


class _FailedReproduction(AssertionError):
    def __init__(self, payload: dict):
        super().__init__("reproduction failed")
        self.payload = payload


# --- driver -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conncover", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-members", type=int, default=6, metavar="N")
    common.add_argument("--budget-pool", type=int, default=64, metavar="N")
    common.add_argument("--cap-vertices", type=int, default=16, metavar="N")
    common.add_argument("--seed", type=int, default=0, metavar="S")
    common.add_argument("--threads", type=int, default=1, metavar="T")
    common.add_argument("--exhaustive", action="store_true")
    common.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identical output)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, *args):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for a in args:
            sp.add_argument(*a[0], **a[1])
        sp.set_defaults(func=func)
        return sp

    graph_arg = (["graph"], {"help": "file, '-', named graph (K5, K3,3, C6, P4, wheel5, W8) or graph6"})
    cover_arg = (["cover"], {"help": "cover JSON file or '-'"})
    add("gamma", cmd_gamma, "bounds on the homological dimension", graph_arg)
    add("nerve", cmd_nerve, "nerve of a cover", cover_arg)
    add("betti", cmd_betti, "reduced Betti numbers", cover_arg,
        (["--complex"], {"action": "store_true", "help": "input is a complex, one face per line"}))
    add("validate", cmd_validate, "check a cover is connected", cover_arg)
    add("minor", cmd_minor, "minor test with certificate", graph_arg, (["pattern"], {}))
    add("helly", cmd_helly, "Helly number and minor extraction", cover_arg)
    add("pierce", cmd_pierce, "minimum piercing set", cover_arg)
    add("pq", cmd_pq, "(p,q) property", cover_arg, (["p"], {"type": int}), (["q"], {"type": int}))
    add("tchain", cmd_tchain, "the T chain of an ordered 2-cycle", (["chain"], {}),
        (["--order"], {"choices": ["file", "lex"], "default": "file"}),
        (["--order-file"], {"default": None}))
    add("search", cmd_search, "search for a cover with homology in dimension d", graph_arg, (["d"], {"type": int}))
    add("reproduce", cmd_reproduce, "run a worked example or seeded sweep",
        (["name"], {"help": "one of: " + ", ".join(sorted(FIXTURES))}))
    return p


def _args_for_digest(ns) -> dict:
    return {k: v for k, v in vars(ns).items() if k not in ("func", "timing")}


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    run = Run()
    start = time.perf_counter()
    report: dict = {
        "command": ns.command,
        "budget": {"members": ns.budget_members, "pool": ns.budget_pool, "cap_vertices": ns.cap_vertices},
    }
    code = EXIT_OK
    try:
        result, status = ns.func(ns, run)
        report.update(result=result, status=status)
    except _InvalidCover as exc:
        report.update(result=exc.payload, status="error", error=str(exc))
        code = EXIT_INPUT
    except _FailedReproduction as exc:
        report.update(result=exc.payload, status="error", error=str(exc))
        code = EXIT_ASSERT
    except InputError as exc:
        report.update(result=None, status="error", error=str(exc))
        code = EXIT_INPUT
    except CapExceeded as exc:
        report.update(result=None, status="error", error=str(exc))
        code = EXIT_CAP
    except AssertionError as exc:
        report.update(result=None, status="error", error=f"internal assertion failed: {exc}")
        code = EXIT_ASSERT
    report["inputs"] = run.digest(_args_for_digest(ns))
    if ns.timing:
        report["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
    print(json.dumps(report, sort_keys=True, indent=2))
    if code:
        print(f"conncover {ns.command}: {report.get('error')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
