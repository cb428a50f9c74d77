"""Command line front end.

Exit codes: 0 result written (certificate found / report produced),
3 the solver proved there is no certificate in its search space,
1 input error, 2 internal inconsistency (including a certificate that fails
verification).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from . import barycenter as bary
from . import bounds, delprod, plmaps, tverberg
from .exact_linalg import InputError, fmt_rational, to_rational, to_vector
from .polytope import Face, polytope_from_json

SCHEMA_VERSION = 1
COMMANDS = ("barycenter", "tverberg", "vkf", "colored", "delprod", "lift", "bounds", "verify")

EXIT_OK, EXIT_INPUT, EXIT_INCONSISTENT, EXIT_NONE = 0, 1, 2, 3


class Inconsistency(RuntimeError):
    pass


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def problem_hash(data) -> str:
    blob = json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return "sha256:" + hashlib.sha256(blob.encode()).hexdigest()


def load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class RunManifest:
    command: str
    inputs: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    out: str | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        p = self.params
        need = {
            "barycenter": ("k", "r"),
            "tverberg": ("r",),
            "vkf": ("r", "k"),
            "colored": ("r",),
            "delprod": ("r",),
            "lift": ("k",),
            "bounds": ("r",),
            "verify": (),
        }[self.command]
        for name in need:
            if p.get(name) is None:
                raise InputError(f"{self.command} needs -{name}")
        for name in ("r", "k", "d", "N", "trials", "table"):
            if p.get(name) is not None and p[name] < 0:
                raise InputError(f"-{name} must be nonnegative")
        if p.get("r") is not None and self.command not in ("barycenter", "lift") and p["r"] < 2:
            raise InputError("-r must be at least 2")
        if self.command == "barycenter":
            if p["r"] < 1:
                raise InputError("-r must be at least 1")
            for name in ("polytope", "point"):
                if not self.inputs.get(name):
                    raise InputError(f"barycenter needs --{name}")
        if self.command in ("tverberg", "vkf", "colored") and not self.inputs.get("config"):
            if p.get("trials") is None or p.get("d") is None:
                raise InputError(f"{self.command} needs --config, or --trials with -d for a random suite")
        if self.command == "lift" and not self.inputs.get("config"):
            raise InputError("lift needs --config")
        if self.command == "delprod" and not self.inputs.get("complex"):
            raise InputError("delprod needs --complex")
        if self.command == "bounds" and p.get("d") is None and p.get("table") is None:
            raise InputError("bounds needs -d or --table")
        if self.command == "verify":
            for name in ("cert", "problem"):
                if not self.inputs.get(name):
                    raise InputError(f"verify needs --{name}")


def _envelope(m: RunManifest, problem, result, status: str, provenance: dict) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": m.command,
        "parameters": {k: v for k, v in m.params.items() if v is not None},
        "status": status,
        "result": result,
        "provenance": provenance,
    }
    if problem is not None:
        out["problem_hash"] = problem_hash(problem)
    return out


# ---------------------------------------------------------------------------
# commands


def _run_barycenter(m: RunManifest):
    problem = load_json(m.inputs["polytope"])
    P = polytope_from_json(problem)
    p = to_vector(s for s in m.inputs["point"].split(","))
    k, r = m.params["k"], m.params["r"]
    recursive = bool(m.params.get("recursive"))
    solver = bary.solve_barycenter_recursive if recursive else bary.solve_barycenter
    cert = solver(P, p, k, r)
    prov = {
        "solver": "solve_barycenter_recursive" if recursive else "solve_barycenter",
        "method": "face-multiset search with exact LP feasibility",
        "point": "parsed exactly from --point",
    }
    m.params["point"] = [fmt_rational(c) for c in p]
    if cert is None:
        return _envelope(m, problem, None, "none", prov), EXIT_NONE
    verdict = bary.verify_certificate(P, p, k, r, cert)
    if not verdict:
        raise Inconsistency(f"own certificate rejected: {verdict.reason}")
    return _envelope(m, problem, cert.to_json(), "certificate", prov), EXIT_OK


def _load_config(m: RunManifest):
    problem = load_json(m.inputs["config"])
    cfg = tverberg.PointConfiguration.from_json(problem)
    return problem, cfg


def _colors(m: RunManifest, problem, cfg):
    if m.inputs.get("colors"):
        colors = load_json(m.inputs["colors"])
        if isinstance(colors, dict):
            colors = colors.get("colors")
        problem = dict(problem, colors=colors)
    else:
        colors = problem.get("colors")
    if not isinstance(colors, list) or len(colors) != len(cfg.points):
        raise InputError("colored search needs one color per point (config 'colors' or --colors)")
    return problem, tuple(colors)


def _run_partition(m: RunManifest):
    r = m.params["r"]
    k = m.params.get("k")
    if not m.inputs.get("config"):
        return _run_trials(m)
    problem, cfg = _load_config(m)
    colors = None
    if m.command == "tverberg":
        cert = tverberg.tverberg_partition(cfg, r)
    elif m.command == "vkf":
        cert = tverberg.skeleton_tverberg_partition(cfg, r, k)
    else:
        problem, colors = _colors(m, problem, cfg)
        cert = tverberg.colored_tverberg_partition(cfg, colors, r)
    prov = {"solver": f"{m.command} search over maximal face families, exact LP"}
    if cert is None:
        return _envelope(m, problem, None, "none", prov), EXIT_NONE
    verdict = tverberg.verify_tverberg_certificate(
        cfg, cert, r, max_face_size=None if k is None or m.command != "vkf" else k + 1, colors=colors
    )
    if not verdict:
        raise Inconsistency(f"own certificate rejected: {verdict.reason}")
    return _envelope(m, problem, cert.to_json(), "certificate", prov), EXIT_OK


def _run_trials(m: RunManifest):
    r, d, k = m.params["r"], m.params["d"], m.params.get("k")
    mode = {"tverberg": "classical", "vkf": "skeleton", "colored": "colored"}[m.command]
    N = m.params.get("N")
    if N is None:
        if mode == "skeleton":
            N = (r - 1) * (d + 2)
        elif mode == "colored":
            N = (2 * r - 1) * (d + 1) - 1  # d+1 color classes of size 2r-1
        else:
            N = (r - 1) * (d + 1)
        m.params["N"] = N
    seed = m.params.get("seed") or 0
    rep = tverberg.random_trial_suite(d, r, N, m.params["trials"], seed, mode, k)
    if rep.invalid:
        raise Inconsistency(f"{rep.invalid} certificates failed verification")
    prov = {
        "generator": "xorshift64* seeded by splitmix64(seed + trial)",
        "coordinates": "integers in [-1000, 1000] / 1000",
    }
    return _envelope(m, None, rep.to_json(), "report", prov), EXIT_OK


def _run_delprod(m: RunManifest):
    problem = load_json(m.inputs["complex"])
    K = delprod.SimplicialComplex.from_json(problem)
    rep = delprod.report(K, m.params["r"])
    prov = {"homology": "Smith normal form over the integers", "orientation": "ascending vertices, graded Leibniz signs"}
    return _envelope(m, problem, rep, "report", prov), EXIT_OK


def _run_lift(m: RunManifest):
    problem, cfg = _load_config(m)
    k = m.params["k"]
    cfg = tverberg.PointConfiguration(
        cfg.dim, cfg.points, provenance={"source": os.path.basename(m.inputs["config"])}
    )
    lifted = plmaps.join_lift_config(cfg, k)
    result = {"lifted": lifted.to_json()}
    code = EXIT_OK
    if m.params.get("r") is not None:
        rep = plmaps.check_lift_reflection(cfg, m.params["r"], k)
        result["reflection"] = {
            "base_has_partition": rep.base_has_partition,
            "lift_has_partition": rep.lift_has_partition,
            "consistent": rep.consistent,
            "message": rep.message,
            "lambdas": None if rep.lambdas is None else [fmt_rational(x) for x in rep.lambdas],
            "back_projected": None if rep.back_projected is None else rep.back_projected.to_json(),
        }
        if rep.fatal:
            code = EXIT_INCONSISTENT
    prov = {"construction": "join lift, copy i vertex j -> index (i-1)(N+1)+j"}
    return _envelope(m, problem, result, "report", prov), code


def _run_bounds(m: RunManifest):
    r = m.params["r"]
    if m.params.get("table") is not None:
        return bounds.table(r, m.params["table"]), EXIT_OK
    try:
        rep = bounds.report(r, m.params["d"])
    except bounds.InconsistencyError as exc:
        raise Inconsistency(str(exc)) from exc
    return _envelope(m, None, rep.to_json(), "report", {"rules": "see per-field provenance"}), EXIT_OK


def _run_verify(m: RunManifest):
    cert_doc = load_json(m.inputs["cert"])
    problem = load_json(m.inputs["problem"])
    if not isinstance(cert_doc, dict) or cert_doc.get("schema_version") != SCHEMA_VERSION:
        raise InputError("certificate file has an unknown schema")
    command = cert_doc.get("command")
    if command not in ("barycenter", "tverberg", "vkf", "colored") or cert_doc.get("status") != "certificate":
        raise InputError("file does not hold a verifiable certificate")
    if cert_doc.get("problem_hash") != problem_hash(problem):
        return {"valid": False, "reason": "problem hash mismatch"}, EXIT_INCONSISTENT
    params = cert_doc.get("parameters", {})
    res = cert_doc["result"]
    try:
        if command == "barycenter":
            P = polytope_from_json(problem)
            faces = []
            for f in res["faces"]:
                face = P.face_index.get(tuple(f))
                faces.append(face if face is not None else Face(-2, tuple(f)))
            cert = bary.BarycenterCertificate(
                tuple(faces),
                tuple(to_vector(p) for p in res["points"]),
                tuple(to_vector(c) for c in res["coefficients"]),
            )
            verdict = bary.verify_certificate(
                P, to_vector(params["point"]), int(params["k"]), int(params["r"]), cert
            )
        else:
            cfg = tverberg.PointConfiguration.from_json(problem)
            cert = tverberg.TverbergCertificate.from_json(res)
            k = params.get("k")
            verdict = tverberg.verify_tverberg_certificate(
                cfg,
                cert,
                int(params["r"]),
                max_face_size=k + 1 if command == "vkf" else None,
                colors=problem.get("colors") if command == "colored" else None,
            )
    except (KeyError, TypeError) as exc:
        raise InputError(f"certificate is missing data: {exc}") from exc
    out = {"valid": bool(verdict), "reason": verdict.reason}
    return out, EXIT_OK if verdict else EXIT_INCONSISTENT


RUNNERS = {
    "barycenter": _run_barycenter,
    "tverberg": _run_partition,
    "vkf": _run_partition,
    "colored": _run_partition,
    "delprod": _run_delprod,
    "lift": _run_lift,
    "bounds": _run_bounds,
    "verify": _run_verify,
}


def run(m: RunManifest) -> int:
    try:
        m.validate()
        doc, code = RUNNERS[m.command](m)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Inconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    text = doc if isinstance(doc, str) else canonical_json(doc)
    if m.out:
        write_atomic(m.out, text)
    else:
        sys.stdout.write(text)
    if m.command == "verify" and code != EXIT_OK:
        print(f"invalid certificate: {doc['reason']}", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors: exit 1, not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tverkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, r=True):
        if r:
            p.add_argument("-r", type=int)
        p.add_argument("--out", help="write JSON here (atomically) instead of stdout")
        return p

    p = common(sub.add_parser("barycenter", help="barycenter of r points in the k-skeleton"))
    p.add_argument("--polytope", required=True)
    p.add_argument("--point", required=True, help='comma separated rationals, e.g. "0,1/2"')
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--recursive", action="store_true")

    for name, helptext in (
        ("tverberg", "r pairwise disjoint faces with intersecting images"),
        ("vkf", "as tverberg, faces restricted to the k-skeleton"),
        ("colored", "as tverberg, faces restricted to rainbow faces"),
    ):
        p = common(sub.add_parser(name, help=helptext))
        p.add_argument("--config")
        if name == "vkf":
            p.add_argument("-k", type=int, required=True)
        if name == "colored":
            p.add_argument("--colors")
        p.add_argument("-d", type=int, help="dimension for a random trial suite")
        p.add_argument("-N", type=int, help="simplex dimension for a random trial suite")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int, default=0)

    p = common(sub.add_parser("delprod", help="deleted r-fold product: f-vector, homology, symmetry"))
    p.add_argument("--complex", required=True)

    p = common(sub.add_parser("lift", help="join lift of a configuration"))
    p.add_argument("--config", required=True)
    p.add_argument("-k", type=int, required=True)

    p = common(sub.add_parser("bounds", help="bounds on the topological Tverberg number"))
    p.add_argument("-d", type=int)
    p.add_argument("--table", type=int, metavar="DMAX")

    p = common(sub.add_parser("verify", help="check a certificate against its problem file"), r=False)
    p.add_argument("--cert", required=True)
    p.add_argument("--problem", required=True)
    return parser


def manifest_from_args(ns: argparse.Namespace) -> RunManifest:
    inputs = {
        name: getattr(ns, name)
        for name in ("polytope", "point", "config", "colors", "complex", "cert", "problem")
        if getattr(ns, name, None) is not None
    }
    params = {
        name: getattr(ns, name)
        for name in ("r", "k", "d", "N", "trials", "seed", "table")
        if getattr(ns, name, None) is not None
    }
    if getattr(ns, "recursive", False):
        params["recursive"] = True
    if ns.command in ("tverberg", "vkf", "colored") and ns.config is not None:
        params.pop("seed", None)
    return RunManifest(ns.command, inputs, params, ns.out)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(manifest_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
