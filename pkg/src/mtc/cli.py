"""Command-line interface: load algebra specs, run the verification suites,
and emit machine- and human-readable reports.

    mtc <subcommand> (--algebra FILE | --builtin NAME [--param K=V]...)
        [--ribbon IDX] [--format json|csv|text] [--out PATH]

Subcommands: verify, simples, cartan, fusion, modular-data, diagram eval,
cardy <boundary-state|annulus|torus|defect|sf>.  MTC_THREADS bounds the
parallelism of independent leaf checks.  Exit codes: 0 all pass, 1 check
failure, 2 usage/parse error, 3 internal inconsistency.
"""

import argparse
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .scalars import format_scalar
from .linalg import Matrix
from . import hopf as hopf_mod
from . import repcat, coend as coend_mod, cardy as cardy_mod, diagrams
from .hopf import AlgebraFormatError, HopfError
from .coend import CoendError
from .cardy import CardyError
from .etale import NonSplitError
from .report import Report

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration / loading

class RunConfig:
    def __init__(self, algebra=None, builtin=None, params=None, ribbon=None,
                 fmt="text", out=None):
        if (algebra is None) == (builtin is None):
            raise UsageError("exactly one of --algebra and --builtin is required")
        self.algebra = algebra
        self.builtin = builtin
        self.params = params or {}
        self.ribbon = ribbon
        self.fmt = fmt
        self.out = out


def load_algebra(config):
    """Load and verify the algebra named by the config."""
    if config.builtin is not None:
        params = config.params.get("orders")
        if params is None and "n" in config.params:
            params = [config.params["n"]]
        h = hopf_mod.builtin(config.builtin, params)
    else:
        h = hopf_mod.load_algebra(config.algebra)
    rep = hopf_mod.verify_hopf_axioms(h)
    if not rep.ok:
        raise AlgebraFormatError(
            "algebra failed verification: %s" % "; ".join(
                "%s [%s]" % (n, w) for n, w in rep.failures()))
    return h


def choose_ribbon(h, index):
    """The algebra with a ribbon element selected: the declared one, the
    unique solution, or the --ribbon index into the solve_ribbon list."""
    if h.ribbon is not None and index is None:
        return h
    vs = hopf_mod.solve_ribbon(h)
    if not vs:
        raise HopfError("no ribbon element exists for %s" % h.name)
    if index is None:
        if len(vs) == 1:
            return h.with_ribbon(vs[0])
        raise UsageError(
            "%s has %d ribbon elements; pick one with --ribbon IDX"
            % (h.name, len(vs)))
    if not 0 <= index < len(vs):
        raise UsageError("--ribbon %d out of range (0..%d)"
                         % (index, len(vs) - 1))
    return h.with_ribbon(vs[index])


# ---------------------------------------------------------------------------
# the verification suite

def run_suite(config):
    """Dependency-ordered pipeline with skip-propagation."""
    rep = Report("verification suite")
    threads = max(1, int(os.environ.get("MTC_THREADS", "1")))
    try:
        h = load_algebra(config)
    except (AlgebraFormatError, HopfError) as e:
        rep.add("load algebra", False, str(e))
        return rep

    with rep.timed("axioms"):
        rep.merge(hopf_mod.verify_hopf_axioms(h))
        if h.rmatrix is not None:
            rep.merge(hopf_mod.verify_quasitriangular(h))
    if not rep.ok:
        rep.skip("remaining stages", "axiom failure")
        return rep

    try:
        h = choose_ribbon(h, config.ribbon)
        have_ribbon = True
        rep.add("ribbon element", True)
    except (HopfError, UsageError) as e:
        rep.add("ribbon element", False, str(e))
        have_ribbon = False

    with rep.timed("simples"):
        try:
            sd = repcat.simples_data(h)
            rep.add("simples and projective covers", True)
        except NonSplitError as e:
            rep.add("simples and projective covers", False, str(e))
            rep.skip("remaining stages", "non-split algebra")
            return rep

    with rep.timed("category structure"):
        _structural_checks(h, sd, rep, have_ribbon, threads)

    if not have_ribbon:
        for stage in ["coend build", "structure solve", "integrals",
                      "modularity", "S/T transforms", "characters",
                      "cutting", "cardy certificates"]:
            rep.skip(stage, "no ribbon element")
        return rep

    with rep.timed("coend"):
        try:
            cd = coend_mod.build_coend(h)
            rep.add("coend build", True)
            coend_mod.solve_structure_morphisms(cd)
            rep.add("structure solve + dinaturality certificate", True)
        except CoendError as e:
            rep.add("structure solve", False, str(e))
            return rep

    modular = coend_mod.modularity_test(cd)
    rep.add("modularity (omega non-degenerate)", modular)
    if not modular:
        try:
            coend_mod.solve_integrals(cd)
            rep.add("integrals normalized (lambda Lambda = 1)", True)
        except CoendError as e:
            rep.add("integrals", False, str(e))
        for stage in ["zeta normalization", "S/T transforms", "characters",
                      "cutting", "cardy certificates"]:
            rep.skip(stage, "not modular")
        return rep

    with rep.timed("integrals"):
        try:
            coend_mod.integrals_and_zeta(cd)
            rep.add("integrals normalized (lambda Lambda = 1, zeta = D+ D-)", True)
        except CoendError as e:
            rep.add("integrals", False, str(e))
            for stage in ["S/T transforms", "characters", "cutting",
                          "cardy certificates"]:
                rep.skip(stage, "integral normalization failed")
            return rep

    with rep.timed("S/T"):
        try:
            coend_mod.radford_pairing(cd)
            strep, scalars = coend_mod.s_t_transforms(cd)
            rep.merge(strep)
            cd.sl2z_scalars = scalars
        except CoendError as e:
            rep.add("S/T transforms", False, str(e))
            return rep

    with rep.timed("characters"):
        _character_checks(h, sd, cd, rep)

    with rep.timed("cutting"):
        try:
            one = repcat.trivial_module(h)
            for x in [one] + list(sd.simples):
                coend_mod.cutting_decomposition(cd, x)
            rep.add("cutting decompositions exist", True)
        except CoendError as e:
            rep.add("cutting decompositions exist", False, str(e))

    with rep.timed("cardy"):
        try:
            _, trep = cardy_mod.torus_partition(h, with_coend=cd)
            rep.merge(trep)
            _, darep, _ = cardy_mod.defect_algebra(cd)
            rep.merge(darep)
        except (CardyError, CoendError) as e:
            rep.add("cardy certificates", False, str(e))
    return rep


def _structural_checks(h, sd, rep, have_ribbon, threads):
    from .linalg import kron
    f = h.field
    objects = list(sd.simples) + list(sd.projectives)

    def snake(x):
        ev = repcat.ev_morphism(x).matrix
        coev = repcat.coev_morphism(x).matrix
        eye = Matrix.identity(f, x.dim)
        s1 = kron(eye, ev) * kron(coev, eye) == eye
        s2 = kron(ev, eye) * kron(eye, coev) == eye
        if not have_ribbon:
            return s1 and s2
        evt = repcat.ev_tilde_morphism(x).matrix
        coevt = repcat.coev_tilde_morphism(x).matrix
        s3 = kron(evt, eye) * kron(eye, coevt) == eye
        s4 = kron(eye, evt) * kron(coevt, eye) == eye
        return s1 and s2 and s3 and s4

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(snake, objects))
    rep.add("snake identities", all(results))

    if h.rmatrix is not None:
        ok = True
        for x in sd.simples:
            for y in sd.simples:
                bxy = repcat.braiding(x, y)
                for z in sd.simples[:2]:
                    lhs = repcat.braiding(repcat.tensor_obj(x, y), z).matrix
                    rhs = kron(repcat.braiding(x, z).matrix,
                               Matrix.identity(f, y.dim)) * \
                        kron(Matrix.identity(f, x.dim),
                             repcat.braiding(y, z).matrix)
                    if lhs != rhs:
                        ok = False
        rep.add("hexagon on simples", ok)

    if have_ribbon:
        ok = True
        for x in sd.simples:
            for y in sd.simples:
                lhs = repcat.twist_morphism(repcat.tensor_obj(x, y)).matrix
                rhs = repcat.braiding(y, x).matrix * \
                    repcat.braiding(x, y).matrix * \
                    kron(repcat.twist_morphism(x).matrix,
                         repcat.twist_morphism(y).matrix)
                if lhs != rhs:
                    ok = False
        rep.add("twist of a product", ok)


def _character_checks(h, sd, cd, rep):
    f = h.field
    n = h.dim
    ok = True
    cochars = []
    for s in list(sd.simples) + list(sd.projectives):
        chi, chk = coend_mod.characters(cd, s)
        rhs = Matrix.zeros(f, 1, n)
        for c in range(n):
            acc = f.zero()
            for p in range(n):
                acc = acc + chk.matrix.data[p] * cd.omega.data[p * n + c]
            rhs.data[c] = acc
        if chi.matrix != rhs:
            ok = False
        cochars.append(chk.matrix)
    rep.add("chi = omega(chk x id)", ok)
    stack = None
    for v in cochars[:sd.count]:
        stack = v if stack is None else stack.hstack(v)
    from .linalg import rank
    rep.add("cocharacters of simples linearly independent",
            rank(stack) == sd.count)


# ---------------------------------------------------------------------------
# output

def matrix_payload(m):
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": sorted([i, j, format_scalar(m[i, j])]
                          for i in range(m.rows) for j in range(m.cols)
                          if not m[i, j].is_zero()),
    }


def _csv_quote(s):
    s = str(s)
    if any(c in s for c in ',"\n\r'):
        return '"' + s.replace('"', '""') + '"'
    return s


def emit(payload, fmt, out=None):
    """Bit-stable rendering of a payload (dict with optional 'timings')."""
    data = {k: v for k, v in payload.items() if k != "timings"}
    if fmt == "json":
        text = json.dumps(data, indent=1, sort_keys=True) + "\n"
    elif fmt == "csv":
        text = _emit_csv(data)
    elif fmt == "text":
        text = _emit_text(data)
        if payload.get("timings"):
            text += "\n# timings (seconds)\n"
            for name, dt in payload["timings"]:
                text += "# %-24s %.3f\n" % (name, dt)
    else:
        raise UsageError("unknown format %r" % fmt)
    if out:
        with open(out, "w") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(data, prefix=""):
    buf = io.StringIO()

    def walk(obj, path):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(obj[k], path + [str(k)])
        elif isinstance(obj, list):
            if obj and all(isinstance(r, list) for r in obj):
                for row in obj:
                    buf.write(",".join(_csv_quote(x) for x in [".".join(path)] + row))
                    buf.write("\r\n")
            else:
                for i, v in enumerate(obj):
                    walk(v, path + [str(i)])
        else:
            buf.write(",".join(_csv_quote(x) for x in [".".join(path), obj]))
            buf.write("\r\n")

    walk(data, [])
    return buf.getvalue()


def _emit_text(data, indent=0):
    lines = []

    def walk(obj, pad, key=None):
        head = " " * pad + (key + ":" if key else "")
        if isinstance(obj, dict):
            if key:
                lines.append(head)
            for k in sorted(obj):
                walk(obj[k], pad + (2 if key else 0), k)
        elif isinstance(obj, list):
            if obj and all(isinstance(r, list) for r in obj) and key == "table":
                widths = [max(len(str(r[c])) for r in obj) for c in range(len(obj[0]))]
                if key:
                    lines.append(head)
                for r in obj:
                    lines.append(" " * (pad + 2) + "  ".join(
                        str(x).rjust(w) for x, w in zip(r, widths)))
            else:
                lines.append(head + " " + json.dumps(obj, sort_keys=True))
        else:
            lines.append(head + " " + str(obj))

    walk(data, indent)
    return "\n".join(lines) + "\n"


def report_payload(rep):
    return {
        "checks": [
            {"name": n, "status": st, **({"witness": str(w)} if w is not None else {})}
            for n, st, w in rep.checks
        ],
        "ok": rep.ok,
        "timings": rep.timings,
    }


# ---------------------------------------------------------------------------
# subcommand handlers

def _resolve_object(h, sd, name):
    if name in ("1", "one", "trivial"):
        return repcat.trivial_module(h)
    if name in ("H", "regular"):
        return repcat.regular_module(h)
    if name.startswith("S"):
        return sd.simples[int(name[1:])]
    if name.startswith("P"):
        return sd.projectives[int(name[1:])]
    return sd.simples[int(name)]


def cmd_verify(config):
    rep = run_suite(config)
    emit(report_payload(rep), config.fmt, config.out)
    return EXIT_OK if rep.ok else EXIT_CHECK_FAILED


def cmd_simples(config):
    h = load_algebra(config)
    sd = repcat.simples_data(h)
    payload = {
        "algebra": h.name,
        "simple_dims": [s.dim for s in sd.simples],
        "projective_dims": [p.dim for p in sd.projectives],
        "table": [["simple", "dim", "projective_cover_dim"]] + [
            [s.name, s.dim, p.dim] for s, p in zip(sd.simples, sd.projectives)],
    }
    emit(payload, config.fmt, config.out)
    return EXIT_OK


def cmd_cartan(config):
    h = load_algebra(config)
    sd = repcat.simples_data(h)
    payload = {"algebra": h.name, "cartan": sd.cartan,
               "table": [[""] + [s.name for s in sd.simples]] + [
                   [sd.simples[u].name] + sd.cartan[u] for u in range(sd.count)]}
    emit(payload, config.fmt, config.out)
    return EXIT_OK


def cmd_fusion(config):
    h = load_algebra(config)
    sd = repcat.simples_data(h)
    gr = repcat.grothendieck_ring(h)
    payload = {
        "algebra": h.name,
        "basis": [s.name for s in sd.simples],
        "structure_constants": sorted(
            [i, j, k, gr[i][j][k]]
            for i in range(sd.count) for j in range(sd.count)
            for k in range(sd.count) if gr[i][j][k]),
    }
    emit(payload, config.fmt, config.out)
    return EXIT_OK


def cmd_modular_data(config):
    h = choose_ribbon(load_algebra(config), config.ribbon)
    cd = coend_mod.build_full(h)
    if not coend_mod.modularity_test(cd):
        emit({"algebra": h.name, "modular": False}, config.fmt, config.out)
        return EXIT_CHECK_FAILED
    payload = {
        "algebra": h.name,
        "modular": True,
        "zeta": format_scalar(cd.zeta),
        "Delta_plus": format_scalar(cd.Delta_plus),
        "Delta_minus": format_scalar(cd.Delta_minus),
        "D": format_scalar(cd.D),
        "D_extends_field": cd.D_field.extended,
        "S": matrix_payload(cd.S_transform),
        "T": matrix_payload(cd.T_transform),
        "omega": matrix_payload(cd.omega_gram()),
        "Lambda": matrix_payload(cd.Lambda),
        "lambda": matrix_payload(cd.lambda_.transpose()),
        "sl2z_scalars": {k: (format_scalar(v) if v is not None else None)
                         for k, v in cd.sl2z_scalars.items()},
    }
    emit(payload, config.fmt, config.out)
    return EXIT_OK


def cmd_diagram_eval(config, binds, expr):
    h = choose_ribbon(load_algebra(config), config.ribbon) \
        if _needs_ribbon(expr) else load_algebra(config)
    env = diagrams.Env(h)
    for spec in binds:
        if "=" not in spec:
            raise UsageError("--bind expects NAME=module.json")
        name, path = spec.split("=", 1)
        env.bind_object(name, repcat.load_module(h, path))
    ast = diagrams.parse(expr)
    mor = diagrams.evaluate(ast, env)
    payload = {
        "expr": expr,
        "dom_dim": mor.dom.dim,
        "cod_dim": mor.cod.dim,
        "matrix": matrix_payload(mor.matrix),
    }
    emit(payload, config.fmt, config.out)
    return EXIT_OK


def _needs_ribbon(expr):
    return any(tok in expr for tok in ("tw(", "twinv(", "evt(", "coevt("))


def cmd_cardy(config, sub, args):
    h = choose_ribbon(load_algebra(config), config.ribbon)
    if sub == "sf":
        fa = cardy_mod.sf_fusion_algebra(args.N)
        payload = {
            "N": args.N,
            "basis": fa.labels,
            "structure_constants": sorted(
                [i, j, k, format_scalar(fa.constants[i][j][k])]
                for i in range(4) for j in range(4) for k in range(4)
                if not fa.constants[i][j][k].is_zero()),
            "trace_form_radical_dim": fa.trace_form_radical_dim(),
        }
        emit(payload, config.fmt, config.out)
        return EXIT_OK
    sd = repcat.simples_data(h)
    if sub == "torus":
        cd = coend_mod.build_full(h)
        cartan, rep = cardy_mod.torus_partition(h, with_coend=cd)
        payload = {"algebra": h.name, "cartan": cartan,
                   "certificate": report_payload(rep)["checks"]}
        emit(payload, config.fmt, config.out)
        return EXIT_OK if rep.ok else EXIT_CHECK_FAILED
    cd = coend_mod.build_full(h)
    if sub == "boundary-state":
        x = _resolve_object(h, sd, args.object)
        mor = cardy_mod.boundary_state(cd, x, args.direction)
        payload = {"object": x.name, "direction": args.direction,
                   "state": matrix_payload(mor.matrix)}
        emit(payload, config.fmt, config.out)
        return EXIT_OK
    if sub == "annulus":
        m = _resolve_object(h, sd, args.m)
        n_ = _resolve_object(h, sd, args.n)
        amp = cardy_mod.annulus_amplitude(cd, m, n_)
        closed = cardy_mod.annulus_closed_channel(cd, m, n_)
        payload = {"m": m.name, "n": n_.name,
                   "open_channel": matrix_payload(amp.matrix),
                   "closed_channel": matrix_payload(closed.matrix)}
        emit(payload, config.fmt, config.out)
        return EXIT_OK
    if sub == "defect":
        if args.all_pairs:
            fa, rep, ops = cardy_mod.defect_algebra(cd)
            payload = {
                "algebra": h.name,
                "operators": {op.label.name: matrix_payload(op.matrix)
                              for op in ops},
                "checks": report_payload(rep)["checks"],
            }
            emit(payload, config.fmt, config.out)
            return EXIT_OK if rep.ok else EXIT_CHECK_FAILED
        x = _resolve_object(h, sd, args.object)
        op = cardy_mod.defect_operator(cd, x)
        payload = {"object": x.name, "matrix": matrix_payload(op.matrix)}
        emit(payload, config.fmt, config.out)
        return EXIT_OK
    raise UsageError("unknown cardy subcommand %r" % sub)


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p):
    p.add_argument("--algebra", help="algebra spec file (JSON syntax)")
    p.add_argument("--builtin", help="builtin algebra name: %s"
                   % ", ".join(hopf_mod.BUILTIN_NAMES))
    p.add_argument("--param", action="append", default=[],
                   help="builtin parameter K=V (e.g. n=3, orders=2,2)")
    p.add_argument("--ribbon", type=int, default=None,
                   help="index into the deterministic ribbon element list")
    p.add_argument("--format", dest="fmt", choices=["json", "csv", "text"],
                   default="text")
    p.add_argument("--out", default=None, help="output path (default stdout)")


def _parse_params(items):
    params = {}
    for item in items:
        if "=" not in item:
            raise UsageError("--param expects K=V, got %r" % item)
        k, v = item.split("=", 1)
        if "," in v:
            params[k] = [int(x) for x in v.split(",")]
        else:
            try:
                params[k] = int(v)
            except ValueError:
                params[k] = v
    if "orders" in params and isinstance(params["orders"], int):
        params["orders"] = [params["orders"]]
    return params


def build_parser():
    ap = argparse.ArgumentParser(
        prog="mtc",
        description="exact modular-tensor-category computations from ribbon "
                    "Hopf algebra presentations")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ["verify", "simples", "cartan", "fusion", "modular-data"]:
        p = sub.add_parser(name)
        _add_common(p)
    p = sub.add_parser("diagram")
    dsub = p.add_subparsers(dest="diagram_command", required=True)
    pe = dsub.add_parser("eval")
    _add_common(pe)
    pe.add_argument("--bind", action="append", default=[],
                    help="object binding NAME=module.json")
    pe.add_argument("--expr", required=True, help="diagram expression")
    p = sub.add_parser("cardy")
    csub = p.add_subparsers(dest="cardy_command", required=True)
    pb = csub.add_parser("boundary-state")
    _add_common(pb)
    pb.add_argument("--object", required=True)
    pb.add_argument("--direction", choices=["out", "in"], required=True)
    pa = csub.add_parser("annulus")
    _add_common(pa)
    pa.add_argument("--m", required=True)
    pa.add_argument("--n", required=True)
    pt = csub.add_parser("torus")
    _add_common(pt)
    pd = csub.add_parser("defect")
    _add_common(pd)
    pd.add_argument("--object")
    pd.add_argument("--all-pairs", action="store_true")
    ps = csub.add_parser("sf")
    _add_common(ps)
    ps.add_argument("--N", type=int, required=True)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        config = RunConfig(algebra=args.algebra, builtin=args.builtin,
                           params=_parse_params(args.param),
                           ribbon=args.ribbon, fmt=args.fmt, out=args.out)
        if args.command == "verify":
            return cmd_verify(config)
        if args.command == "simples":
            return cmd_simples(config)
        if args.command == "cartan":
            return cmd_cartan(config)
        if args.command == "fusion":
            return cmd_fusion(config)
        if args.command == "modular-data":
            return cmd_modular_data(config)
        if args.command == "diagram":
            return cmd_diagram_eval(config, args.bind, args.expr)
        if args.command == "cardy":
            if args.cardy_command == "defect" and not args.all_pairs \
                    and args.object is None:
                raise UsageError("cardy defect needs --object or --all-pairs")
            return cmd_cardy(config, args.cardy_command, args)
        raise UsageError("unknown command %r" % args.command)
    except (UsageError, AlgebraFormatError, diagrams.DiagramError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    except (HopfError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (CoendError, CardyError, NonSplitError, AssertionError) as e:
        print("internal inconsistency: %s" % e, file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
