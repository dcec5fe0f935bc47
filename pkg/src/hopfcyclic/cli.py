"""Operator-facing command line.

Subcommands: validate, identities, cohomology, cup, fixtures, audit.
Reports are deterministic text (no timestamps, no paths), keyed by a content
hash of the canonically re-serialized input, so identical inputs give
byte-identical reports.  Exit codes: 0 all certificates passed, 1 a
certificate or validation failed, 2 input error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys

from . import __version__
from .linalg import SparseMatrix, SpanSolver, image_rank, kernel_basis, vector_to_text
from .specfile import parse_spec, ParseError, UnresolvedName, DimensionMismatch
from .hopf import validate_hopf, validate_modular_pair, involution_flags
from .actions import (validate_module_algebra, validate_module_coalgebra,
                      validate_comodule_algebra, validate_sayd,
                      validate_coalgebra_action, validate_subhopf)
from .complexes import (build_coalgebra_complex, build_algebra_complex,
                        build_comodule_algebra_complex, build_hopf_complex,
                        check_cocyclic, complex_to_text, complex_from_text,
                        content_hash, IllDefined, ConjugationFailure)
from .cohomology import (hochschild_b, connes_B, compute_cohomology,
                         cyclic_cocycles, NotAComplex)
from .cup import (CoalgebraCupContext, CrossedCupContext, RelativeCupContext,
                  aw_cup, cup_explicit_coalgebra, cup_explicit_crossed,
                  shuffle_cup_traces, cotrace_cup, char_map, validate_trace,
                  ChainMapFailure, NotACocycle, MismatchWithAW)
from .shuffles import shuffle_set, dg_expand_oracle

CACHE_DIR = ".hopfcyclic-cache"


class Failure(Exception):
    pass


class Report:
    def __init__(self, input_text):
        self.lines = ["hopfcyclic %s" % __version__,
                      "input %s" % content_hash(input_text)]
        self.failed = False

    def section(self, title):
        self.lines.append("== %s" % title)

    def add(self, *lines):
        self.lines.extend(lines)

    def fail(self, line):
        self.failed = True
        self.lines.append(line)

    def text(self):
        return "\n".join(self.lines) + "\n"


def _load(path):
    try:
        with open(path) as f:
            return f.read()
    except OSError as e:
        raise Failure("cannot read %s: %s" % (path, e))


def _emit(report_text, out):
    if out:
        with open(out, "w") as f:
            f.write(report_text)
    sys.stdout.write(report_text)


# ---------------------------------------------------------------------------
# complex construction with the content-addressed cache

def _complex_key(spec_text, name, kind, args, N):
    return content_hash(spec_text + "::" + repr((name, kind, args, N, __version__)))


def build_declared_complex(spec, spec_text, name, N, no_cache=False, cache_dir=CACHE_DIR):
    kind, args = spec.complexes[name]
    key = _complex_key(spec_text, name, kind, args, N)
    path = os.path.join(cache_dir, key + ".cx")
    if not no_cache and os.path.exists(path):
        with open(path) as f:
            return complex_from_text(f.read()), "cached"
    sayd = spec.coefficients[args[-1]]
    if kind == "hopf":
        mp = spec.modular_pair(args[-1])
        cx = build_hopf_complex(mp, N).power
    elif kind == "coalgebra":
        cx = build_coalgebra_complex(spec.module_coalgebras[args[0]], sayd, N).complex
    elif kind == "algebra":
        cx = build_algebra_complex(spec.module_algebras[args[0]], sayd, N).complex
    else:
        cx = build_comodule_algebra_complex(spec.comodule_algebras[args[0]], sayd, N).complex
    if not no_cache:
        os.makedirs(cache_dir, exist_ok=True)
        with open(path, "w") as f:
            f.write(complex_to_text(cx, key))
    return cx, "built"


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(spec, spec_text, rep, flags):
    for cat, name in spec.order:
        if cat == "hopf":
            r = validate_hopf(spec.hopfs[name])
            rep.section("validate hopf %s" % name)
            rep.add(*r.lines())
            if not r.ok:
                rep.failed = True
        elif cat == "coefficients":
            mp = spec.modular_pair(name)
            r1 = validate_modular_pair(mp)
            r2 = validate_sayd(spec.coefficients[name])
            rep.section("validate coefficients %s" % name)
            rep.add(*r1.lines())
            rep.add("sayd: " + ("ok" if r2.ok else "; ".join(r2.lines())))
            lit, sq = involution_flags(mp)
            rep.add("involution identity literal=%s squared=%s (reported, not enforced)" % (lit, sq))
            if not (r1.ok and r2.ok):
                rep.failed = True
        elif cat == "sayd":
            r = validate_sayd(spec.sayds[name])
            rep.section("validate sayd %s" % name)
            rep.add(*r.lines())
            if not r.ok:
                rep.failed = True
        elif cat == "module_algebra":
            r = validate_module_algebra(spec.module_algebras[name])
            rep.section("validate module_algebra %s" % name)
            rep.add(*r.lines())
            if not r.ok:
                rep.failed = True
        elif cat == "module_coalgebra":
            r = validate_module_coalgebra(spec.module_coalgebras[name])
            rep.section("validate module_coalgebra %s" % name)
            rep.add(*r.lines())
            if not r.ok:
                rep.failed = True
        elif cat == "comodule_algebra":
            r = validate_comodule_algebra(spec.comodule_algebras[name])
            rep.section("validate comodule_algebra %s" % name)
            rep.add(*r.lines())
            if not r.ok:
                rep.failed = True
        elif cat == "action":
            r = validate_coalgebra_action(spec.actions[name])
            rep.section("validate action %s" % name)
            rep.add(*r.lines())
            if not r.ok:
                rep.failed = True
        elif cat == "subhopf":
            r = validate_subhopf(spec.subhopfs[name])
            rep.section("validate subhopf %s" % name)
            rep.add(*r.lines())
            if not r.ok:
                rep.failed = True
        elif cat == "trace":
            # a trace targets one coefficient pair; report per-pair invariance
            # and fail only when no declared pair accepts it
            sname, tr = spec.traces[name]
            rep.section("validate trace %s" % name)
            if sname in spec.module_algebras:
                ma = spec.module_algebras[sname]
                outcomes = []
                for cname in sorted(spec.coefficients):
                    if cname in spec._pairs and spec._pairs[cname].hopf is ma.hopf:
                        bad = validate_trace(spec._pairs[cname], ma, tr)
                        outcomes.append(not bad)
                        rep.add("against %s: %s" % (cname, "invariant" if not bad
                                                    else "not invariant (%d instances)" % len(bad)))
                if outcomes and not any(outcomes):
                    rep.fail("trace is invariant for no declared coefficient pair")
                if not outcomes:
                    rep.add("no coefficient pair on the same symmetry; skipped")
            else:
                rep.add("no module algebra on %s; skipped" % sname)


def cmd_identities(spec, spec_text, rep, flags):
    for name in spec.complexes:
        rep.section("identities %s" % name)
        try:
            cx, _ = build_declared_complex(spec, spec_text, name, flags.max_degree,
                                           no_cache=flags.no_cache)
        except (IllDefined, ConjugationFailure, ValueError) as e:
            rep.fail("build failed: %s" % e)
            continue
        rep.add("dims %s" % " ".join(str(d) for d in cx.dims()))
        bad = check_cocyclic(cx)
        if bad:
            for v in bad:
                rep.fail("violated %s at degree %d indices %s" % (v.family, v.degree, v.indices))
        else:
            rep.add("cocyclic identities: ok")
        try:
            hochschild_b(cx)
            _, variant = connes_B(cx)
            rep.add("coboundary certificates: ok (boundary reading: %s)" % variant)
        except NotAComplex as e:
            rep.fail("coboundary certificates FAILED: %s" % e)


def cmd_cohomology(spec, spec_text, rep, flags):
    for name in spec.complexes:
        rep.section("cohomology %s" % name)
        try:
            cx, _ = build_declared_complex(spec, spec_text, name, flags.max_degree,
                                           no_cache=flags.no_cache)
            r = compute_cohomology(cx)
        except (IllDefined, ConjugationFailure, NotAComplex, ValueError) as e:
            rep.fail("failed: %s" % e)
            continue
        rep.add(*r.lines())


def _contexts_for(spec, kind, N):
    out = []
    for name, (k, args) in spec.contexts.items():
        if k != kind:
            continue
        sayd = spec.coefficients[args[-1]]
        if k == "coalgebra":
            ctx = CoalgebraCupContext(spec.actions[args[0]], sayd, N=N)
        elif k == "crossed":
            ctx = CrossedCupContext(spec.module_algebras[args[0]],
                                    spec.comodule_algebras[args[1]], sayd, N=N)
        else:
            ctx = RelativeCupContext(spec.module_algebras[args[0]],
                                     spec.subhopfs[args[1]], sayd, N=N)
        out.append((name, ctx))
    return out


def _report_cup_result(rep, label, res, extra=""):
    cls = "b-closed=%s cyclic=%s" % (res.b_closed, res.cyclic)
    rep.add("%s: %s%s" % (label, cls, extra))
    rep.add("  cochain: %s" % vector_to_text(res.vector))
    if not res.b_closed:
        rep.failed = True


def _class_info(tgt_cx, n, vec):
    if n == 0:
        return "b-nontrivial" if vec else "zero"
    bs = hochschild_b(tgt_cx)
    sol = SpanSolver()
    for col in bs[n - 1].columns():
        sol.add(col)
    red = sol.reduce(vec)
    return "b-coboundary" if red == {} else "b-nontrivial"


def cmd_cup(spec, spec_text, rep, flags):
    p, q = flags.p, flags.q
    N = max(p + q, 2)
    if flags.kind in ("coalgebra", "crossed", "relative"):
        pairs_kinds = [flags.kind]
    else:
        pairs_kinds = ["crossed", "coalgebra"]   # trace-formula kinds
    any_ctx = False
    for kind in pairs_kinds:
        for name, ctx in _contexts_for(spec, kind, N):
            any_ctx = True
            rep.section("cup %s kind=%s p=%d q=%d" % (name, flags.kind, p, q))
            try:
                phis = cyclic_cocycles(ctx.phi_complex().complex, p)
                xs = cyclic_cocycles(ctx.x_complex(), q)
            except Exception as e:
                rep.fail("cocycle search failed: %s" % e)
                continue
            if not phis or not xs:
                rep.add("no cyclic cocycle pair at (p,q)=(%d,%d); counts %d,%d"
                        % (p, q, len(phis), len(xs)))
                continue
            tgt = ctx.target().complex
            for i, phi in enumerate(phis):
                for j, x in enumerate(xs):
                    try:
                        if flags.kind == "traces":
                            if kind == "crossed":
                                res = shuffle_cup_traces(ctx, phi, p, x, q)
                            else:
                                res = cotrace_cup(ctx, x, q, phi, p)
                            _report_cup_result(rep, "pair (%d,%d) shuffle" % (i, j), res,
                                               " class=" + _class_info(tgt, res.degree, res.vector))
                        else:
                            res = aw_cup(ctx, phi, p, x, q)
                            extra = " class=" + _class_info(tgt, res.degree, res.vector)
                            if kind == "coalgebra":
                                try:
                                    cup_explicit_coalgebra(ctx, phi, p, x, q)
                                    extra += " explicit-match=True"
                                except MismatchWithAW:
                                    extra += " explicit-match=False"
                                    rep.failed = True
                            elif kind == "crossed":
                                _, _, match = cup_explicit_crossed(ctx, phi, p, x, q)
                                extra += " closed-formula-match=%s" % match
                            _report_cup_result(rep, "pair (%d,%d)" % (i, j), res, extra)
                    except (NotACocycle, ChainMapFailure) as e:
                        rep.fail("pair (%d,%d) failed: %s" % (i, j, e))
    if not any_ctx:
        rep.section("cup")
        rep.add("no matching context declared")


def cmd_fixtures(rep, flags):
    from .fixtures import fixture_file_texts
    outdir = flags.out or "fixtures"
    os.makedirs(outdir, exist_ok=True)
    rep.section("fixtures")
    for name, text in sorted(fixture_file_texts().items()):
        path = os.path.join(outdir, name)
        with open(path, "w") as f:
            f.write(text)
        rep.add("wrote %s (%d bytes)" % (name, len(text)))
    return rep


def cmd_audit(spec, spec_text, rep, flags):
    cmd_validate(spec, spec_text, rep, flags)
    cmd_identities(spec, spec_text, rep, flags)
    cmd_cohomology(spec, spec_text, rep, flags)
    # context certificates and a small cup sweep
    for kind in ("coalgebra", "crossed", "relative"):
        for name, ctx in _contexts_for(spec, kind, 2):
            rep.section("audit context %s (%s)" % (name, kind))
            try:
                ctx.pairing()
                rep.add("chain-map certificate: ok")
            except ChainMapFailure as e:
                rep.fail("chain-map certificate FAILED: %s" % e)
                continue
            bad = check_cocyclic(ctx.diag)
            if bad:
                for v in bad:
                    rep.fail("diagonal violated %s at degree %d %s" % (v.family, v.degree, v.indices))
            else:
                rep.add("diagonal cocyclic identities: ok")
            for p in range(3):
                for q in range(3 - p):
                    phis = cyclic_cocycles(ctx.phi_complex().complex, p)
                    xs = cyclic_cocycles(ctx.x_complex(), q)
                    for i, phi in enumerate(phis):
                        for j, x in enumerate(xs):
                            res = aw_cup(ctx, phi, p, x, q)
                            status = "ok" if res.b_closed else "NOT CLOSED"
                            if not res.b_closed:
                                rep.failed = True
                            rep.add("cup p=%d q=%d pair(%d,%d): %s cyclic=%s"
                                    % (p, q, i, j, status, res.cyclic))
    # characteristic-map certificates for declared invariant traces
    for tname, (sname, tr) in sorted(spec.traces.items()):
        if sname not in spec.module_algebras:
            continue
        ma = spec.module_algebras[sname]
        for cname in sorted(spec.coefficients):
            if cname in spec._pairs and spec._pairs[cname].hopf is ma.hopf:
                mp = spec._pairs[cname]
                if validate_trace(mp, ma, tr):
                    continue
                rep.section("audit characteristic map %s against %s" % (tname, cname))
                try:
                    char_map(mp, ma, tr, N=2)
                    rep.add("cocyclic-map certificate: ok")
                except ChainMapFailure as e:
                    rep.fail("cocyclic-map certificate FAILED: %s" % e)
    rep.section("audit shuffle sets")
    for total in range(7):
        counts = [len(shuffle_set(qq, total - qq)) for qq in range(total + 1)]
        rep.add("|Sh(q,%d-q)| = %s" % (total, counts))
    rep.section("audit expansion oracle")
    for pp in range(4):
        for qq in range(4 - pp):
            ok, diff = dg_expand_oracle(pp, qq)
            if ok:
                rep.add("(p,q)=(%d,%d): match" % (pp, qq))
            else:
                rep.fail("(p,q)=(%d,%d): MISMATCH %r" % (pp, qq, diff))
    rep.section("audit exact kernel self-check seed=%d" % flags.seed)
    rng = random.Random(flags.seed)
    for t in range(5):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        ent = {}
        for i in range(rows):
            for j in range(cols):
                if rng.random() < 0.5:
                    v = rng.randint(-4, 4)
                    if v:
                        ent[(i, j)] = v
        m = SparseMatrix(rows, cols, ent)
        ok = image_rank(m) + len(kernel_basis(m)) == cols
        rep.add("trial %d: rank+nullity == cols: %s" % (t, ok))
        if not ok:
            rep.failed = True


def main(argv=None):
    parser = argparse.ArgumentParser(prog="hopfcyclic",
                                     description="exact Hopf-cyclic cohomology engine")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_file=True):
        if needs_file:
            p.add_argument("file", help="structure-constant input file")
        p.add_argument("--max-degree", type=int, default=5)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--no-cache", action="store_true")
        p.add_argument("--format", choices=["text"], default="text")
        p.add_argument("--out", default=None)

    common(sub.add_parser("validate", help="run every axiom validator"))
    common(sub.add_parser("identities", help="cocyclic identities and coboundary certificates"))
    common(sub.add_parser("cohomology", help="dimension tables"))
    pc = sub.add_parser("cup", help="cup products on declared contexts")
    common(pc)
    pc.add_argument("--kind", choices=["coalgebra", "crossed", "relative", "traces"],
                    required=True)
    pc.add_argument("--p", type=int, required=True)
    pc.add_argument("--q", type=int, required=True)
    common(sub.add_parser("fixtures", help="write the shipped fixture files"), needs_file=False)
    common(sub.add_parser("audit", help="every certificate in one run"))

    flags = parser.parse_args(argv)

    if flags.command == "fixtures":
        rep = Report("fixtures")
        cmd_fixtures(rep, flags)
        _emit(rep.text(), None)
        return 0

    try:
        spec_text_raw = _load(flags.file)
        spec = parse_spec(spec_text_raw)
    except (ParseError, UnresolvedName, DimensionMismatch, Failure) as e:
        sys.stderr.write("input error: %s\n" % e)
        return 2

    rep = run(spec, flags.command, flags)
    _emit(rep.text(), flags.out)
    return 1 if rep.failed else 0


def run(spec, command, flags):
    """Dispatch one subcommand over a parsed input; returns the Report."""
    spec_text = spec.to_text()
    rep = Report(spec_text)
    handlers = {"validate": cmd_validate, "identities": cmd_identities,
                "cohomology": cmd_cohomology, "cup": cmd_cup, "audit": cmd_audit}
    try:
        handlers[command](spec, spec_text, rep, flags)
    except (ChainMapFailure, NotAComplex, IllDefined, ConjugationFailure) as e:
        rep.fail("fatal certificate failure: %s" % e)
    return rep


if __name__ == "__main__":
    sys.exit(main())
