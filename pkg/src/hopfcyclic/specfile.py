"""Plain-text structure-constant format.

One structure constant per line inside keyword blocks; comments with '#'.
Vectors are written  c*label [+ c*label ...]  (or 0), tensor-pair terms as
c*label|label, scalars as integers or fractions p/q.

    space H = e g
    algebra H
      unit = 1*e
      mul e e = 1*e
    coalgebra H
      counit e = 1
      comul e = 1*e|e
    hopf H
      antipode e = 1*e
    character delta on H = 1 -1
    grouplike sigma in H = 1*e
    coefficients M = mpi(delta, sigma)
    module_algebra A over H
      act g p0 = 1*p1
    action ca : H on A
      cact g p0 = 1*p1
    subhopf K of H = 1*e ; 1*g2
    trace tr on A = 1 1
    complex main = hopf(H, M)
    context cup1 = coalgebra(ca, M)

parse_spec returns a SpecFile whose canonical to_text() round-trips.
"""

from __future__ import annotations

from .linalg import parse_scalar, format_scalar, scal
from .spaces import BasedSpace, StructureTensor, tensor_space
from .hopf import AlgebraData, CoalgebraData, HopfData, ModularPair
from .actions import (ModuleAlgebra, ModuleCoalgebra, ComoduleAlgebra, SAYDModule,
                      CoalgebraAction, SubHopf, mpi_coefficients)


class ParseError(Exception):
    def __init__(self, msg, line_no=None):
        super().__init__("line %s: %s" % (line_no, msg) if line_no else msg)
        self.line_no = line_no


class UnresolvedName(Exception):
    def __init__(self, msg, line_no=None):
        super().__init__("line %s: %s" % (line_no, msg) if line_no else msg)
        self.line_no = line_no


class DimensionMismatch(Exception):
    def __init__(self, msg, line_no=None):
        super().__init__("line %s: %s" % (line_no, msg) if line_no else msg)
        self.line_no = line_no


class SpecFile:
    """Parsed declarations, resolution results and canonical serialization."""

    def __init__(self):
        self.spaces = {}            # name -> BasedSpace
        self.algebras = {}          # space name -> AlgebraData
        self.coalgebras = {}        # space name -> CoalgebraData
        self.hopfs = {}             # name -> HopfData
        self.characters = {}        # name -> (hopf name, dict)
        self.grouplikes = {}        # name -> (hopf name, dict)
        self.coefficients = {}      # name -> ("mpi", char, grp) or SAYDModule
        self.sayds = {}             # name -> SAYDModule
        self.module_algebras = {}   # space name -> ModuleAlgebra
        self.module_coalgebras = {}
        self.comodule_algebras = {}
        self.actions = {}           # name -> CoalgebraAction
        self.subhopfs = {}          # name -> SubHopf
        self.traces = {}            # name -> (space name, dict)
        self.complexes = {}         # name -> (kind, args tuple)
        self.contexts = {}          # name -> (kind, args tuple)
        self.order = []             # declaration order of (category, name)

    def sayd(self, name):
        entry = self.coefficients.get(name)
        if entry is None:
            raise UnresolvedName("unknown coefficients %r" % name)
        return entry

    def modular_pair(self, name):
        return self._pairs[name]

    def to_text(self):
        out = []
        seen_blocks = set()
        for cat, name in self.order:
            if (cat, name) in seen_blocks:
                continue
            seen_blocks.add((cat, name))
            out.extend(self._emit(cat, name))
        return "\n".join(out) + "\n"

    def _emit(self, cat, name):
        L = []
        if cat == "space":
            s = self.spaces[name]
            L.append("space %s = %s" % (name, " ".join(s.labels)))
        elif cat == "algebra":
            a = self.algebras[name]
            s = a.space
            L.append("algebra %s" % name)
            L.append("  unit = %s" % _fmt_vec(a.unit, s))
            for (i, j) in sorted(a.mul.entries):
                L.append("  mul %s %s = %s" % (s.labels[i], s.labels[j],
                                               _fmt_vec(a.mul.entries[(i, j)], s)))
        elif cat == "coalgebra":
            c = self.coalgebras[name]
            s = c.space
            L.append("coalgebra %s" % name)
            for i in sorted(c.counit):
                L.append("  counit %s = %s" % (s.labels[i], format_scalar(c.counit[i])))
            for (i,) in sorted(c.comul.entries):
                L.append("  comul %s = %s" % (s.labels[i], _fmt_pvec(c.comul.entries[(i,)], s, s)))
        elif cat == "hopf":
            h = self.hopfs[name]
            s = h.space
            L.append("hopf %s" % name)
            for i in range(s.dim):
                L.append("  antipode %s = %s" % (s.labels[i], _fmt_vec(h.antipode.column(i), s)))
        elif cat == "character":
            hname, vals = self.characters[name]
            s = self.hopfs[hname].space
            L.append("character %s on %s = %s" % (name, hname,
                     " ".join(format_scalar(vals.get(i, 0)) for i in range(s.dim))))
        elif cat == "grouplike":
            hname, vec = self.grouplikes[name]
            s = self.hopfs[hname].space
            L.append("grouplike %s in %s = %s" % (name, hname, _fmt_vec(vec, s)))
        elif cat == "coefficients":
            kind, c, g = self._coef_decl[name]
            L.append("coefficients %s = mpi(%s, %s)" % (name, c, g))
        elif cat == "sayd":
            m = self.sayds[name]
            hname = self._sayd_decl[name][0]
            sname = self._sayd_decl[name][1]
            ms = m.space
            hs = m.hopf.space
            L.append("sayd %s over %s space %s" % (name, hname, sname))
            for (i, j) in sorted(m.raction.entries):
                L.append("  ract %s %s = %s" % (ms.labels[i], hs.labels[j],
                                                _fmt_vec(m.raction.entries[(i, j)], ms)))
            for (i,) in sorted(m.lcoaction.entries):
                L.append("  lcoact %s = %s" % (ms.labels[i],
                                               _fmt_pvec(m.lcoaction.entries[(i,)], hs, ms)))
        elif cat == "module_algebra":
            ma = self.module_algebras[name]
            hname = self._mod_decl[("module_algebra", name)]
            L.append("module_algebra %s over %s" % (name, hname))
            L.extend(_emit_action_lines("act", ma.action, ma.hopf.space, ma.space))
        elif cat == "module_coalgebra":
            mc = self.module_coalgebras[name]
            hname = self._mod_decl[("module_coalgebra", name)]
            L.append("module_coalgebra %s over %s" % (name, hname))
            L.extend(_emit_action_lines("act", mc.action, mc.hopf.space, mc.space))
        elif cat == "comodule_algebra":
            ba = self.comodule_algebras[name]
            hname = self._mod_decl[("comodule_algebra", name)]
            s = ba.space
            L.append("comodule_algebra %s over %s" % (name, hname))
            for (i,) in sorted(ba.coaction.entries):
                L.append("  coact %s = %s" % (s.labels[i],
                                              _fmt_pvec(ba.coaction.entries[(i,)], ba.hopf.space, s)))
        elif cat == "action":
            ca = self.actions[name]
            cs, as_ = ca.mc.space, ca.ma.space
            cname, aname = self._action_decl[name]
            L.append("action %s : %s on %s" % (name, cname, aname))
            L.extend(_emit_action_lines("cact", ca.action, cs, as_))
        elif cat == "subhopf":
            k = self.subhopfs[name]
            hname = self._subhopf_decl[name]
            s = k.hopf.space
            L.append("subhopf %s of %s = %s" % (name, hname,
                     " ; ".join(_fmt_vec(v, s) for v in k.spanning)))
        elif cat == "trace":
            sname, vals = self.traces[name]
            s = self.spaces[sname]
            L.append("trace %s on %s = %s" % (name, sname,
                     " ".join(format_scalar(vals.get(i, 0)) for i in range(s.dim))))
        elif cat == "complex":
            kind, args = self.complexes[name]
            L.append("complex %s = %s(%s)" % (name, kind, ", ".join(args)))
        elif cat == "context":
            kind, args = self.contexts[name]
            L.append("context %s = %s(%s)" % (name, kind, ", ".join(args)))
        return L


def _emit_action_lines(keyword, tensor, s1, s2):
    L = []
    for (i, j) in sorted(tensor.entries):
        L.append("  %s %s %s = %s" % (keyword, s1.labels[i], s2.labels[j],
                                      _fmt_vec(tensor.entries[(i, j)], tensor.codomain)))
    return L


def _fmt_vec(vec, space):
    if not vec:
        return "0"
    return " + ".join("%s*%s" % (format_scalar(x), space.labels[i])
                      for i, x in sorted(vec.items()))


def _fmt_pvec(vec, s1, s2):
    if not vec:
        return "0"
    d2 = s2.dim
    terms = []
    for f, x in sorted(vec.items()):
        i, j = divmod(f, d2)
        terms.append("%s*%s|%s" % (format_scalar(x), s1.labels[i], s2.labels[j]))
    return " + ".join(terms)


def _parse_vec(text, space, line_no):
    text = text.strip()
    if text == "0":
        return {}
    out = {}
    for term in text.split("+"):
        term = term.strip()
        if "*" not in term:
            raise ParseError("expected coef*label, got %r" % term, line_no)
        coef, label = term.split("*", 1)
        label = label.strip()
        try:
            idx = space.labels.index(label)
        except ValueError:
            raise UnresolvedName("unknown basis label %r" % label, line_no)
        try:
            c = parse_scalar(coef)
        except Exception:
            raise ParseError("bad scalar %r" % coef, line_no)
        if c:
            out[idx] = scal(out.get(idx, 0) + c)
    return out


def _parse_pvec(text, s1, s2, line_no):
    text = text.strip()
    if text == "0":
        return {}
    out = {}
    d2 = s2.dim
    for term in text.split("+"):
        term = term.strip()
        if "*" not in term or "|" not in term:
            raise ParseError("expected coef*label|label, got %r" % term, line_no)
        coef, pair = term.split("*", 1)
        l1, l2 = pair.split("|", 1)
        l1, l2 = l1.strip(), l2.strip()
        try:
            i = s1.labels.index(l1)
        except ValueError:
            raise UnresolvedName("unknown basis label %r" % l1, line_no)
        try:
            j = s2.labels.index(l2)
        except ValueError:
            raise UnresolvedName("unknown basis label %r" % l2, line_no)
        c = parse_scalar(coef)
        if c:
            f = i * d2 + j
            out[f] = scal(out.get(f, 0) + c)
    return out


def parse_spec(text) -> SpecFile:
    spec = SpecFile()
    spec._pairs = {}
    spec._coef_decl = {}
    spec._sayd_decl = {}
    spec._mod_decl = {}
    spec._action_decl = {}
    spec._subhopf_decl = {}
    # raw block collection first, then resolution in declaration order
    block = None                # (kind, header fields, line_no, lines)
    blocks = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indented = line[0] in " \t"
        line = line.strip()
        head = line.split()[0]
        if head in ("unit", "mul", "counit", "comul", "antipode", "act", "coact",
                    "cact", "ract", "lcoact") or (indented and block is not None):
            if block is None:
                raise ParseError("structure line outside any block", ln)
            block[3].append((ln, line))
            continue
        block = (head, line, ln, [])
        blocks.append(block)
    for head, header, ln, lines in blocks:
        _resolve_block(spec, head, header, ln, lines)
    return spec


def _resolve_block(spec, head, header, ln, lines):
    toks = header.replace("=", " = ").replace(":", " : ").split()
    if head == "space":
        # space NAME = l1 l2 ...
        if len(toks) < 4 or toks[2] != "=":
            raise ParseError("space NAME = labels...", ln)
        name = toks[1]
        labels = toks[3:]
        if len(set(labels)) != len(labels):
            raise ParseError("duplicate basis labels", ln)
        spec.spaces[name] = BasedSpace(tuple(labels))
        spec.order.append(("space", name))
    elif head == "algebra":
        name = toks[1]
        s = _space(spec, name, ln)
        unit = {}
        ent = {}
        for l_no, line in lines:
            parts = line.split("=", 1)
            lhs = parts[0].split()
            if lhs[0] == "unit":
                unit = _parse_vec(parts[1], s, l_no)
            elif lhs[0] == "mul":
                if len(lhs) != 3:
                    raise ParseError("mul L1 L2 = vec", l_no)
                i, j = _label(s, lhs[1], l_no), _label(s, lhs[2], l_no)
                ent[(i, j)] = _parse_vec(parts[1], s, l_no)
            else:
                raise ParseError("unexpected %r in algebra block" % lhs[0], l_no)
        spec.algebras[name] = AlgebraData(s, StructureTensor((s, s), s, ent), unit)
        spec.order.append(("algebra", name))
    elif head == "coalgebra":
        name = toks[1]
        s = _space(spec, name, ln)
        counit = {}
        ent = {}
        for l_no, line in lines:
            parts = line.split("=", 1)
            lhs = parts[0].split()
            if lhs[0] == "counit":
                counit[_label(s, lhs[1], l_no)] = parse_scalar(parts[1])
            elif lhs[0] == "comul":
                ent[(_label(s, lhs[1], l_no),)] = _parse_pvec(parts[1], s, s, l_no)
            else:
                raise ParseError("unexpected %r in coalgebra block" % lhs[0], l_no)
        spec.coalgebras[name] = CoalgebraData(
            s, StructureTensor((s,), tensor_space(s, s), ent), counit)
        spec.order.append(("coalgebra", name))
    elif head == "hopf":
        name = toks[1]
        s = _space(spec, name, ln)
        if name not in spec.algebras or name not in spec.coalgebras:
            raise UnresolvedName("hopf %r needs algebra and coalgebra blocks first" % name, ln)
        from .linalg import SparseMatrix
        ent = {}
        for l_no, line in lines:
            parts = line.split("=", 1)
            lhs = parts[0].split()
            if lhs[0] != "antipode":
                raise ParseError("unexpected %r in hopf block" % lhs[0], l_no)
            j = _label(s, lhs[1], l_no)
            for i, x in _parse_vec(parts[1], s, l_no).items():
                ent[(i, j)] = x
        S = SparseMatrix(s.dim, s.dim, ent)
        spec.hopfs[name] = HopfData(spec.algebras[name], spec.coalgebras[name], S)
        spec.order.append(("hopf", name))
    elif head == "character":
        # character NAME on HOPF = s1 ... sd
        name, hname = toks[1], toks[3]
        h = _hopf(spec, hname, ln)
        vals = toks[5:]
        if len(vals) != h.dim:
            raise DimensionMismatch("character needs %d values" % h.dim, ln)
        spec.characters[name] = (hname, {i: parse_scalar(v) for i, v in enumerate(vals)
                                         if parse_scalar(v)})
        spec.order.append(("character", name))
    elif head == "grouplike":
        name, hname = toks[1], toks[3]
        h = _hopf(spec, hname, ln)
        vec = _parse_vec(header.split("=", 1)[1], h.space, ln)
        spec.grouplikes[name] = (hname, vec)
        spec.order.append(("grouplike", name))
    elif head == "coefficients":
        # coefficients NAME = mpi(CHAR, GRP)
        name = toks[1]
        rest = header.split("=", 1)[1].strip()
        if not (rest.startswith("mpi(") and rest.endswith(")")):
            raise ParseError("coefficients NAME = mpi(character, grouplike)", ln)
        cname, gname = [t.strip() for t in rest[4:-1].split(",")]
        if cname not in spec.characters:
            raise UnresolvedName("unknown character %r" % cname, ln)
        if gname not in spec.grouplikes:
            raise UnresolvedName("unknown grouplike %r" % gname, ln)
        hname, delta = spec.characters[cname]
        hname2, sigma = spec.grouplikes[gname]
        if hname != hname2:
            raise UnresolvedName("character and grouplike live on different Hopf algebras", ln)
        mp = ModularPair(spec.hopfs[hname], delta, sigma)
        spec._pairs[name] = mp
        spec.coefficients[name] = mpi_coefficients(mp)
        spec._coef_decl[name] = ("mpi", cname, gname)
        spec.order.append(("coefficients", name))
    elif head == "sayd":
        # sayd NAME over HOPF space SPACE
        name, hname, sname = toks[1], toks[3], toks[5]
        h = _hopf(spec, hname, ln)
        s = _space(spec, sname, ln)
        ract, lco = {}, {}
        for l_no, line in lines:
            parts = line.split("=", 1)
            lhs = parts[0].split()
            if lhs[0] == "ract":
                i, j = _label(s, lhs[1], l_no), _label(h.space, lhs[2], l_no)
                ract[(i, j)] = _parse_vec(parts[1], s, l_no)
            elif lhs[0] == "lcoact":
                lco[(_label(s, lhs[1], l_no),)] = _parse_pvec(parts[1], h.space, s, l_no)
            else:
                raise ParseError("unexpected %r in sayd block" % lhs[0], l_no)
        m = SAYDModule(h, s,
                       StructureTensor((s, h.space), s, ract),
                       StructureTensor((s,), tensor_space(h.space, s), lco))
        spec.sayds[name] = m
        spec.coefficients[name] = m
        spec._sayd_decl[name] = (hname, sname)
        spec.order.append(("sayd", name))
    elif head in ("module_algebra", "module_coalgebra"):
        name, hname = toks[1], toks[3]
        h = _hopf(spec, hname, ln)
        s = _space(spec, name, ln)
        ent = {}
        for l_no, line in lines:
            parts = line.split("=", 1)
            lhs = parts[0].split()
            if lhs[0] != "act":
                raise ParseError("expected act lines", l_no)
            i, j = _label(h.space, lhs[1], l_no), _label(s, lhs[2], l_no)
            ent[(i, j)] = _parse_vec(parts[1], s, l_no)
        action = StructureTensor((h.space, s), s, ent)
        if head == "module_algebra":
            if name not in spec.algebras:
                raise UnresolvedName("module_algebra %r needs its algebra block" % name, ln)
            spec.module_algebras[name] = ModuleAlgebra(h, spec.algebras[name], action)
        else:
            if name not in spec.coalgebras:
                raise UnresolvedName("module_coalgebra %r needs its coalgebra block" % name, ln)
            spec.module_coalgebras[name] = ModuleCoalgebra(h, spec.coalgebras[name], action)
        spec._mod_decl[(head, name)] = hname
        spec.order.append((head, name))
    elif head == "comodule_algebra":
        name, hname = toks[1], toks[3]
        h = _hopf(spec, hname, ln)
        s = _space(spec, name, ln)
        if name not in spec.algebras:
            raise UnresolvedName("comodule_algebra %r needs its algebra block" % name, ln)
        ent = {}
        for l_no, line in lines:
            parts = line.split("=", 1)
            lhs = parts[0].split()
            if lhs[0] != "coact":
                raise ParseError("expected coact lines", l_no)
            ent[(_label(s, lhs[1], l_no),)] = _parse_pvec(parts[1], h.space, s, l_no)
        spec.comodule_algebras[name] = ComoduleAlgebra(
            h, spec.algebras[name], StructureTensor((s,), tensor_space(h.space, s), ent))
        spec._mod_decl[(head, name)] = hname
        spec.order.append((head, name))
    elif head == "action":
        # action NAME : C on A
        name, cname, aname = toks[1], toks[3], toks[5]
        if cname not in spec.module_coalgebras:
            raise UnresolvedName("unknown module coalgebra %r" % cname, ln)
        if aname not in spec.module_algebras:
            raise UnresolvedName("unknown module algebra %r" % aname, ln)
        mc = spec.module_coalgebras[cname]
        ma = spec.module_algebras[aname]
        ent = {}
        for l_no, line in lines:
            parts = line.split("=", 1)
            lhs = parts[0].split()
            if lhs[0] != "cact":
                raise ParseError("expected cact lines", l_no)
            i, j = _label(mc.space, lhs[1], l_no), _label(ma.space, lhs[2], l_no)
            ent[(i, j)] = _parse_vec(parts[1], ma.space, l_no)
        spec.actions[name] = CoalgebraAction(
            mc, ma, StructureTensor((mc.space, ma.space), ma.space, ent))
        spec._action_decl[name] = (cname, aname)
        spec.order.append(("action", name))
    elif head == "subhopf":
        name, hname = toks[1], toks[3]
        h = _hopf(spec, hname, ln)
        vecs = [_parse_vec(v, h.space, ln)
                for v in header.split("=", 1)[1].split(";")]
        spec.subhopfs[name] = SubHopf(h, vecs)
        spec._subhopf_decl[name] = hname
        spec.order.append(("subhopf", name))
    elif head == "trace":
        name, sname = toks[1], toks[3]
        s = _space(spec, sname, ln)
        vals = header.split("=", 1)[1].split()
        if len(vals) != s.dim:
            raise DimensionMismatch("trace needs %d values" % s.dim, ln)
        spec.traces[name] = (sname, {i: parse_scalar(v) for i, v in enumerate(vals)
                                     if parse_scalar(v)})
        spec.order.append(("trace", name))
    elif head in ("complex", "context"):
        name = toks[1]
        rest = header.split("=", 1)[1].strip()
        kind, args = _parse_call(rest, ln)
        _check_refs(spec, head, kind, args, ln)
        if head == "complex":
            spec.complexes[name] = (kind, args)
        else:
            spec.contexts[name] = (kind, args)
        spec.order.append((head, name))
    else:
        raise ParseError("unknown declaration %r" % head, ln)


def _parse_call(text, ln):
    if "(" not in text or not text.endswith(")"):
        raise ParseError("expected kind(arg, ...)", ln)
    kind, inner = text[:-1].split("(", 1)
    args = tuple(a.strip() for a in inner.split(",")) if inner.strip() else ()
    return kind.strip(), args


def _check_refs(spec, head, kind, args, ln):
    ok_kinds = {"complex": {"hopf": 2, "coalgebra": 2, "algebra": 2, "comodule": 2},
                "context": {"coalgebra": 2, "crossed": 3, "relative": 3}}
    if kind not in ok_kinds[head]:
        raise ParseError("unknown %s kind %r" % (head, kind), ln)
    if len(args) != ok_kinds[head][kind]:
        raise ParseError("%s(%s) takes %d arguments" % (kind, ",".join(args), ok_kinds[head][kind]), ln)
    coef = args[-1]
    if coef not in spec.coefficients:
        raise UnresolvedName("unknown coefficients %r" % coef, ln)
    first = args[0]
    if head == "complex":
        pools = {"hopf": spec.hopfs, "coalgebra": spec.module_coalgebras,
                 "algebra": spec.module_algebras, "comodule": spec.comodule_algebras}
        if first not in pools[kind]:
            raise UnresolvedName("unknown %s entity %r" % (kind, first), ln)
    else:
        if kind == "coalgebra":
            if first not in spec.actions:
                raise UnresolvedName("unknown action %r" % first, ln)
        elif kind == "crossed":
            if first not in spec.module_algebras:
                raise UnresolvedName("unknown module algebra %r" % first, ln)
            if args[1] not in spec.comodule_algebras:
                raise UnresolvedName("unknown comodule algebra %r" % args[1], ln)
        elif kind == "relative":
            if first not in spec.module_algebras:
                raise UnresolvedName("unknown module algebra %r" % first, ln)
            if args[1] not in spec.subhopfs:
                raise UnresolvedName("unknown subhopf %r" % args[1], ln)


def _space(spec, name, ln):
    if name not in spec.spaces:
        raise UnresolvedName("unknown space %r" % name, ln)
    return spec.spaces[name]


def _hopf(spec, name, ln):
    if name not in spec.hopfs:
        raise UnresolvedName("unknown hopf algebra %r" % name, ln)
    return spec.hopfs[name]


def _label(space, label, ln):
    try:
        return space.labels.index(label)
    except ValueError:
        raise UnresolvedName("unknown basis label %r" % label, ln)
