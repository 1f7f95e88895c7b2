"""LF checking of ORBI signatures at levels 0 and 1.

Syntax-section families define object syntax (level 0), Judgments-section
families are judgments indexed by level-0 terms (level 1), and Rules-section
constants must target a judgment.  Definitional equality is beta only; rule
declarations get their schematic variables bound by an outermost Pi-prefix
inferred from Miller-pattern occurrences.
"""

from __future__ import annotations

from dataclasses import dataclass

from orbi_forge.errors import (
    DuplicateNameError,
    KindError,
    LevelError,
    LfTypeError,
    OrbiError,
    ReconstructionError,
    UnboundVariableError,
)
from orbi_forge.pretty import tp_str
from orbi_forge.syntax import (
    App,
    Arrow,
    AtomApp,
    Const,
    ConstDecl,
    FamDecl,
    KArrow,
    Kind,
    KPi,
    Lam,
    OrbiSpec,
    Pi,
    Term,
    Tp,
    TYPE_ATOM,
    Type,
    Var,
    shift_tp,
    spine,
    subst,
    subst_kind,
    subst_tp,
    tp_alpha_equal,
    tp_closed,
)


@dataclass(frozen=True)
class SigEntry:
    decl: object
    level: int | None
    section: str
    implicit: tuple[str, ...] = ()  # reconstructed prefix, first-occurrence order


class Signature:
    """Ordered map from declared names to checked entries."""

    def __init__(self):
        self.entries: dict[str, SigEntry] = {}

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, name: str) -> SigEntry | None:
        return self.entries.get(name)

    def add(self, entry: SigEntry) -> None:
        self.entries[entry.decl.name] = entry

    def level(self, name: str):
        e = self.entries.get(name)
        return e.level if e else None

    def is_family(self, name: str) -> bool:
        e = self.entries.get(name)
        return e is not None and isinstance(e.decl, FamDecl)

    def family_kind(self, name: str) -> Kind:
        return self.entries[name].decl.kind

    def families(self, level: int | None = None):
        return tuple(
            e.decl.name
            for e in self.entries.values()
            if isinstance(e.decl, FamDecl) and (level is None or e.level == level)
        )

    def rules(self):
        return tuple(e for e in self.entries.values() if e.section == "Rules")

    def constructors_of(self, fam: str):
        out = []
        for e in self.entries.values():
            if isinstance(e.decl, ConstDecl) and target_family(e.decl.tp) == fam:
                out.append(e.decl)
        return tuple(out)


@dataclass(frozen=True)
class TypingCtx:
    """Dependency-ordered hypotheses; Var(0) is the last entry."""

    entries: tuple[tuple[str, Tp], ...] = ()


def target_family(tp: Tp) -> str:
    while not isinstance(tp, AtomApp):
        tp = tp.cod
    return tp.family


def kind_domains(k: Kind) -> tuple[Tp, ...]:
    out = []
    while not isinstance(k, Type):
        out.append(k.dom)
        k = k.cod
    return tuple(out)


def families_in_tp(tp: Tp, out: set | None = None) -> set[str]:
    if out is None:
        out = set()
    if isinstance(tp, AtomApp):
        out.add(tp.family)
    else:
        families_in_tp(tp.dom, out)
        families_in_tp(tp.cod, out)
    return out


# ---------------------------------------------------------- normalization


def normalize(t: Term) -> Term:
    """Beta-normal form; eta is deliberately not applied."""
    if isinstance(t, (Var, Const)):
        return t
    if isinstance(t, Lam):
        return Lam(t.hint, normalize(t.body))
    fn = normalize(t.fn)
    if isinstance(fn, Lam):
        return normalize(subst(fn.body, t.arg))
    return App(fn, normalize(t.arg))


def normalize_tp(tp: Tp) -> Tp:
    if isinstance(tp, AtomApp):
        return AtomApp(tp.family, tuple(normalize(a) for a in tp.args))
    if isinstance(tp, Arrow):
        return Arrow(normalize_tp(tp.dom), normalize_tp(tp.cod))
    return Pi(tp.hint, normalize_tp(tp.dom), normalize_tp(tp.cod))


def normalize_kind(k: Kind) -> Kind:
    if isinstance(k, Type):
        return k
    if isinstance(k, KArrow):
        return KArrow(normalize_tp(k.dom), normalize_kind(k.cod))
    return KPi(k.hint, normalize_tp(k.dom), normalize_kind(k.cod))


# ------------------------------------------------------------ kind checking


def check_tp(sig: Signature, ctx: list[Tp], tp: Tp) -> None:
    if isinstance(tp, AtomApp):
        if tp.family == TYPE_ATOM:
            raise LevelError(
                "the kind 'type' cannot appear inside a type; "
                "a family may only be indexed by level-0 terms"
            )
        entry = sig.get(tp.family)
        if entry is None:
            raise UnboundVariableError(f"unknown type family {tp.family!r}")
        if not isinstance(entry.decl, FamDecl):
            raise LfTypeError(f"{tp.family!r} is a term constant, not a type family")
        kind = entry.decl.kind
        for arg in tp.args:
            if isinstance(kind, KArrow):
                dom, kind = kind.dom, kind.cod
            elif isinstance(kind, KPi):
                dom, kind = kind.dom, subst_kind(kind.cod, arg)
            else:
                raise KindError(f"type family {tp.family!r} applied to too many arguments")
            check_term(sig, ctx, arg, dom)
        if not isinstance(kind, Type):
            raise KindError(f"type family {tp.family!r} is not fully applied")
        return
    if isinstance(tp, Arrow):
        check_tp(sig, ctx, tp.dom)
        check_tp(sig, ctx, tp.cod)
        return
    check_tp(sig, ctx, tp.dom)
    check_tp(sig, ctx + [tp.dom], tp.cod)


def check_kind(sig: Signature, ctx: list[Tp], k: Kind) -> None:
    if isinstance(k, Type):
        return
    check_tp(sig, ctx, k.dom)
    if isinstance(k, KArrow):
        check_kind(sig, ctx, k.cod)
    else:
        check_kind(sig, ctx + [k.dom], k.cod)


# ------------------------------------------------------------------ typing


def _infer(sig: Signature, ctx: list[Tp], t: Term) -> Tp:
    if isinstance(t, Var):
        if t.index >= len(ctx):
            raise UnboundVariableError(f"unbound variable index {t.index}")
        return normalize_tp(shift_tp(ctx[-1 - t.index], t.index + 1))
    if isinstance(t, Const):
        entry = sig.get(t.name)
        if entry is None:
            raise UnboundVariableError(f"unbound identifier {t.name!r}")
        if isinstance(entry.decl, FamDecl):
            raise LfTypeError(f"type family {t.name!r} used as a term")
        return normalize_tp(entry.decl.tp)
    if isinstance(t, App):
        if isinstance(t.fn, Lam):
            # beta-redex: infer the argument, then the instantiated body
            ta = _infer(sig, ctx, t.arg)
            tb = _infer(sig, ctx + [ta], t.fn.body)
            return normalize_tp(subst_tp(tb, t.arg))
        tf = _infer(sig, ctx, t.fn)
        if isinstance(tf, Arrow):
            _check(sig, ctx, t.arg, tf.dom)
            return tf.cod
        if isinstance(tf, Pi):
            _check(sig, ctx, t.arg, tf.dom)
            return normalize_tp(subst_tp(tf.cod, t.arg))
        raise LfTypeError(f"term of atomic type {tp_str(tf, [])!r} applied to an argument")
    raise LfTypeError("cannot infer the type of a bare lambda")


def _check(sig: Signature, ctx: list[Tp], t: Term, expected: Tp) -> None:
    exp = normalize_tp(expected)
    if isinstance(t, Lam):
        if isinstance(exp, Arrow):
            _check(sig, ctx + [exp.dom], t.body, shift_tp(exp.cod, 1))
            return
        if isinstance(exp, Pi):
            _check(sig, ctx + [exp.dom], t.body, exp.cod)
            return
        raise LfTypeError(f"expected {tp_str(exp, [])}, got a lambda")
    actual = _infer(sig, ctx, t)
    if not tp_alpha_equal(actual, exp):
        raise LfTypeError(f"expected {tp_str(exp, [])}, got {tp_str(actual, [])}")


def check_term(sig: Signature, ctx: list[Tp], t: Term, expected: Tp) -> None:
    _check(sig, ctx, t, expected)


def infer_type(sig: Signature, ctx: TypingCtx | None, t: Term) -> Tp:
    """Beta-normal principal type of ``t`` under ``ctx``."""
    tps = [tp for _, tp in (ctx.entries if ctx else ())]
    return _infer(sig, tps, t)


# ---------------------------------------------------------- reconstruction


def _tp_level0(sig: Signature, tp: Tp) -> bool:
    return all(sig.level(f) == 0 for f in families_in_tp(tp))


def _reconstruct(sig: Signature, decl: ConstDecl):
    unknowns: dict[str, Tp] = {}

    def scan_spine_against(ty: Tp, args, env) -> None:
        for arg in args:
            ty = normalize_tp(ty)
            if isinstance(ty, Arrow):
                scan_term(arg, ty.dom, env)
                ty = ty.cod
            elif isinstance(ty, Pi):
                scan_term(arg, ty.dom, env)
                ty = subst_tp(ty.cod, arg)
            else:
                raise LfTypeError(
                    f"term of atomic type {tp_str(ty, [])!r} applied to an argument"
                )

    def scan_term(t: Term, expected: Tp, env: list[Tp]) -> None:
        if isinstance(t, Lam):
            exp = normalize_tp(expected)
            if isinstance(exp, Arrow):
                scan_term(t.body, shift_tp(exp.cod, 1), env + [exp.dom])
            elif isinstance(exp, Pi):
                scan_term(t.body, exp.cod, env + [exp.dom])
            else:
                raise ReconstructionError(
                    f"lambda used where {tp_str(exp, [])!r} is expected"
                )
            return
        head, args = spine(t)
        if isinstance(head, Lam):
            scan_term(normalize(t), expected, env)
            return
        if isinstance(head, Var):
            if head.index >= len(env):
                raise UnboundVariableError(f"unbound variable index {head.index}")
            scan_spine_against(shift_tp(env[-1 - head.index], head.index + 1), args, env)
            return
        name = head.name
        entry = sig.get(name)
        if entry is not None:
            if isinstance(entry.decl, FamDecl):
                raise LfTypeError(f"type family {name!r} used as a term")
            scan_spine_against(entry.decl.tp, args, env)
            return
        # schematic occurrence: must be a Miller pattern of distinct bound vars
        idxs = []
        for arg in args:
            if not isinstance(arg, Var) or arg.index >= len(env):
                raise ReconstructionError(
                    f"schematic variable {name!r} must be applied to bound variables only"
                )
            idxs.append(arg.index)
        if len(set(idxs)) != len(idxs):
            raise ReconstructionError(
                f"schematic variable {name!r} applied to repeated bound variables"
            )
        cand = normalize_tp(expected)
        for i in reversed(idxs):
            cand = Arrow(normalize_tp(shift_tp(env[-1 - i], i + 1)), cand)
        if not tp_closed(cand):
            raise ReconstructionError(
                f"cannot infer a closed outermost type for schematic variable {name!r}"
            )
        if not _tp_level0(sig, cand):
            raise ReconstructionError(
                f"schematic variable {name!r} infers to the non-level-0 type "
                f"{tp_str(cand, [])!r}"
            )
        prev = unknowns.get(name)
        if prev is None:
            unknowns[name] = cand
        elif not tp_alpha_equal(prev, cand):
            raise ReconstructionError(
                f"schematic variable {name!r} used at incompatible types "
                f"{tp_str(prev, [])!r} and {tp_str(cand, [])!r}"
            )

    def scan_tp(tp: Tp, env: list[Tp]) -> None:
        if isinstance(tp, AtomApp):
            if tp.family == TYPE_ATOM:
                raise LevelError(
                    "the kind 'type' cannot appear inside a type; "
                    "a family may only be indexed by level-0 terms"
                )
            entry = sig.get(tp.family)
            if entry is None:
                raise UnboundVariableError(f"unknown type family {tp.family!r}")
            if not isinstance(entry.decl, FamDecl):
                raise LfTypeError(f"{tp.family!r} is a term constant, not a type family")
            kind = entry.decl.kind
            for arg in tp.args:
                if isinstance(kind, KArrow):
                    dom, kind = kind.dom, kind.cod
                elif isinstance(kind, KPi):
                    dom, kind = kind.dom, subst_kind(kind.cod, arg)
                else:
                    raise KindError(f"type family {tp.family!r} applied to too many arguments")
                scan_term(arg, dom, env)
            return
        if isinstance(tp, Arrow):
            scan_tp(tp.dom, env)
            scan_tp(tp.cod, env)
            return
        scan_tp(tp.dom, env)
        scan_tp(tp.cod, env + [tp.dom])

    scan_tp(decl.tp, [])
    if not unknowns:
        return decl, ()
    names = list(unknowns)
    k = len(names)
    pos = {n: j for j, n in enumerate(names)}

    def close_term(t: Term, d: int) -> Term:
        if isinstance(t, Var):
            return t
        if isinstance(t, Const):
            if t.name in pos:
                return Var(d + (k - 1 - pos[t.name]))
            return t
        if isinstance(t, Lam):
            return Lam(t.hint, close_term(t.body, d + 1))
        return App(close_term(t.fn, d), close_term(t.arg, d))

    def close_tp(tp: Tp, d: int) -> Tp:
        if isinstance(tp, AtomApp):
            return AtomApp(tp.family, tuple(close_term(a, d) for a in tp.args))
        if isinstance(tp, Arrow):
            return Arrow(close_tp(tp.dom, d), close_tp(tp.cod, d))
        return Pi(tp.hint, close_tp(tp.dom, d), close_tp(tp.cod, d + 1))

    body = close_tp(decl.tp, 0)
    for name in reversed(names):
        body = Pi(name, unknowns[name], body)
    return ConstDecl(decl.name, body, decl.loc), tuple(names)


def reconstruct_implicits(sig: Signature, rule: ConstDecl) -> ConstDecl:
    """Bind every free identifier of a rule with an outermost Pi-prefix."""
    decl, _ = _reconstruct(sig, rule)
    return decl


# ---------------------------------------------------------------- checking


def check_signature(spec: OrbiSpec) -> Signature:
    sig = Signature()
    for section, decl in spec.decls_in_order():
        try:
            if decl.name in sig:
                raise DuplicateNameError(f"duplicate declaration of {decl.name!r}")
            if section == "Syntax":
                if isinstance(decl, FamDecl):
                    if not isinstance(decl.kind, Type):
                        raise LevelError(
                            f"syntax-level family {decl.name!r} must have kind 'type'"
                        )
                    sig.add(SigEntry(decl, 0, section))
                else:
                    check_tp(sig, [], decl.tp)
                    if not _tp_level0(sig, decl.tp):
                        raise LevelError(
                            f"syntax-level constant {decl.name!r} may only mention "
                            "level-0 families"
                        )
                    sig.add(SigEntry(decl, 0, section))
            elif section == "Judgments":
                if isinstance(decl, ConstDecl):
                    raise LevelError(
                        "only judgment (type family) declarations may appear in the "
                        "Judgments section"
                    )
                check_kind(sig, [], decl.kind)
                for dom in kind_domains(decl.kind):
                    if not _tp_level0(sig, dom):
                        raise LevelError(
                            f"judgment {decl.name!r} must be indexed by level-0 terms "
                            "only (family indexed by a family)"
                        )
                sig.add(SigEntry(decl, 1, section))
            elif section == "Rules":
                if isinstance(decl, FamDecl):
                    raise LevelError("type families may not be declared in the Rules section")
                rec, names = _reconstruct(sig, decl)
                check_tp(sig, [], rec.tp)
                if sig.level(target_family(rec.tp)) != 1:
                    raise LevelError(
                        f"rule {decl.name!r} must target a level-1 judgment family"
                    )
                sig.add(SigEntry(rec, 1, section, names))
            else:
                raise LevelError(
                    f"constant or type declaration in unsupported section {section!r}"
                )
        except OrbiError as e:
            if e.loc.line == 0:
                e.loc = decl.loc
            raise
    return sig
