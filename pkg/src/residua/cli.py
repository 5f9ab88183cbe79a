"""Command line front end.

Every subcommand except ``spectra`` takes ``--config``, either a JSON file
or the name of a preset.  Output goes to stdout as JSON, CSV or DOT.
Numbers are written as decimal strings.  Exit codes: 0 success, 2 domain
error (with a JSON error object on stdout), 64 usage error.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

import gmpy2

from . import abelian, conjugacy, engine, mckinsey, oracle, quotients, spectra
from .errors import ConfigError, DomainError
from .presets import PRESETS, preset
from .words import as_word, parse_word, to_text

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 2, 64
_MPZ = type(gmpy2.mpz(0))


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _strs(obj):
    """Recursively turn ints into decimal strings."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _strs(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_strs(v) for v in obj]
    if isinstance(obj, _MPZ):
        return obj.digits(10)
    return obj


def _dump(obj):
    return json.dumps(_strs(obj), sort_keys=True) + "\n"


def _config(args):
    if not args.config:
        raise UsageError("--config is required")
    path = args.config
    if not os.path.exists(path) and path in PRESETS:
        return preset(path)
    if not os.path.exists(path):
        raise UsageError(f"no such config file: {path}")
    return abelian.load_config(path)


def _word(args, name="word"):
    text = getattr(args, name)
    if text is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    return parse_word(text)


def _form_json(r):
    d = engine.form_to_json(r)
    d["text"] = str(r)
    return d


# ---------------------------------------------------------------------------
# subcommands

def cmd_normalize(args):
    cfg = _config(args)
    return _dump(_form_json(engine.reduce(cfg, _word(args))))


def _has_lazy(cfg):
    return any(g.lazy for g in cfg.gens)


def cmd_wp(args):
    cfg = _config(args)
    r = engine.reduce(cfg, _word(args))
    if _has_lazy(cfg):
        v = engine.probe_identity(r, args.budget)
        ident = {abelian.Verdict.IDENTITY: True, abelian.Verdict.NOT_IDENTITY: False}.get(v)
        return _dump({"identity": ident, "verdict": v, "budget": args.budget})
    return _dump({"identity": engine.is_identity(r)})


def cmd_depth(args):
    cfg = _config(args)
    w = _word(args)
    d = quotients.depth_of(cfg, engine.reduce(cfg, w), len(w))
    out = d.as_json()
    if d.separator is not None:
        out["separator"] = d.separator.describe()
    return _dump(out)


def cmd_profile(args):
    cfg = _config(args)
    table = quotients.rfg_profile(cfg, args.radius, ball_cap=args.ball_cap)
    if args.format == "csv":
        return quotients.profile_csv(table)
    return _dump({"profile": [{"n": n, "lower": lo, "upper": hi} for n, (lo, hi) in sorted(table.items())]})


def cmd_quotient(args):
    cfg = _config(args)
    if args.q is None or args.T is None or args.r is None:
        raise UsageError("quotient needs --q, --T and --r")
    spec = quotients.QuotientSpec(args.q, args.T, args.r)
    aut = quotients.build_automaton(cfg, spec)
    fmt = args.emit or args.format
    if fmt == "dot":
        return aut.to_dot()
    bound, exact = quotients.quotient_index(cfg, spec)
    out = {"states": len(aut), "index_bound": bound, "bound_is_exact": exact,
           "spec": spec.describe()}
    if args.word is not None:
        st = aut.trace(_word(args))
        out["trace"] = {"state": st, "label": str(aut.labels[st]), "start": st == aut.start}
    return _dump(out)


def cmd_oracle(args):
    cfg = _config(args)
    w1 = _word(args)
    w2 = parse_word(args.word2 or "")
    res = oracle.oracle_compare(cfg, w1, w2, exhaustive=args.exhaustive)
    if isinstance(res, oracle.Equal):
        return _dump({"equal": True, "checked": res.checked})
    return _dump({"equal": False, "k": res.k, "probe": sorted(res.z.items()), "reason": res.reason})


def cmd_mckinsey(args):
    cfg = _config(args)
    res = mckinsey.verify_depth_exceeds(cfg, _word(args), args.k, budget=args.budget)
    if isinstance(res, mckinsey.Confirmed):
        certs = []
        for cand, why in res.certificates:
            c = cand.describe()
            c["refuted_by"] = why if isinstance(why, str) else why.relator
            certs.append(c)
        return _dump({"result": "Confirmed", "k": args.k, "certificates": certs})
    surv = []
    for cand, checked in res.survivors:
        c = cand.describe()
        c["checked_relators"] = checked
        surv.append(c)
    return _dump({"result": "Inconclusive", "k": args.k, "budget": args.budget, "survivors": surv})


def cmd_spectra(args):
    f = spectra.growth(args.f)
    if args.relators:
        cfg = spectra.wp8_config(args.f, pairs=args.pairs, bound=args.bound)
        return _dump(abelian.config_to_json(cfg))
    lam = Fraction(args.lam)
    rows = spectra.spectra_table(f, lam, args.count)
    lines = ["i,p_i,q_i,R_i,f(p_i),ratio"]
    for rep in rows:
        ratio = f"{rep.ratio:.6g}" if rep.ln_ratio < 700 else f"exp({rep.ln_ratio:.6f})"
        lines.append(",".join([str(rep.i), str(rep.p), str(rep.q),
                               spectra.big_str(rep.R, args.full), spectra.big_str(rep.fp, args.full),
                               ratio]))
    return "\n".join(lines) + "\n"


def cmd_conjugacy(args):
    cfg = _config(args)
    if args.i is not None:
        wit = conjugacy.conjugator_witness(cfg, args.i)
        return _dump(conjugacy.describe_witness(wit))
    if args.decide is not None:
        d = conjugacy.special_conjugacy_decide(cfg, args.decide, mode=args.mode, budget=args.budget)
        state = {True: "conjugate", False: "not-conjugate", None: "unknown-pending"}[d.conjugate]
        return _dump({"n": args.decide, "result": state,
                      "witness": None if d.witness is None else to_text(d.witness),
                      "budget": d.budget, "reason": d.reason})
    raise UsageError("conjugacy needs --i or --decide")


def cmd_config_check(args):
    if not args.config:
        raise UsageError("--config is required")
    cfg = _config(args)
    if cfg.meta_get("K") is not None:
        conjugacy.check_gaps(conjugacy.conj_config(cfg))
    back = abelian.config_from_json(json.loads(json.dumps(abelian.config_to_json(cfg))))
    if back != cfg:
        raise ConfigError("config does not survive a JSON round trip")
    return _dump({"ok": True, "generators": len(cfg.gens), "periods": len(cfg.periods),
                  "normal_form": cfg.normal_form})


# ---------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="residua", description="Exact computations in the groups G_A.")
    sub = p.add_subparsers(dest="command")

    def add(name, fn, word=False):
        sp = sub.add_parser(name)
        sp.set_defaults(fn=fn)
        sp.add_argument("--config")
        sp.add_argument("--format", choices=("json", "csv", "dot"), default="json")
        if word:
            sp.add_argument("--word")
        return sp

    add("normalize", cmd_normalize, True)
    sp = add("wp", cmd_wp, True)
    sp.add_argument("--budget", type=int, default=1000)
    add("depth", cmd_depth, True)
    sp = add("profile", cmd_profile)
    sp.add_argument("--radius", type=int, default=6)
    sp.add_argument("--ball-cap", type=int, default=7)
    sp = add("quotient", cmd_quotient, True)
    sp.add_argument("--q", type=int)
    sp.add_argument("--T", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--emit", choices=("json", "dot"))
    sp = add("oracle", cmd_oracle, True)
    sp.add_argument("--word2")
    sp.add_argument("--exhaustive", action="store_true")
    sp = add("mckinsey", cmd_mckinsey, True)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--budget", type=int, default=200)
    sp = add("spectra", cmd_spectra)
    sp.add_argument("--f", default="n^3n")
    sp.add_argument("--lambda", dest="lam", default="1/2")
    sp.add_argument("--count", type=int, default=3)
    sp.add_argument("--full", action="store_true")
    sp.add_argument("--relators", action="store_true")
    sp.add_argument("--pairs", type=int, default=12)
    sp.add_argument("--bound", type=int, default=400)
    sp = add("conjugacy", cmd_conjugacy)
    sp.add_argument("--i", type=int)
    sp.add_argument("--decide", type=int)
    sp.add_argument("--budget", type=int, default=100)
    sp.add_argument("--mode", choices=(conjugacy.RECURSIVE, conjugacy.RE), default=conjugacy.RECURSIVE)
    add("config-check", cmd_config_check)
    return p


def run(argv):
    """(exit code, stdout text, stderr text)."""
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a subcommand is required")
        return EXIT_OK, args.fn(args), ""
    except UsageError as exc:
        return EXIT_USAGE, "", f"usage error: {exc}\n"
    except DomainError as exc:
        return EXIT_DOMAIN, _dump(exc.to_json()), ""
    except ValueError as exc:
        # malformed numeric arguments such as --lambda abc
        return EXIT_USAGE, "", f"usage error: {exc}\n"


def main(argv=None):
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    if out:
        try:
            sys.stdout.write(out)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. piped into head); not an error
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
