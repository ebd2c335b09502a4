"""Command-line front end: ``prodquot classify | group | tuples | orbits | catalog``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .catalog import Catalog, GroupId, identify, load_catalog, validate_catalog
from .classify import (
    UNMIXED_CASES,
    admissible_mixed_subgroups,
    attach_components,
    classify_mixed,
    classify_unmixed,
    unmixed_candidates,
)
from .constructors import PermGenSet, group_from_permutations
from .errors import CatalogError, PresentationSyntaxError, ProdQuotError, SignatureError
from .groups import GroupTable
from .moduli import count_components_mixed, count_components_unmixed
from .morphisms import automorphism_group
from .presentation import presentation_from_file
from .report import build_document, cache_key, cache_load, cache_store, render
from .signatures import BranchSignature, enumerate_admissible_tuples, format_periods, parse_periods
from .todd_coxeter import DEFAULT_COSET_CAP, group_from_presentation
from .vectors import EXISTS, find_generating_vectors, may_admit

log = logging.getLogger("prodquot")

EXIT_OK, EXIT_INTERNAL, EXIT_VALIDATION, EXIT_COVERAGE = 0, 1, 2, 3


class ValidationFailure(Exception):
    pass


def _open_catalog(args) -> Catalog:
    try:
        cat = load_catalog(args.catalog)
    except CatalogError as exc:
        raise ValidationFailure(str(exc)) from None
    if not cat.entries:
        raise ValidationFailure(f"catalog {cat.path} has no entries")
    return cat


# -- classify ---------------------------------------------------------------------


def _canonical_command(args) -> list[str]:
    cmd = ["classify", args.kind]
    if args.kind == "unmixed":
        cmd += ["--gf", str(args.gf)]
        if args.alpha_cap is not None:
            cmd += ["--alpha-cap", str(args.alpha_cap)]
    elif args.no_prune:
        cmd.append("--no-prune")
    if args.with_orbits:
        cmd.append("--with-orbits")
    return cmd


def cmd_classify(args) -> int:
    cat = _open_catalog(args)
    command = _canonical_command(args)
    doc = None
    key = cache_key(command, cat.content_hash)
    if args.cache:
        doc = cache_load(Path(args.cache), key)
        if doc is not None:
            print(f"cache: hit {key[:16]}", file=sys.stderr)
    if doc is None:
        start = time.perf_counter()
        if args.kind == "unmixed":
            result = classify_unmixed(args.gf, cat, alpha_cap=args.alpha_cap, jobs=args.jobs)
        else:
            result = classify_mixed(cat, prune=not args.no_prune)
        if args.with_orbits:
            result.records = attach_components(result.records, cat)
        doc = build_document(command, result, cat, time.perf_counter() - start)
        if args.cache:
            cache_store(Path(args.cache), key, doc)
            print(f"cache: stored {key[:16]}", file=sys.stderr)
    sys.stdout.write(render(doc, args.format))
    incomplete = doc["coverage"]["incomplete_orders"]
    if incomplete:
        print(
            "warning: catalog incomplete for orders " + ", ".join(map(str, incomplete))
            + "; results are partial",
            file=sys.stderr,
        )
        if args.require_exhaustive:
            return EXIT_COVERAGE
    return EXIT_OK


# -- group ------------------------------------------------------------------------


RELEVANT_GENUS1 = ((2,), (3,), (2, 2))


def group_summary(G: GroupTable) -> dict:
    """Order, involution count, centre and derived orders, ``|Aut|`` and generation flags."""
    out = {
        "order": G.order,
        "abelian": G.is_abelian,
        "n2": G.count_elements_of_order(2),
        "center_order": len(G.center),
        "derived_order": len(G.derived_subgroup),
        "abelian_invariants": list(G.abelianization_type),
        "aut_order": len(automorphism_group(G)),
    }
    flags = {}
    for n in RELEVANT_GENUS1:
        sig = BranchSignature(1, n)
        flags[str(sig)] = may_admit(G, sig) and find_generating_vectors(G, sig, EXISTS) is not None
    for g_F in sorted(UNMIXED_CASES):
        for m, order in unmixed_candidates(g_F):
            if order == G.order and str(m) not in flags:
                flags[str(m)] = may_admit(G, m) and find_generating_vectors(G, m, EXISTS) is not None
    out["generated"] = flags
    return out


def _read_perms(path: str) -> PermGenSet:
    """One permutation per line as 1-based images; ``#`` comments; or a catalog-style JSON record."""
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.strip()
    if stripped.startswith("{"):
        rec = json.loads(stripped)
        return PermGenSet.from_one_based(int(rec["degree"]), rec["gens"])
    gens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].replace(",", " ").strip()
        if line:
            gens.append([int(t) for t in line.split()])
    degree = max((len(g) for g in gens), default=1)
    if any(len(g) != degree for g in gens):
        raise ValueError("all permutations must have the same degree")
    return PermGenSet.from_one_based(degree, gens)


def cmd_group(args) -> int:
    cat = _open_catalog(args)
    if args.group_cmd == "info":
        G = cat.group(args.order, args.id)
        info = {"group_id": str(GroupId(args.order, args.id)), **group_summary(G)}
        _print_mapping(info, args.json)
        return EXIT_OK
    if args.presentation:
        G = group_from_presentation(presentation_from_file(args.presentation), coset_cap=args.coset_cap)
    else:
        perms = _read_perms(args.perms)
        G = group_from_permutations(perms, cap=args.order_cap)
    gid = identify(G, cat)
    if args.json:
        print(json.dumps({"group_id": list(gid), "order": G.order}))
    else:
        print(f"{gid}  order {G.order}")
    return EXIT_OK


def _print_mapping(info: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(info, indent=2))
        return
    width = max(len(k) for k in info)
    for k, v in info.items():
        if isinstance(v, dict):
            print(f"{k}:")
            for kk, vv in v.items():
                print(f"  {kk}: {'yes' if vv is True else 'no' if vv is False else vv}")
        else:
            print(f"{k.ljust(width)}  {v}")


# -- tuples, orbits -------------------------------------------------------------------


def cmd_tuples(args) -> int:
    for m, a in enumerate_admissible_tuples(args.alpha_cap):
        print(f"({format_periods(m)})_{a}")
    return EXIT_OK


def cmd_orbits(args) -> int:
    cat = _open_catalog(args)
    G = cat.group(args.order, args.id)
    n = BranchSignature(1, parse_periods(args.n))
    cap = {"state_cap": args.state_cap}
    if args.mixed:
        found = admissible_mixed_subgroups(G, n, prune=False)
        if not found:
            print("no admissible index-2 subgroup: empty family")
            return EXIT_OK
        by_type: dict[GroupId, list] = {}
        for H, _ in found:
            sub, _ = G.subgroup_table(H)
            by_type.setdefault(identify(sub, cat), []).append(H)
        for sid, subs in sorted(by_type.items()):
            res = count_components_mixed(G, subs, n, **cap)
            _print_orbit_result(res, f"G°={sid}")
        return EXIT_OK
    if not args.m:
        raise SignatureError("--m is required unless --mixed is given")
    m = BranchSignature(0, parse_periods(args.m))
    res = count_components_unmixed(G, m, n, **cap)
    _print_orbit_result(res, "")
    return EXIT_OK


def _print_orbit_result(res, prefix: str) -> None:
    head = f"{prefix} " if prefix else ""
    print(f"{head}N={res.components} D={res.dimension}  (family {res.family_size}, "
          f"{res.orbit_states} states, {res.automorphisms} automorphisms)")
    for note in res.notes:
        print(f"  note: {note}")


# -- catalog --------------------------------------------------------------------------


def cmd_catalog(args) -> int:
    path = args.path or args.catalog
    try:
        cat = load_catalog(path)
    except CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.catalog_cmd == "info":
        print(f"path     {cat.path}")
        print(f"sha256   {cat.content_hash}")
        print(f"entries  {len(cat.entries)}")
        print(f"complete orders: {len([o for o in cat.orders() if cat.is_complete(o)])}")
        return EXIT_OK
    orders = [int(o) for o in args.orders.split(",")] if args.orders else None
    report = validate_catalog(cat, orders=orders, check_isomorphism=not args.skip_isomorphism)
    for err in report.errors:
        print(f"error: {err}")
    print(f"checked {report.entries_checked} entries")
    print("complete orders: " + (", ".join(map(str, report.complete_orders)) or "none"))
    if report.incomplete_orders:
        print("incomplete orders: " + ", ".join(map(str, report.incomplete_orders)))
    print(f"{len(report.errors)} errors")
    return EXIT_OK if report.ok else EXIT_VALIDATION


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prodquot", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--catalog", help="catalog file (default: $PRODQUOT_CATALOG or the bundled file)")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="run a classification driver")
    c.add_argument("kind", choices=["unmixed", "mixed"])
    c.add_argument("--gf", type=int, choices=sorted(UNMIXED_CASES), help="genus of F (unmixed only)")
    c.add_argument("--alpha-cap", type=int, help="override the alpha cap of the unmixed case")
    c.add_argument("--no-prune", action="store_true", help="mixed: disable the involution lemma shortcut")
    c.add_argument("--with-orbits", action="store_true", help="add the number N of moduli components")
    c.add_argument("--format", choices=["table", "json", "csv"], default="table")
    c.add_argument("--cache", metavar="DIR", help="reuse and store result documents in DIR")
    c.add_argument("--require-exhaustive", action="store_true", help="exit 3 unless every order is covered")
    c.add_argument("--jobs", type=int, default=1, help="worker processes for unmixed sweeps")
    c.set_defaults(func=cmd_classify)

    g = sub.add_parser("group", help="inspect or identify a group")
    gsub = g.add_subparsers(dest="group_cmd", required=True)
    gi = gsub.add_parser("info")
    gi.add_argument("--order", type=int, required=True)
    gi.add_argument("--id", type=int, required=True)
    gi.add_argument("--json", action="store_true")
    gd = gsub.add_parser("identify")
    src = gd.add_mutually_exclusive_group(required=True)
    src.add_argument("--presentation", metavar="FILE")
    src.add_argument("--perms", metavar="FILE")
    gd.add_argument("--coset-cap", type=int, default=DEFAULT_COSET_CAP)
    gd.add_argument("--order-cap", type=int, default=2000)
    gd.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_group)

    t = sub.add_parser("tuples", help="list admissible branching tuples")
    t.add_argument("--alpha-cap", type=int, default=84)
    t.set_defaults(func=cmd_tuples)

    o = sub.add_parser("orbits", help="count moduli components for one group")
    o.add_argument("--order", type=int, required=True)
    o.add_argument("--id", type=int, required=True)
    o.add_argument("--m", help="genus-0 periods, e.g. 2,4,12 or 2^2,4^2")
    o.add_argument("--n", required=True, help="genus-1 periods, e.g. 2,2")
    o.add_argument("--mixed", action="store_true")
    o.add_argument("--state-cap", type=int, default=10_000_000)
    o.set_defaults(func=cmd_orbits)

    k = sub.add_parser("catalog", help="catalog maintenance")
    ksub = k.add_subparsers(dest="catalog_cmd", required=True)
    kv = ksub.add_parser("validate")
    kv.add_argument("path", nargs="?")
    kv.add_argument("--orders", help="comma-separated orders to check (default: all)")
    kv.add_argument("--skip-isomorphism", action="store_true")
    ki = ksub.add_parser("info")
    ki.add_argument("path", nargs="?")
    k.set_defaults(func=cmd_catalog)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "classify" and args.kind == "unmixed" and args.gf is None:
        parser.error("classify unmixed needs --gf")
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ProdQuotError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION if isinstance(exc, (CatalogError, PresentationSyntaxError)) else EXIT_INTERNAL
    except Exception:  # pragma: no cover - last-resort guard
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
