"""Command-line entry point: ``integrate``, ``transform`` and ``enrich``.

Exit status is 0 on success, 1 on input errors and 2 when an internal
invariant breaks. Outputs are rendered in memory first and then written
through temporary files, so an error never leaves partial output behind.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .alignment import align_ontologies
from .context import DEFAULT_MAX_DEPTH, DEFAULT_THRESHOLD
from .enrichment import closure_oracle
from .formats import (
    COMPONENT_SUFFIX,
    ONTOLOGY_SUFFIX,
    OWL_SUFFIX,
    FormatError,
    dumps,
    emit_owl_functional,
    parse_component_document,
    parse_ontology_document,
    serialize_component_document,
    serialize_ontology_document,
)
from .model import Ontology
from .transform import TransformError, bc_to_ontology, build_merge_plan, ontology_to_bc

logger = logging.getLogger(__name__)

SATURATION_LIMIT = 25

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2


class InputError(Exception):
    """Problem with user-supplied input; maps to exit status 1."""


@dataclass
class RunConfig:
    domain_path: Path
    component_paths: list[Path]
    out_ontology: Path = Path("result" + ONTOLOGY_SUFFIX)
    out_owl: Path = Path("result" + OWL_SUFFIX)
    out_component: Path = Path("result" + COMPONENT_SUFFIX)
    out_domain: Path = Path("enriched-domain" + ONTOLOGY_SUFFIX)
    report: Path = Path("report.json")
    threshold: float = DEFAULT_THRESHOLD
    max_depth: int = DEFAULT_MAX_DEPTH
    enrichment_enabled: bool = True
    outputs: dict = field(default_factory=dict, repr=False)

    def validate(self):
        if len(self.component_paths) < 2:
            raise InputError("integrate needs at least two --component files")
        if not 0.0 < self.threshold <= 1.0:
            raise InputError(f"--threshold must lie in (0, 1], got {self.threshold}")
        if self.max_depth < 0:
            raise InputError("--max-depth must be non-negative")
        paths = [self.out_ontology, self.out_owl, self.out_component,
                 self.out_domain, self.report]
        if len({p.resolve() for p in paths}) != len(paths):
            raise InputError("output paths must be distinct")


def _read(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def load_ontology(path: Path) -> Ontology:
    try:
        return parse_ontology_document(_read(path))
    except FormatError as exc:
        exc.source = str(path)
        raise


def load_component_ontology(path: Path) -> Ontology:
    """Component ontology from a ``.bc.json`` file, or an ``.onto.json``
    file taken as already transformed."""
    if str(path).endswith(ONTOLOGY_SUFFIX):
        return load_ontology(path)
    try:
        return bc_to_ontology(parse_component_document(_read(path)))
    except FormatError as exc:
        exc.source = str(path)
        raise


def write_outputs(outputs: dict[Path, str]):
    for path, text in outputs.items():
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _load_inputs(domain_path, component_paths):
    domain = load_ontology(domain_path)
    components = [load_component_ontology(p) for p in component_paths]
    names = [domain.name, *(c.name for c in components)]
    if len(set(names)) != len(names):
        raise InputError(f"ontology names must be distinct, got {', '.join(names)}")
    return domain, components


def run_integrate(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cfg.validate()
    domain, components = _load_inputs(cfg.domain_path, cfg.component_paths)
    result = align_ontologies(domain, components, threshold=cfg.threshold,
                              max_depth=cfg.max_depth,
                              enrichment_enabled=cfg.enrichment_enabled)
    origins = [c.concepts[0].origin for c in components if len(c)]
    plan = build_merge_plan(result.result_ontology, origins)
    try:
        merged = ontology_to_bc(result.result_ontology, plan)
    except TransformError as exc:
        raise InputError(f"cannot build the merged component: {exc}") from None

    report = result.report.to_dict()
    report["settings"] = {"threshold": cfg.threshold, "maxDepth": cfg.max_depth,
                          "enrichment": cfg.enrichment_enabled}
    report["mergePlan"] = plan.to_dict()
    outputs = {
        cfg.out_ontology: serialize_ontology_document(result.result_ontology),
        cfg.out_owl: emit_owl_functional(result.result_ontology),
        cfg.out_component: serialize_component_document(merged),
        cfg.out_domain: serialize_ontology_document(result.enriched_domain),
        cfg.report: dumps(report),
    }
    write_outputs(outputs)
    cfg.outputs = outputs

    added = len(result.enriched_domain.relations) - len(domain.relations)
    print(f"components read: {len(components)} ({', '.join(c.name for c in components)})",
          file=out)
    print(f"pairs compared: {len(result.correspondences)}", file=out)
    print(f"synonym conflicts: {len(result.report.synonym_conflicts)}, "
          f"homonym conflicts: {len(result.report.homonym_conflicts)}, "
          f"unresolved: {len(result.report.unresolved)}", file=out)
    print(f"relations added to domain: {added}", file=out)
    print(f"merged component: {merged.name} with {len(merged.classes)} classes", file=out)
    return EXIT_OK


def run_transform(component_path: Path, out_ontology: Path | None = None,
                  out_owl: Path | None = None, out=None) -> int:
    out = out or sys.stdout
    onto = load_component_ontology(component_path)
    stem = Path(component_path).name
    for suffix in (COMPONENT_SUFFIX, ONTOLOGY_SUFFIX, ".json"):
        if stem.endswith(suffix):
            stem = stem[: -len(suffix)]
            break
    out_ontology = Path(out_ontology or f"{stem}{ONTOLOGY_SUFFIX}")
    out_owl = Path(out_owl or f"{stem}{OWL_SUFFIX}")
    if out_ontology.resolve() == out_owl.resolve():
        raise InputError("output paths must be distinct")
    write_outputs({
        out_ontology: serialize_ontology_document(onto),
        out_owl: emit_owl_functional(onto),
    })
    print(f"{onto.name}: {len(onto)} concepts, {len(onto.relations)} relations", file=out)
    return EXIT_OK


def run_enrich(domain_path: Path, component_paths: list[Path], out_domain: Path,
               saturate: bool = False, max_depth: int = DEFAULT_MAX_DEPTH,
               out=None) -> int:
    out = out or sys.stdout
    domain, components = _load_inputs(domain_path, component_paths)
    if saturate:
        total = len(domain) + sum(len(c) for c in components)
        if total > SATURATION_LIMIT:
            raise InputError(
                f"--saturate is limited to {SATURATION_LIMIT} concepts ({total} given); "
                "run without --saturate to use session enrichment")
        enriched = closure_oracle(domain, components)
    elif len(components) >= 2:
        enriched = align_ontologies(domain, components, max_depth=max_depth).enriched_domain
    else:
        enriched = domain.copy()
    write_outputs({out_domain: serialize_ontology_document(enriched)})
    added = len(enriched.relations) - len(domain.relations)
    print(f"relations added to domain: {added}", file=out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bcintegrate",
                     description="Integrate business components through a domain ontology.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("integrate", help="transform, align and merge components")
    parser.integrate_parser = p
    p.add_argument("--domain", required=True, type=Path)
    p.add_argument("--component", action="append", default=[], type=Path,
                   help="component document; repeat, order matters")
    p.add_argument("--out-dir", type=Path, default=Path("."),
                   help="directory for outputs not given explicitly")
    p.add_argument("--out-ontology", type=Path)
    p.add_argument("--out-owl", type=Path)
    p.add_argument("--out-component", type=Path)
    p.add_argument("--out-domain", type=Path)
    p.add_argument("--report", type=Path)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    p.add_argument("--no-enrich", action="store_true", help="disable domain enrichment")

    p = sub.add_parser("transform", help="emit the ontology of one component")
    p.add_argument("--component", required=True, type=Path)
    p.add_argument("--out-ontology", type=Path)
    p.add_argument("--out-owl", type=Path)

    p = sub.add_parser("enrich", help="enrich a domain ontology from components")
    p.add_argument("--domain", required=True, type=Path)
    p.add_argument("--component", action="append", default=[], type=Path)
    p.add_argument("--out-domain", type=Path, default=Path("enriched-domain" + ONTOLOGY_SUFFIX))
    p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    p.add_argument("--saturate", action="store_true",
                   help=f"exhaustive closure (at most {SATURATION_LIMIT} concepts)")
    return parser


def _integrate_config(args) -> RunConfig:
    base = args.out_dir
    return RunConfig(
        domain_path=args.domain,
        component_paths=list(args.component),
        out_ontology=args.out_ontology or base / ("result" + ONTOLOGY_SUFFIX),
        out_owl=args.out_owl or base / ("result" + OWL_SUFFIX),
        out_component=args.out_component or base / ("result" + COMPONENT_SUFFIX),
        out_domain=args.out_domain or base / ("enriched-domain" + ONTOLOGY_SUFFIX),
        report=args.report or base / "report.json",
        threshold=args.threshold,
        max_depth=args.max_depth,
        enrichment_enabled=not args.no_enrich,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "integrate":
            cfg = _integrate_config(args)
            if len(cfg.component_paths) < 2:
                parser.integrate_parser.print_usage(sys.stderr)
            return run_integrate(cfg)
        if args.command == "transform":
            return run_transform(args.component, args.out_ontology, args.out_owl)
        return run_enrich(args.domain, args.component, args.out_domain,
                          saturate=args.saturate, max_depth=args.max_depth)
    except (InputError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:
        logger.debug("internal failure", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
