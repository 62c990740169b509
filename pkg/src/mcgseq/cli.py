"""Command-line front end: parsing, dispatch, JSON/DOT emission.

Exit codes: 0 success, 1 domain error (structured JSON on stdout), 2
parse/config error.  Identical inputs and seed produce byte-identical
output.  Set MCGSEQ_LOG to a logging level name for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

from . import fpgroup, sequence, systems, textio, verify
from . import words as w
from .errors import McgseqError, ParseError
from .model import (
    classify_system,
    standard_system,
    validate_laminar,
)

log = logging.getLogger("mcgseq")

MAX_LEN_GUARD = 6


@dataclass(frozen=True)
class RunConfig:
    """A validated invocation: command, input paths and suite parameters."""

    command: str
    manifold: str | None = None
    family: str | None = None
    word: str | None = None
    assignment: str | None = None
    image: str | None = None
    element: str | None = None
    format: str = "json"
    seed: int = 7
    max_len: int | None = None
    allow_long: bool = False
    case_limit: int | None = None
    suite: str | None = None
    out: str | None = None

    def __post_init__(self):
        if self.format not in ("json", "text", "dot"):
            raise ParseError(f"unknown format {self.format!r}")
        if (
            self.max_len is not None
            and self.max_len > MAX_LEN_GUARD
            and not self.allow_long
        ):
            raise ParseError(
                f"--max-len {self.max_len} exceeds the default guard "
                f"{MAX_LEN_GUARD}; pass --allow-long to override"
            )
        for path in (self.manifold, self.family, self.word, self.assignment,
                     self.image):
            if path is not None and not os.path.exists(path):
                raise FileNotFoundError(f"input file not found: {path}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=args.command,
            manifold=args.manifold,
            family=args.family,
            word=args.word,
            assignment=args.assignment,
            image=args.image,
            element=args.element,
            format=args.format,
            seed=args.seed,
            max_len=args.max_len,
            allow_long=args.allow_long,
            case_limit=args.case_limit,
            suite=getattr(args, "suite", None),
            out=args.out,
        )


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload) -> None:
    _emit(args, json.dumps(payload, indent=2, sort_keys=True))


def _load_manifold(args):
    if not getattr(args, "manifold", None):
        raise ParseError("this command needs --manifold")
    return textio.parse_manifold(_read(args.manifold))


def _load_family(args, manifold):
    if not getattr(args, "family", None):
        raise ParseError("this command needs --family")
    return textio.parse_family(_read(args.family))


def _load_word(args, manifold):
    if not getattr(args, "word", None):
        raise ParseError("this command needs --word")
    return textio.parse_word(manifold, _read(args.word))


def _family_jsonable(family):
    return [sorted(textio.label_text(l) for l in b) for b in family.blocks]


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_validate(args):
    manifold = _load_manifold(args)
    family = _load_family(args, manifold)
    report = validate_laminar(manifold, family.blocks)
    _emit_json(
        args,
        {
            "ok": report.ok,
            "violations": [
                {
                    "code": v.code,
                    "message": v.message,
                    "blocks": [textio.block_text(b) for b in v.blocks],
                }
                for v in report.violations
            ],
            "duplicates": [textio.block_text(b) for b in report.duplicates],
        },
    )
    return 0


def cmd_classify(args):
    manifold = _load_manifold(args)
    family = _load_family(args, manifold)
    cls = classify_system(manifold, family)
    _emit_json(
        args,
        {
            "isSymmetric": cls.is_symmetric,
            "perBlock": [
                {
                    "block": textio.block_text(info.block),
                    "separating": info.separating,
                    "census": textio.block_text(info.census),
                }
                for info in cls.per_block
            ],
            "summandBlocks": {
                str(i): textio.block_text(b) for i, b in cls.summand_blocks
            },
            "nonsepBlocks": [textio.block_text(b) for b in cls.nonsep_blocks],
        },
    )
    return 0


def cmd_educe(args):
    manifold = _load_manifold(args)
    word = _load_word(args, manifold)
    image = sequence.educe(word)
    _emit_json(args, textio.image_to_jsonable(manifold, image))
    return 0


def cmd_lift(args):
    manifold = _load_manifold(args)
    if getattr(args, "image", None):
        image = textio.image_from_jsonable(manifold, json.loads(_read(args.image)))
    elif getattr(args, "word", None):
        image = sequence.educe(_load_word(args, manifold))
    else:
        raise ParseError("lift needs --image or --word")
    lifted = sequence.lift(manifold, image)
    if args.format == "text":
        _emit(args, textio.word_text(lifted))
    else:
        _emit_json(args, {"word": textio.word_text(lifted)})
    return 0


def cmd_kernel_test(args):
    manifold = _load_manifold(args)
    word = _load_word(args, manifold)
    image = sequence.educe(word)
    _emit_json(
        args,
        {
            "discrepant": sequence.is_discrepant(word),
            "eduction": textio.image_to_jsonable(manifold, image),
        },
    )
    return 0


def cmd_factor(args):
    manifold = _load_manifold(args)
    word = _load_word(args, manifold)
    factored = sequence.factor_discrepant(word)
    if args.format == "text":
        _emit(args, textio.word_text(factored))
    else:
        _emit_json(args, {"word": textio.word_text(factored)})
    return 0


def cmd_act_pi1(args):
    manifold = _load_manifold(args)
    word = _load_word(args, manifold)
    if getattr(args, "element", None):
        u = textio.parse_fpword(manifold, args.element)
        result = fpgroup.act_pi1(manifold, word, u)
        _emit_json(args, {"result": textio.fpword_text(manifold, result)})
    else:
        table = fpgroup.aut_of_word(manifold, word)
        images = {}
        for key, img in table.images:
            name = (
                f"g:{key[1]}:{key[2]}" if key[0] == "g" else f"x{key[1]}"
            )
            images[name] = textio.fpword_text(manifold, img)
        _emit_json(args, {"images": images})
    return 0


def cmd_act_system(args):
    manifold = _load_manifold(args)
    word = _load_word(args, manifold)
    family = _load_family(args, manifold)
    image = systems.act_system(manifold, word, family)
    if args.format == "dot":
        _emit(args, systems.family_dot(manifold, image, name="image"))
    elif args.format == "text":
        _emit(args, textio.family_text(image))
    else:
        _emit_json(args, {"family": _family_jsonable(image)})
    return 0


def cmd_normalize_system(args):
    manifold = _load_manifold(args)
    family = _load_family(args, manifold)
    if not getattr(args, "assignment", None):
        raise ParseError("normalize-system needs --assignment")
    assignment = textio.parse_assignment(manifold, _read(args.assignment))
    word = systems.normalize_system(manifold, family, assignment)
    std = standard_system(manifold)
    if args.format == "dot":
        before = systems.family_dot(manifold, std, name="before")
        after = systems.family_dot(manifold, family, name="after")
        _emit(args, before + "\n" + after)
        return 0
    trace = []
    current = std
    for letter in word.letters:
        current = systems.act_system(
            manifold, w.Word(manifold, (letter,)), current
        )
        trace.append(
            {
                "move": textio.word_letter_text(manifold, letter),
                "family": _family_jsonable(current),
            }
        )
    payload = {
        "word": textio.word_text(word),
        "trace": trace,
        "statesVisited": len(systems._reachability(manifold)),
    }
    if args.format == "text":
        _emit(args, textio.word_text(word))
    else:
        _emit_json(args, payload)
    return 0


def cmd_spotted_educe(args):
    if not getattr(args, "manifold", None):
        raise ParseError("spotted-educe needs --manifold (a spotted marking file)")
    marking = textio.parse_spotted_marking(_read(args.manifold))
    if not getattr(args, "word", None):
        raise ParseError("spotted-educe needs --word")
    letters = textio.parse_spotted_word(marking, _read(args.word))
    cap, perm = sequence.spotted_educe(marking, letters)
    _emit_json(
        args,
        {
            "cap": marking.cap_type.mcg.elem_to_text(cap),
            "perm": list(perm),
        },
    )
    return 0


def cmd_verify(args):
    suite = verify.SUITES.get(args.suite)
    if suite is None:
        raise ParseError(
            f"unknown suite {args.suite!r}; choose from {sorted(verify.SUITES)}"
        )
    max_len = args.max_len if args.max_len is not None else 3
    if args.suite == "spotted":
        marking = textio.parse_spotted_marking(_read(args.manifold))
        report = suite(marking, max_len=max_len)
    else:
        manifold = _load_manifold(args)
        if args.suite == "exactness":
            report = suite(manifold, max_len=max_len, mixed_len=min(max_len, 3))
        elif args.suite == "pi1":
            report = suite(manifold, seed=args.seed, pairs=args.case_limit or 300)
        elif args.suite == "roundtrip":
            report = suite(manifold, seed=args.seed, cases=args.case_limit or 200)
        else:
            report = suite(manifold)
    _emit_json(args, report)
    return 0 if report["ok"] else 1


def cmd_render(args):
    manifold = _load_manifold(args)
    family = _load_family(args, manifold)
    if args.format == "json":
        _emit_json(args, {"family": _family_jsonable(family)})
    else:
        _emit(args, systems.family_dot(manifold, family))
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "educe": cmd_educe,
    "lift": cmd_lift,
    "kernel-test": cmd_kernel_test,
    "factor": cmd_factor,
    "act-pi1": cmd_act_pi1,
    "act-system": cmd_act_system,
    "normalize-system": cmd_normalize_system,
    "spotted-educe": cmd_spotted_educe,
    "verify": cmd_verify,
    "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcgseq",
        description="Mapping class group calculus for reducible 3-manifolds",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--manifold", help="manifold (or spotted marking) file")
        p.add_argument("--family", help="laminar family file")
        p.add_argument("--word", help="word file")
        p.add_argument("--assignment", help="assignment file")
        p.add_argument("--image", help="eduction image JSON file")
        p.add_argument("--element", help="pi1 word text (act-pi1)")
        p.add_argument(
            "--format", choices=("json", "text", "dot"), default="json"
        )
        p.add_argument("--seed", type=int, default=7)
        p.add_argument("--max-len", dest="max_len", type=int, default=None)
        p.add_argument(
            "--case-limit", dest="case_limit", type=int, default=None
        )
        p.add_argument(
            "--allow-long",
            action="store_true",
            help="lift the max-len guard",
        )
        p.add_argument("--out", help="write output to a file instead of stdout")
        if name == "verify":
            p.add_argument("--suite", required=True)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("MCGSEQ_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command]
    try:
        config = RunConfig.from_args(args)
        log.info("running %s", args.command)
        return handler(config)
    except ParseError as exc:
        json.dump({"error": {"kind": "parse", "message": str(exc)}}, sys.stdout)
        sys.stdout.write("\n")
        return 2
    except OSError as exc:
        json.dump({"error": {"kind": "io", "message": str(exc)}}, sys.stdout)
        sys.stdout.write("\n")
        return 2
    except McgseqError as exc:
        json.dump(
            {
                "error": {
                    "kind": type(exc).__name__,
                    "message": str(exc),
                }
            },
            sys.stdout,
        )
        sys.stdout.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
