"""JSON model files for base tokenizers and their variants.

Base document::

    {"version": 1, "alphabet": [...], "merges": [[left, right], ...]}

Variants add a ``variant`` block holding the kind, hyperparameters and the
materialized drop / duplication set (or the synthetic inflation entries),
so a saved variant never needs the corpus again. An optional ``config``
block echoes the settings that produced the file.
"""

from __future__ import annotations

import json
import os

from .bpe import Tokenizer
from .errors import ModelFormatError
from .variants import (DuplicationSpec, DuplicationTokenizer, RandomDropSpec, RandomDropTokenizer)

FORMAT_VERSION = 1


def model_to_dict(model, config: dict | None = None) -> dict:
    base = getattr(model, "base", model)
    padding = base.padding
    doc = {
        "version": FORMAT_VERSION,
        "alphabet": sorted(base.alphabet),
        "merges": [[m.left, m.right] for m in base.merges],
    }
    if isinstance(model, RandomDropTokenizer):
        s = model.spec
        doc["variant"] = {"kind": "random_drop", "N": s.N, "k": s.k, "seed": s.seed,
                          "drop_set": sorted(s.drop_set)}
    elif isinstance(model, DuplicationTokenizer):
        s = model.spec
        doc["variant"] = {"kind": "duplication", "N": s.N, "k": s.k, "seed": s.seed,
                          "duplicated": sorted(s.duplicated)}
    elif padding:
        doc["variant"] = {"kind": "inflate", "extra": len(padding), "tokens": list(padding)}
    if padding and "variant" in doc and doc["variant"]["kind"] != "inflate":
        doc["padding"] = list(padding)
    if config is not None:
        doc["config"] = config
    return doc


def model_from_dict(doc: dict):
    try:
        version = doc["version"]
        if version != FORMAT_VERSION:
            raise ModelFormatError(f"unsupported model version {version!r}")
        variant = doc.get("variant")
        padding = doc.get("padding", [])
        if variant and variant["kind"] == "inflate":
            padding = variant["tokens"]
            if len(padding) != variant["extra"]:
                raise ModelFormatError("inflation block: extra does not match the token list")
        base = Tokenizer(doc["alphabet"], [tuple(p) for p in doc["merges"]], padding)
        if not variant or variant["kind"] == "inflate":
            return base
        kind = variant["kind"]
        if kind == "random_drop":
            spec = RandomDropSpec(variant["N"], variant["k"], variant["seed"], frozenset(variant["drop_set"]))
            return RandomDropTokenizer(base, spec)
        if kind == "duplication":
            spec = DuplicationSpec(variant["N"], variant["k"], variant["seed"], frozenset(variant["duplicated"]))
            return DuplicationTokenizer(base, spec)
        raise ModelFormatError(f"unknown variant kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from exc


def dumps_model(model, config: dict | None = None) -> str:
    return json.dumps(model_to_dict(model, config), ensure_ascii=False, indent=1) + "\n"


def save_model(model, path: str | os.PathLike, config: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_model(model, config))


def load_model(path: str | os.PathLike):
    """Load a base tokenizer or variant saved by :func:`save_model`."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ModelFormatError(f"cannot read model {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not a JSON document ({exc})") from exc
    return model_from_dict(doc)
