"""Regenerate ``desk_corpus.txt`` from the docstrings of the Python standard library.

The output is English prose, one sentence per line, with punctuation split
off words so that whitespace splitting yields word-like units.  Code samples
(doctest blocks, indented literal blocks) are skipped.

    python data/build_desk_corpus.py /usr/lib/python3.10 data/desk_corpus.txt
"""

import ast
import pathlib
import re
import sys

SENTENCE_END = re.compile(r"(?<=[.!?])\s+(?=[A-Z])")
WORD = re.compile(r"\w+(?:'\w+)?|[^\w\s]")
CODE_HINT = re.compile(r"^\s*(>>>|\.\.\.|\$ |[{}\[\]()]|def |class |import |return )")


def docstrings(root):
    skip = {"test", "tests", "site-packages", "dist-packages", "idlelib", "lib2to3"}
    for path in sorted(root.rglob("*.py")):
        if skip.intersection(path.relative_to(root).parts):
            continue
        try:
            tree = ast.parse(path.read_text(encoding="utf-8"))
        except (SyntaxError, UnicodeDecodeError, ValueError):
            continue
        for node in ast.walk(tree):
            if isinstance(node, (ast.Module, ast.ClassDef, ast.FunctionDef, ast.AsyncFunctionDef)):
                doc = ast.get_docstring(node)
                if doc:
                    yield doc


def prose_paragraphs(doc):
    for para in re.split(r"\n\s*\n", doc):
        lines = para.splitlines()
        if any(CODE_HINT.match(l) or l.startswith("    ") for l in lines):
            continue
        text = " ".join(l.strip() for l in lines)
        letters = sum(ch.isalpha() for ch in text)
        if len(text) < 20 or letters < 0.7 * len(text.replace(" ", "")):
            continue
        yield text


def main(root, out):
    seen = set()
    written = 0
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for doc in docstrings(pathlib.Path(root)):
            for para in prose_paragraphs(doc):
                for sentence in SENTENCE_END.split(para):
                    words = WORD.findall(sentence)
                    if len(words) < 4:
                        continue
                    line = " ".join(words).replace("#DUP", "# DUP")
                    if line in seen:
                        continue
                    seen.add(line)
                    fh.write(line + "\n")
                    written += 1
    print(f"wrote {written} lines to {out}")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
