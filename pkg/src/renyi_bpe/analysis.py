"""Entropy-change checks for dropped and duplicated tokens, and tokenizer comparisons."""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .bpe import Tokenizer, tokenize_corpus
from .corpus import Corpus
from .errors import HyperparameterError, LabError
from .metrics import (DEFAULT_ALPHA, DEFAULT_PERCENTILES, UnigramDistribution, renyi_efficiency,
                      renyi_entropy, score, shannon_entropy, unigram_distribution)
from .variants import render_decorated

ALPHA_GRID = (0.25, 0.5, 0.99, 1.0, 1.01, 2.0, 2.7, 3.0, 5.0)


# --- single drop ----------------------------------------------------------

@dataclass(frozen=True)
class DropConditionReport:
    token: str
    parents: tuple[str, str]
    c_x: int
    c_y: int
    c_z: int
    total: int
    alpha: float
    lhs: float
    rhs: float
    condition_holds: bool
    entropy_before: float
    entropy_after: float

    @property
    def actual_increase(self) -> bool:
        return self.entropy_after > self.entropy_before


def _power_sum(terms, alpha):
    if float(alpha).is_integer():
        a = int(alpha)
        return Fraction(sum(t ** a for t in terms if t))
    return math.fsum(t ** alpha for t in terms if t)


def drop_condition_sides(counts: Mapping[str, int], x: str, y: str, z: str, alpha: float):
    """Both sides of the closed-form condition for dropping ``x = (y, z)``.

    Exact rational arithmetic is used when ``alpha`` is an integer.
    """
    cx, cy, cz = counts.get(x, 0), counts.get(y, 0), counts.get(z, 0)
    T = sum(counts.values())
    S = _power_sum(counts.values(), alpha)
    if float(alpha).is_integer():
        a = int(alpha)
        lhs = (1 + Fraction(cx, T)) ** a
        rhs = 1 + Fraction((cx + cy) ** a + (cx + cz) ** a - cx ** a - cy ** a - cz ** a) / S
    else:
        lhs = (1 + cx / T) ** alpha
        rhs = 1 + math.fsum([(cx + cy) ** alpha, (cx + cz) ** alpha,
                             -(cx ** alpha), -(cy ** alpha), -(cz ** alpha)]) / S
    return lhs, rhs


def apply_drop_to_counts(counts: Mapping[str, int], x: str, y: str, z: str) -> dict[str, int]:
    """Counts after every occurrence of ``x`` is split into ``y z``."""
    cx = counts.get(x, 0)
    after = dict(counts)
    after[x] = 0
    after[y] = after.get(y, 0) + cx
    after[z] = after.get(z, 0) + cx
    return after


def drop_condition(counts: Mapping[str, int], x: str, parents: tuple[str, str],
                   alpha: float = DEFAULT_ALPHA) -> DropConditionReport:
    """Evaluate the sufficient condition for a drop of ``x`` to raise the
    order-``alpha`` Renyi entropy, alongside the directly recomputed entropies.

    ``x`` must be a key of ``counts`` (a zero count is allowed). Parents
    missing from ``counts`` count as zero. Self-pairs ``x = (y, y)`` are not
    supported because the count update differs.
    """
    y, z = parents
    if alpha <= 1:
        raise HyperparameterError(f"the drop condition requires alpha > 1, got {alpha}")
    if x not in counts:
        raise LabError(f"token {x!r} does not occur in the counts")
    if y == z:
        raise LabError(f"self-pair merge {x!r} = ({y!r}, {z!r}) is unsupported")
    if x in (y, z):
        raise LabError("a token cannot be its own parent")
    lhs, rhs = drop_condition_sides(counts, x, y, z, alpha)
    before = renyi_entropy(unigram_distribution(counts), alpha)
    after = renyi_entropy(unigram_distribution(apply_drop_to_counts(counts, x, y, z)), alpha)
    return DropConditionReport(
        token=x, parents=(y, z), c_x=counts[x], c_y=counts.get(y, 0), c_z=counts.get(z, 0),
        total=sum(counts.values()), alpha=float(alpha), lhs=float(lhs), rhs=float(rhs),
        condition_holds=bool(lhs > rhs), entropy_before=before, entropy_after=after)


# --- duplication ----------------------------------------------------------

def duplicate_distribution(dist: UnigramDistribution, x: str, k: int) -> UnigramDistribution:
    """Replace ``x`` by ``k`` duplicates sharing its probability equally."""
    if x not in dist.probs:
        raise LabError(f"token {x!r} is not in the support")
    if k < 2:
        raise HyperparameterError(f"duplication factor must be >= 2, got {k}")
    share = dist.probs[x] / k
    probs = {t: p for t, p in dist.probs.items() if t != x}
    for i in range(1, k + 1):
        probs[render_decorated(x, i)] = share
    return UnigramDistribution(probs, dist.total, dist.support_size + k - 1, dist.accounting_mode)


def predict_duplication_shannon(dist: UnigramDistribution, x: str, k: int) -> float:
    """Shannon entropy after duplicating ``x`` ``k`` ways: ``H + p(x) log2 k``."""
    if x not in dist.probs:
        raise LabError(f"token {x!r} is not in the support")
    if k < 2:
        raise HyperparameterError(f"duplication factor must be >= 2, got {k}")
    return shannon_entropy(dist) + dist.probs[x] * math.log2(k)


@dataclass(frozen=True)
class RenyiVerdict:
    alpha: float
    before: float
    after: float

    @property
    def margin(self) -> float:
        return self.after - self.before

    @property
    def increased(self) -> bool:
        return self.after > self.before


def check_duplication_renyi(dist: UnigramDistribution, x: str, k: int,
                            alphas: Sequence[float] = ALPHA_GRID) -> list[RenyiVerdict]:
    dup = duplicate_distribution(dist, x, k)
    return [RenyiVerdict(float(a), renyi_entropy(dist, a), renyi_entropy(dup, a)) for a in alphas]


# --- worked example -------------------------------------------------------

EXAMPLE_BASE = (0.4, 0.3, 0.2, 0.1)
EXAMPLE_FACTORS = (1, 2, 10)
EXAMPLE_COLUMNS = ("H", "H0.5", "H3", "Eff", "Eff0.5", "Eff3")
#: Published two-decimal values for the three rows (original, k=2, k=10).
REFERENCE_EXAMPLE_VALUES = {
    1: (1.85, 1.92, 1.66, 1.33, 1.38, 1.20),
    2: (2.25, 2.28, 2.13, 1.40, 1.42, 1.33),
    10: (3.18, 3.45, 2.39, 1.24, 1.35, 0.93),
}


def example_table(convention: str = "paper-table") -> dict[int, tuple[float, ...]]:
    """Entropies and efficiencies of the 4-token example and its duplicates of the first token."""
    base = UnigramDistribution.from_probs(EXAMPLE_BASE)
    first = sorted(base.probs)[0]
    rows = {}
    for k in EXAMPLE_FACTORS:
        d = base if k == 1 else duplicate_distribution(base, first, k)
        rows[k] = (shannon_entropy(d), renyi_entropy(d, 0.5), renyi_entropy(d, 3),
                   renyi_efficiency(d, 1, convention), renyi_efficiency(d, 0.5, convention),
                   renyi_efficiency(d, 3, convention))
    return rows


# --- randomized verification ----------------------------------------------

@dataclass
class CheckResult:
    name: str
    instances: int
    failures: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class VerificationReport:
    seed: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "passed": self.passed,
                "checks": [dict(asdict(c), passed=c.passed) for c in self.checks]}

    def to_table(self) -> str:
        width = max(len(c.name) for c in self.checks)
        lines = [f"{'check':<{width}}  {'result':<6}  {'n':>6}  {'fail':>5}  detail"]
        for c in self.checks:
            lines.append(f"{c.name:<{width}}  {'PASS' if c.passed else 'FAIL':<6}  "
                         f"{c.instances:>6}  {c.failures:>5}  {c.detail}")
        return "\n".join(lines)


def random_drop_instance(rng: np.random.Generator, max_vocab: int = 8, max_count: int = 20):
    """Random counts over 3..max_vocab tokens and distinct tokens ``x, y, z``."""
    m = int(rng.integers(3, max_vocab + 1))
    tokens = [f"t{i}" for i in range(m)]
    counts = {t: int(c) for t, c in zip(tokens, rng.integers(0, max_count + 1, size=m))}
    if sum(counts.values()) == 0:
        counts[tokens[0]] = 1
    x, y, z = (tokens[i] for i in rng.choice(m, size=3, replace=False))
    return counts, x, y, z


def random_count_distribution(rng: np.random.Generator, max_vocab: int = 8,
                              max_count: int = 20) -> UnigramDistribution:
    """Unigram distribution of random positive counts over 2..max_vocab tokens."""
    m = int(rng.integers(2, max_vocab + 1))
    counts = {f"t{i}": int(c) for i, c in enumerate(rng.integers(1, max_count + 1, size=m))}
    return unigram_distribution(counts)


def _entropy_by_rewriting(counts, x, y, z, alpha):
    # Materialize the token stream, rewrite each x as y z, and recount.
    stream = [t for t, c in sorted(counts.items()) for _ in range(c)]
    rewritten = []
    for t in stream:
        rewritten.extend((y, z) if t == x else (t,))
    before = renyi_entropy(unigram_distribution(Counter(stream)), alpha)
    after = renyi_entropy(unigram_distribution(Counter(rewritten)), alpha)
    return before, after


def _mutated_sides(counts, x, y, z, alpha):
    # Deliberately wrong: drops the -c(x)^alpha correction.
    lhs, rhs = drop_condition_sides(counts, x, y, z, alpha)
    S = _power_sum(counts.values(), alpha)
    return lhs, rhs + counts.get(x, 0) ** alpha / S


MUTATIONS: dict[str, Callable] = {"drop-condition": _mutated_sides}


def verify(seed: int = 0, instances: int = 1000, mutation: str | None = None,
           tolerance: float = 0.01) -> VerificationReport:
    """Run the worked-example regression and the three randomized entropy suites."""
    if mutation is not None and mutation not in MUTATIONS:
        raise HyperparameterError(f"unknown mutation {mutation!r}; choose from {sorted(MUTATIONS)}")
    sides = MUTATIONS[mutation] if mutation else drop_condition_sides
    report = VerificationReport(seed)
    rng = np.random.default_rng(seed)

    table = example_table()
    worst = max(abs(v - e) for k, row in REFERENCE_EXAMPLE_VALUES.items()
                for v, e in zip(table[k], row))
    bad = sum(abs(v - e) > tolerance for k, row in REFERENCE_EXAMPLE_VALUES.items()
              for v, e in zip(table[k], row))
    report.checks.append(CheckResult("example-table", 18, bad, f"max |error| = {worst:.4f}"))

    failures = 0
    for i in range(instances):
        counts, x, y, z = random_drop_instance(rng)
        alpha = (1.5, 2.0, 3.0, 5.0)[i % 4]
        lhs, rhs = sides(counts, x, y, z, alpha)
        before, after = _entropy_by_rewriting(counts, x, y, z, alpha)
        failures += (lhs > rhs) != (after > before)
    report.checks.append(CheckResult("drop-condition", instances, failures,
                                     "closed form vs rewritten stream, alpha in {1.5,2,3,5}"))

    dists = [random_count_distribution(rng) for _ in range(instances)]
    targets = [sorted(d.probs)[int(rng.integers(len(d.probs)))] for d in dists]
    worst_gap, bad = 0.0, 0
    for d, x in zip(dists, targets):
        h = shannon_entropy(d)
        for k in range(2, 11):
            gap = abs((predict_duplication_shannon(d, x, k) - h)
                      - (shannon_entropy(duplicate_distribution(d, x, k)) - h))
            worst_gap = max(worst_gap, gap)
            bad += gap > 1e-9
    report.checks.append(CheckResult("duplication-shannon", instances * 9, bad,
                                     f"max |gap| = {worst_gap:.2e}"))

    min_margin, bad = math.inf, 0
    for d, x in zip(dists, targets):
        for k in range(2, 11):
            for v in check_duplication_renyi(d, x, k):
                min_margin = min(min_margin, v.margin)
                bad += not v.increased
    report.checks.append(CheckResult("duplication-renyi", instances * 9 * len(ALPHA_GRID), bad,
                                     f"min margin = {min_margin:.3e} bits"))
    return report


# --- tokenizer comparison -------------------------------------------------

@dataclass(frozen=True)
class ComparisonRow:
    label: str
    kind: str
    hyperparameters: dict
    efficiency: float
    pct: float
    seq: float
    entropy: float
    vocab: int
    baseline: bool = False
    aggregate: str | None = None
    deltas: dict = field(default_factory=dict)


@dataclass
class ComparisonReport:
    rows: list[ComparisonRow]
    alpha: float
    percentiles: tuple[float, float]
    accounting: str
    convention: str

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "percentiles": list(self.percentiles),
                "accounting": self.accounting, "convention": self.convention,
                "rows": [asdict(r) for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_table(self) -> str:
        a = f"{self.alpha:g}"
        header = ["tokenizer", "N", "k", "seed", f"Eff{a}", "PCT", "SEQ", "H", "|V|", "dEff", "dPCT", "dSEQ"]
        body = []
        for r in self.rows:
            hp = r.hyperparameters
            body.append([r.label, str(hp.get("N", hp.get("extra", "-"))), str(hp.get("k", "-")),
                         str(hp.get("seed", "-")), f"{r.efficiency:.4f}", f"{r.pct:.4f}",
                         f"{r.seq:.2f}", f"{r.entropy:.3f}", _fmt_vocab(r.vocab),
                         f"{r.deltas.get('efficiency', 0.0):+.4f}", f"{r.deltas.get('pct', 0.0):+.4f}",
                         f"{r.deltas.get('seq', 0.0):+.2f}"])
        widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
        fmt = lambda row: "  ".join(c.ljust(w) if i == 0 else c.rjust(w)
                                    for i, (c, w) in enumerate(zip(row, widths)))
        return "\n".join([fmt(header), "  ".join("-" * w for w in widths)] + [fmt(r) for r in body])


def _fmt_vocab(v) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:.1f}"


def _label(tok) -> str:
    if getattr(tok, "kind", "bpe") == "bpe":
        return "inflate" if tok.padding else "baseline"
    return {"random_drop": "random-drop", "duplication": "duplication"}[tok.kind]


def _hyperparameters(tok, baseline: Tokenizer) -> dict:
    if hasattr(tok, "hyperparameters"):
        return dict(tok.hyperparameters)
    if tok.padding:
        return {"extra": len(tok.padding) - len(baseline.padding)}
    return {}


def _deltas(row_metrics, base_metrics):
    return {k: row_metrics[k] - base_metrics[k] for k in ("efficiency", "pct", "seq", "entropy", "vocab")}


def compare_tokenizers(corpus: Corpus, baseline: Tokenizer, variants: Sequence = (),
                       alpha: float = DEFAULT_ALPHA, percentiles: tuple[float, float] = DEFAULT_PERCENTILES,
                       accounting: str = "surfaced", convention: str = "consistent",
                       workers: int = 1) -> ComparisonReport:
    """Score the baseline and every variant on one corpus with identical metric settings.

    Random-Drop variants sharing (N, k) over several seeds additionally get an
    ``overall`` row (seed mean) and a ``best`` row (highest efficiency).
    """
    for v in variants:
        base = getattr(v, "base", v)
        if base.merges != baseline.merges or base.alphabet != baseline.alphabet:
            raise LabError(f"variant {_label(v)} does not decorate the given baseline")

    def measure(tok):
        tc = tokenize_corpus(tok, corpus, workers=workers)
        r = score(tc, alpha, percentiles, accounting, tok, convention)
        return {"efficiency": r.renyi_efficiency, "pct": r.percentile_freq, "seq": r.tokens_per_line,
                "entropy": r.shannon_entropy, "vocab": r.effective_vocab}

    base_m = measure(baseline)
    rows = [ComparisonRow("baseline", "bpe", {}, baseline=True,
                          deltas=_deltas(base_m, base_m), **base_m)]
    groups = defaultdict(list)
    for v in variants:
        m = measure(v)
        label = _label(v)
        kind = "inflate" if label == "inflate" else v.kind
        row = ComparisonRow(label, kind, _hyperparameters(v, baseline), deltas=_deltas(m, base_m), **m)
        rows.append(row)
        if row.kind == "random_drop":
            groups[(row.hyperparameters["N"], row.hyperparameters["k"])].append((row, m))
    for (N, k), members in groups.items():
        if len(members) < 2:
            continue
        seeds = [r.hyperparameters["seed"] for r, _ in members]
        mean = {key: float(np.mean([m[key] for _, m in members])) for key in base_m}
        rows.append(ComparisonRow("random-drop overall", "random_drop", {"N": N, "k": k, "seed": "mean"},
                                  aggregate="overall", deltas=_deltas(mean, base_m), **mean))
        best_row, best = max(members, key=lambda rm: (rm[1]["efficiency"], -seeds.index(rm[0].hyperparameters["seed"])))
        rows.append(ComparisonRow(f"random-drop best (by Eff{alpha:g})", "random_drop",
                                  {"N": N, "k": k, "seed": best_row.hyperparameters["seed"]},
                                  aggregate="best", deltas=_deltas(best, base_m), **best))
    return ComparisonReport(rows, float(alpha), tuple(percentiles), accounting, convention)
