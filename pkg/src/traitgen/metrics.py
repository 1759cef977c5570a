"""Evaluation suite: semantic error detection, entropy, style profiling,
Pearson correlation, BLEU-4, ROUGE-L, and report assembly.

All computations are pure functions over texts tokenized with the
versioned tokenizer below; entropy and BLEU shift with tokenization, so
the tokenizer version is stamped into every report.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .lexicon import Lexicon
from .mr import MeaningRepresentation
from .personality import REGISTRY_VERSION
from .planner import AggregationOp
from .pragmatics import MarkerSpec, marker_registry

TOKENIZER_VERSION = "1"

# Lowercase; punctuation split into standalone tokens; intra-word
# apostrophes kept ("it's" is one token).
_TOKEN = re.compile(r"[a-z0-9]+(?:'[a-z0-9]+)*|[^\sa-z0-9]")


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


def ngrams(tokens: Sequence[str], n: int) -> list[tuple[str, ...]]:
    return [tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


class MetricsError(ValueError):
    pass


# --- semantic error detection ------------------------------------------------

@dataclass(frozen=True)
class ErrorReport:
    """Per-utterance semantic errors against its MR."""

    deletions: int
    repetitions: int
    substitutions: int
    deleted: tuple[str, ...] = ()
    repeated: tuple[str, ...] = ()
    substituted: tuple[str, ...] = ()

    def counts(self) -> tuple[int, int, int]:
        return (self.deletions, self.repetitions, self.substitutions)

    @property
    def total(self) -> int:
        return self.deletions + self.repetitions + self.substitutions


def _find_matches(text: str, variant: str, claimed: list[tuple[int, int]],
                  boundary: bool = True) -> int:
    """Count non-overlapping matches of variant, claiming their spans."""
    if boundary:
        pattern = re.compile(
            r"(?<![a-z0-9])" + re.escape(variant) + r"(?![a-z0-9])"
        )
    else:
        pattern = re.compile(re.escape(variant))
    hits = 0
    for match in pattern.finditer(text):
        span = (match.start(), match.end())
        if any(s < span[1] and span[0] < e for s, e in claimed):
            continue
        claimed.append(span)
        hits += 1
    return hits


def detect_errors(
    mr: MeaningRepresentation,
    text: str,
    lexicon: Lexicon | None = None,
) -> ErrorReport:
    """Detect deletions, repetitions, and substitutions in a candidate text.

    Per attribute, matching runs longest-variant-first and non-overlapping
    over the correct value's variants and every sibling value's variants:
    no mention at all is a deletion, more than one mention of the correct
    value is a repetition, and any mention of a sibling value is a
    substitution.  A wrong value is a substitution, never also a deletion.
    The restaurant name legitimately recurs as the subject of every
    sentence, so repetitions are not counted for ``name``.
    """
    lexicon = lexicon or Lexicon.default()
    if not text:
        raise MetricsError("empty candidate text")
    lowered = text.lower()
    candidates: list[tuple[str, str, str]] = []  # (variant, attr, kind)
    for attr, value in mr.slots:
        for variant in lexicon.value_variants(attr, value):
            candidates.append((variant.lower(), attr, "correct"))
        for _, variants in lexicon.sibling_variants(attr, value).items():
            for variant in variants:
                candidates.append((variant.lower(), attr, "sibling"))
    candidates.sort(key=lambda c: (-len(c[0]), c[0]))

    claimed: list[tuple[int, int]] = []
    correct: Counter = Counter()
    sibling: Counter = Counter()
    for variant, attr, kind in candidates:
        hits = _find_matches(lowered, variant, claimed)
        if hits:
            (correct if kind == "correct" else sibling)[attr] += hits

    deleted, repeated, substituted = [], [], []
    repetitions = 0
    for attr, _ in mr.slots:
        if correct[attr] == 0 and sibling[attr] == 0:
            deleted.append(attr)
        if sibling[attr] >= 1:
            substituted.append(attr)
        if attr != "name" and correct[attr] > 1:
            repeated.append(attr)
            repetitions += correct[attr] - 1
    return ErrorReport(
        deletions=len(deleted),
        repetitions=repetitions,
        substitutions=len(substituted),
        deleted=tuple(deleted),
        repeated=tuple(repeated),
        substituted=tuple(substituted),
    )


def error_ratios(
    reports_by_personality: Mapping[str, Iterable[ErrorReport]],
    unique_mr_count: int,
) -> dict[str, dict[str, float]]:
    """Total error counts per personality normalized by unique MR count."""
    if unique_mr_count <= 0:
        raise MetricsError("unique_mr_count must be positive")
    out = {}
    for personality, reports in reports_by_personality.items():
        totals = [0, 0, 0]
        for report in reports:
            counts = report.counts()
            for i in range(3):
                totals[i] += counts[i]
        out[personality] = {
            "del": totals[0] / unique_mr_count,
            "rep": totals[1] / unique_mr_count,
            "sub": totals[2] / unique_mr_count,
        }
    return out


# --- entropy ------------------------------------------------------------------

def entropy(texts: Sequence[str], max_n: int = 1) -> float:
    """Shannon entropy in bits over the pooled 1..max_n gram distribution."""
    if max_n not in (1, 2, 3):
        raise MetricsError("max_n must be 1, 2, or 3")
    counts: Counter = Counter()
    for text in texts:
        tokens = tokenize(text)
        for n in range(1, max_n + 1):
            counts.update(ngrams(tokens, n))
    total = sum(counts.values())
    if total == 0:
        raise MetricsError("no tokens in corpus")
    h = 0.0
    for count in counts.values():
        p = count / total
        h -= p * math.log2(p)
    return h


# --- style profiling ----------------------------------------------------------

@dataclass(frozen=True)
class StyleProfile:
    """Average per-text marker and aggregation-cue counts."""

    marker_counts: Mapping[str, float]
    aggregation_counts: Mapping[str, float]
    text_count: int
    method: str = "surface"

    def vector(self) -> list[float]:
        agg = [self.aggregation_counts[op.value] for op in AggregationOp]
        markers = [self.marker_counts[k] for k in sorted(self.marker_counts)]
        return agg + markers


def _surface_patterns(registry: tuple[MarkerSpec, ...]) -> list[tuple[str, str]]:
    """(surface string, family id) pairs for marker counting."""
    patterns = []
    for spec in registry:
        for variant in spec.variants:
            surface = variant.split("{name}")[0].strip()
            surface = surface.rstrip("?!. ").strip() or variant
            patterns.append((surface.lower(), spec.id))
    return patterns


_SENTENCE_END = re.compile(r"[.!?]")


def style_profile(
    texts: Sequence[str],
    registry: tuple[MarkerSpec, ...] | None = None,
) -> StyleProfile:
    """Count marker-family and aggregation-cue surface occurrences.

    Counting is word-boundary, longest-surface-first, and non-overlapping,
    so "ok?" (tag question) is never double-counted as "ok"
    (acknowledgement).  Aggregation cues use surface heuristics: sentence
    terminators for period splits, " with " for with-cues, "also" for
    also-cues, "and it"/", it" for conjunctions, and remaining "and"
    occurrences for merges.
    """
    registry = registry or marker_registry()
    if not texts:
        raise MetricsError("no texts to profile")
    marker_totals: Counter = Counter({spec.id: 0 for spec in registry})
    agg_totals: Counter = Counter({op.value: 0 for op in AggregationOp})
    patterns = sorted(
        _surface_patterns(registry), key=lambda p: (-len(p[0]), p[0])
    )
    for text in texts:
        lowered = text.lower()
        claimed: list[tuple[int, int]] = []
        for surface, family in patterns:
            boundary = bool(re.match(r"[a-z0-9]", surface))
            hits = _find_matches(lowered, surface, claimed, boundary=boundary)
            marker_totals[family] += hits
        sentences = len(_SENTENCE_END.findall(lowered))
        with_cues = lowered.count(" with ")
        also_cues = len(re.findall(r"\balso\b", lowered))
        conjunctions = len(re.findall(r"\band it\b|, it ", lowered))
        total_ands = len(re.findall(r"\band\b", lowered))
        agg_totals["period"] += sentences
        agg_totals["with_cue"] += with_cues
        agg_totals["also_cue"] += also_cues
        agg_totals["conjunction"] += conjunctions
        agg_totals["all_merge"] += max(
            0, total_ands - len(re.findall(r"\band it\b", lowered))
        )
    n = len(texts)
    return StyleProfile(
        marker_counts={k: v / n for k, v in marker_totals.items()},
        aggregation_counts={k: v / n for k, v in agg_totals.items()},
        text_count=n,
    )


# --- Pearson correlation --------------------------------------------------------

def _betacf(a: float, b: float, x: float) -> float:
    max_iterations = 300
    eps = 3e-14
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iterations + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h


def _betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log(1.0 - x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_tailed(t: float, df: int) -> float:
    """P(|T| >= t) for Student's t with df degrees of freedom."""
    if df <= 0:
        raise MetricsError("degrees of freedom must be positive")
    x = df / (df + t * t)
    return _betainc(df / 2.0, 0.5, x)


def pearson(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Pearson r and two-tailed p (t approximation with n-2 df)."""
    n = len(x)
    if n != len(y):
        raise MetricsError("length mismatch")
    if n < 3:
        raise MetricsError("need at least 3 points")
    mean_x = math.fsum(x) / n
    mean_y = math.fsum(y) / n
    dx = [v - mean_x for v in x]
    dy = [v - mean_y for v in y]
    var_x = math.fsum(a * a for a in dx)
    var_y = math.fsum(b * b for b in dy)
    if var_x == 0.0 or var_y == 0.0:
        raise MetricsError("zero variance")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(var_x * var_y)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return r, 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return r, student_t_two_tailed(abs(t), n - 2)


# --- BLEU-4 / ROUGE-L -----------------------------------------------------------

def bleu4(
    candidates: Sequence[str],
    references: Sequence[Sequence[str]],
) -> float:
    """Corpus-level BLEU-4 with brevity penalty and multi-reference clipping."""
    if not candidates:
        raise MetricsError("empty hypothesis set")
    if len(candidates) != len(references):
        raise MetricsError("candidates/references length mismatch")
    clipped = [0] * 4
    totals = [0] * 4
    cand_length = 0
    ref_length = 0
    for candidate, refs in zip(candidates, references):
        if not refs:
            raise MetricsError("candidate with no references")
        cand_tokens = tokenize(candidate)
        ref_tokens = [tokenize(r) for r in refs]
        cand_length += len(cand_tokens)
        ref_length += min(
            (len(rt) for rt in ref_tokens),
            key=lambda length: (abs(length - len(cand_tokens)), length),
        )
        for n in range(1, 5):
            cand_counts = Counter(ngrams(cand_tokens, n))
            totals[n - 1] += sum(cand_counts.values())
            max_ref: Counter = Counter()
            for rt in ref_tokens:
                for gram, count in Counter(ngrams(rt, n)).items():
                    if count > max_ref[gram]:
                        max_ref[gram] = count
            clipped[n - 1] += sum(
                min(count, max_ref[gram]) for gram, count in cand_counts.items()
            )
    # Orders with no candidate n-grams at all (very short corpora) drop
    # out of the geometric mean instead of zeroing the score.
    precisions = [
        clipped[i] / totals[i] for i in range(4) if totals[i] > 0
    ]
    if not precisions or min(precisions) == 0.0 or cand_length == 0:
        return 0.0
    brevity = (
        1.0 if cand_length > ref_length
        else math.exp(1.0 - ref_length / cand_length)
    )
    return brevity * math.exp(
        sum(math.log(p) for p in precisions) / len(precisions)
    )


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for token_a in a:
        current = [0]
        for j, token_b in enumerate(b, 1):
            if token_a == token_b:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(candidate: str, references: Sequence[str]) -> float:
    """ROUGE-L F-measure (beta = 1), max over references."""
    if not references:
        raise MetricsError("no references")
    cand_tokens = tokenize(candidate)
    best = 0.0
    for reference in references:
        ref_tokens = tokenize(reference)
        lcs = _lcs_length(cand_tokens, ref_tokens)
        if lcs == 0 or not cand_tokens or not ref_tokens:
            continue
        precision = lcs / len(cand_tokens)
        recall = lcs / len(ref_tokens)
        score = 2 * precision * recall / (precision + recall)
        best = max(best, score)
    return best


def rouge_l_corpus(
    candidates: Sequence[str], references: Sequence[Sequence[str]]
) -> float:
    if not candidates or len(candidates) != len(references):
        raise MetricsError("empty or mismatched hypothesis set")
    return sum(
        rouge_l(c, r) for c, r in zip(candidates, references)
    ) / len(candidates)


# --- report assembly --------------------------------------------------------------

def _group_texts(records) -> dict[str, list]:
    grouped: dict[str, list] = {}
    for record in records:
        grouped.setdefault(record.personality, []).append(record)
    return grouped


def report(
    corpus_records: Sequence,
    candidate_records: Sequence | None = None,
    lexicon: Lexicon | None = None,
    registry: tuple[MarkerSpec, ...] | None = None,
) -> dict:
    """Assemble the full evaluation report as a JSON-serializable dict.

    With candidates, semantic errors, entropy, BLEU/ROUGE-L, and
    per-personality profile correlations are computed for the candidate
    outputs against the reference corpus.  Without candidates the corpus
    is evaluated against itself (errors should be zero by construction)
    and correlations become the cross-personality profile matrix.
    """
    from .mr import parse_mr  # local import to keep module load light

    lexicon = lexicon or Lexicon.default()
    registry = registry or marker_registry()
    refs_by_personality = _group_texts(corpus_records)
    eval_records = (
        list(candidate_records) if candidate_records else list(corpus_records)
    )
    eval_by_personality = _group_texts(eval_records)

    errors = {}
    for personality, records in sorted(eval_by_personality.items()):
        reports = [
            detect_errors(parse_mr(record.mr_text), record.ref, lexicon)
            for record in records
        ]
        unique_mrs = len({record.mr_text for record in records})
        errors[personality] = error_ratios(
            {personality: reports}, unique_mrs
        )[personality]

    eval_texts = [record.ref for record in eval_records]
    entropy_block = {
        "n1": entropy(eval_texts, 1),
        "n12": entropy(eval_texts, 2),
        "n123": entropy(eval_texts, 3),
    }

    marker_profile = {}
    aggregation_profile = {}
    profiles: dict[str, StyleProfile] = {}
    for personality, records in sorted(eval_by_personality.items()):
        profile = style_profile([r.ref for r in records], registry)
        profiles[personality] = profile
        marker_profile[personality] = dict(profile.marker_counts)
        aggregation_profile[personality] = dict(profile.aggregation_counts)

    correlations: dict = {}
    bleu_score = None
    rouge_score = None
    if candidate_records:
        for personality in sorted(eval_by_personality):
            if personality not in refs_by_personality:
                continue
            ref_profile = style_profile(
                [r.ref for r in refs_by_personality[personality]], registry
            )
            r, p = pearson(
                ref_profile.vector(), profiles[personality].vector()
            )
            correlations[personality] = {"r": r, "p": p}
        refs_by_key: dict[tuple[str, str], list[str]] = {}
        for record in corpus_records:
            refs_by_key.setdefault(
                (record.mr_text, record.personality), []
            ).append(record.ref)
        cands, multirefs = [], []
        for record in eval_records:
            key = (record.mr_text, record.personality)
            if key not in refs_by_key:
                raise MetricsError(
                    f"candidate has no matching references: {key}"
                )
            cands.append(record.ref)
            multirefs.append(refs_by_key[key])
        bleu_score = bleu4(cands, multirefs)
        rouge_score = rouge_l_corpus(cands, multirefs)
    else:
        personalities = sorted(profiles)
        for i, first in enumerate(personalities):
            for second in personalities[i + 1:]:
                r, p = pearson(
                    profiles[first].vector(), profiles[second].vector()
                )
                correlations[f"{first}/{second}"] = {"r": r, "p": p}

    return {
        "errors": errors,
        "entropy": entropy_block,
        "marker_profile": marker_profile,
        "aggregation_profile": aggregation_profile,
        "correlations": correlations,
        "bleu": bleu_score,
        "rouge_l": rouge_score,
        "tokenizer_version": TOKENIZER_VERSION,
        "registry_version": REGISTRY_VERSION,
        "profile_method": "surface",
        "entropy_pooling": "pooled 1..n grams",
    }


def render_report_markdown(data: dict) -> str:
    """Render a report dict as markdown tables."""
    lines = ["# Evaluation report", ""]
    lines.append("## Semantic error ratios (per unique MR)")
    lines.append("")
    lines.append("| personality | del | rep | sub |")
    lines.append("|---|---|---|---|")
    for personality, row in sorted(data.get("errors", {}).items()):
        lines.append(
            f"| {personality} | {row['del']:.4f} | {row['rep']:.4f} "
            f"| {row['sub']:.4f} |"
        )
    lines.append("")
    lines.append("## Entropy (bits)")
    lines.append("")
    ent = data.get("entropy", {})
    lines.append("| 1-grams | 1-2grams | 1-3grams |")
    lines.append("|---|---|---|")
    lines.append(
        f"| {ent.get('n1', 0):.2f} | {ent.get('n12', 0):.2f} "
        f"| {ent.get('n123', 0):.2f} |"
    )
    lines.append("")
    for section, title in (
        ("marker_profile", "Pragmatic marker usage (avg count per text)"),
        ("aggregation_profile", "Aggregation cues (avg count per text)"),
    ):
        table = data.get(section, {})
        if not table:
            continue
        personalities = sorted(table)
        keys = sorted(next(iter(table.values())))
        lines.append(f"## {title}")
        lines.append("")
        lines.append("| parameter | " + " | ".join(personalities) + " |")
        lines.append("|---" * (len(personalities) + 1) + "|")
        for key in keys:
            row = " | ".join(f"{table[p][key]:.3f}" for p in personalities)
            lines.append(f"| {key} | {row} |")
        lines.append("")
    correlations = data.get("correlations", {})
    if correlations:
        lines.append("## Profile correlations")
        lines.append("")
        lines.append("| pair | r | p |")
        lines.append("|---|---|---|")
        for key, row in sorted(correlations.items()):
            lines.append(f"| {key} | {row['r']:.3f} | {row['p']:.3g} |")
        lines.append("")
    if data.get("bleu") is not None:
        lines.append(f"BLEU-4: {data['bleu']:.4f}")
        lines.append("")
    if data.get("rouge_l") is not None:
        lines.append(f"ROUGE-L: {data['rouge_l']:.4f}")
        lines.append("")
    lines.append(
        f"tokenizer v{data.get('tokenizer_version')}, "
        f"registry v{data.get('registry_version')}, "
        f"profiles: {data.get('profile_method')}, "
        f"entropy: {data.get('entropy_pooling')}"
    )
    lines.append("")
    return "\n".join(lines)
