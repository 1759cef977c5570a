"""Corpus synthesis: generate reference corpora and read/write record files.

A corpus file is UTF-8 JSON-lines, one record per line with fields
``mr``, ``personality``, ``ref``, ``ref_delex``, ``style_vector``,
``seed``, ``registry_version``, ``split``.  Synthesis is deterministic:
each record's generation seed derives from the global seed and the
record's (split, mr index, trait, reference index) coordinates, so
output files are byte-identical across runs and thread counts.
"""
from __future__ import annotations

import hashlib
import json
import os
import random
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .lexicon import Lexicon
from .mr import MeaningRepresentation, delexicalize, format_mr, load_mrs, parse_mr
from .personality import (
    REGISTRY_VERSION,
    TraitProfile,
    TRAITS,
    registry_length,
    resolve_profile,
)
from .pragmatics import MarkerSpec
from .realization import generate

SPLITS = ("train", "test")


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusRecord:
    mr_text: str
    personalities: tuple[str, ...]
    ref: str
    ref_delex: str
    style_vector: str
    seed: int
    registry_version: str
    split: str

    def __post_init__(self) -> None:
        expected = registry_length(self.registry_version)
        if len(self.style_vector) != expected:
            raise CorpusError(
                f"style vector length {len(self.style_vector)} does not match "
                f"registry version {self.registry_version} (length {expected})"
            )

    @property
    def personality(self) -> str:
        return ",".join(self.personalities)

    def to_json(self) -> str:
        return json.dumps(
            {
                "mr": self.mr_text,
                "personality": self.personality,
                "ref": self.ref,
                "ref_delex": self.ref_delex,
                "style_vector": self.style_vector,
                "seed": self.seed,
                "registry_version": self.registry_version,
                "split": self.split,
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "CorpusRecord":
        raw = json.loads(line)
        personalities = tuple(
            p for p in raw.get("personality", "").split(",") if p
        )
        return cls(
            mr_text=raw["mr"],
            personalities=personalities,
            ref=raw["ref"],
            ref_delex=raw.get("ref_delex", ""),
            style_vector=raw["style_vector"],
            seed=int(raw["seed"]),
            registry_version=raw.get("registry_version", REGISTRY_VERSION),
            split=raw.get("split", "train"),
        )


@dataclass(frozen=True)
class SplitSpec:
    """Reference allocation for one split.

    Exactly one of ``refs_per_mr`` (uniform) or ``target_total_per_trait``
    (distributed as evenly as possible, earlier MRs take the remainder)
    must be set.
    """

    mr_file: str | None = None
    refs_per_mr: int | None = None
    target_total_per_trait: int | None = None

    def __post_init__(self) -> None:
        if (self.refs_per_mr is None) == (self.target_total_per_trait is None):
            raise CorpusError(
                "set exactly one of refs_per_mr / target_total_per_trait"
            )
        if self.refs_per_mr is not None and self.refs_per_mr < 1:
            raise CorpusError("refs_per_mr must be >= 1")

    def allocation(self, mr_count: int) -> list[int]:
        if self.refs_per_mr is not None:
            return [self.refs_per_mr] * mr_count
        total = self.target_total_per_trait or 0
        if mr_count == 0:
            raise CorpusError("split has no MRs")
        base, remainder = divmod(total, mr_count)
        if base < 1 and remainder < 1:
            raise CorpusError("target total allocates zero references")
        return [base + (1 if i < remainder else 0) for i in range(mr_count)]


@dataclass(frozen=True)
class CorpusSpec:
    splits: Mapping[str, SplitSpec]
    traits: tuple[str, ...] = TRAITS
    seed: int = 0
    delexicalize: bool = True

    @classmethod
    def from_file(cls, path: str | Path) -> "CorpusSpec":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        splits = {}
        for split, entry in raw.get("splits", {}).items():
            if split not in SPLITS:
                raise CorpusError(f"unknown split: {split!r}")
            splits[split] = SplitSpec(
                mr_file=entry.get("mr_file"),
                refs_per_mr=entry.get("refs_per_mr"),
                target_total_per_trait=entry.get("target_total_per_trait"),
            )
        return cls(
            splits=splits,
            traits=tuple(raw.get("traits", TRAITS)),
            seed=int(raw["seed"]),
            delexicalize=bool(raw.get("delexicalize", True)),
        )


def derive_seed(global_seed: int, split: str, mr_index: int, trait: str,
                ref_index: int) -> int:
    """Platform-independent per-record seed."""
    key = f"{global_seed}:{split}:{mr_index}:{trait}:{ref_index}"
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def write_atomic(path: str | Path, content: str) -> None:
    """Write via a temp file + rename so interrupted runs leave no partials."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(handle, "w", encoding="utf-8") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_corpus(path: str | Path) -> list[CorpusRecord]:
    records = []
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), 1
    ):
        if not line.strip():
            continue
        try:
            records.append(CorpusRecord.from_json(line))
        except (json.JSONDecodeError, KeyError, CorpusError) as exc:
            raise CorpusError(f"{path}:{lineno}: {exc}") from exc
    return records


def _dedupe(mrs: list[MeaningRepresentation]) -> list[MeaningRepresentation]:
    seen: set[str] = set()
    unique = []
    for mr in mrs:
        key = format_mr(mr)
        if key not in seen:
            seen.add(key)
            unique.append(mr)
    return unique


def synthesize(
    spec: CorpusSpec,
    out_dir: str | Path,
    mrs_by_split: Mapping[str, list[MeaningRepresentation]] | None = None,
    lexicon: Lexicon | None = None,
    registry: tuple[MarkerSpec, ...] | None = None,
    profiles: Mapping[str, TraitProfile] | None = None,
    threads: int = 1,
) -> dict:
    """Generate corpus files for every split; returns a summary dict.

    MRs come from ``mrs_by_split`` when provided, otherwise from each
    split's ``mr_file``.  Records are emitted in canonical
    (mr index, trait, reference index) order regardless of thread count.
    """
    lexicon = lexicon or Lexicon.default()
    out_dir = Path(out_dir)
    profile_for = {
        trait: resolve_profile(trait, profiles) for trait in spec.traits
    }

    loaded: dict[str, list[MeaningRepresentation]] = {}
    for split, split_spec in spec.splits.items():
        if mrs_by_split is not None and split in mrs_by_split:
            mrs = list(mrs_by_split[split])
        elif split_spec.mr_file:
            mrs = load_mrs(split_spec.mr_file)
        else:
            raise CorpusError(f"split {split!r} has no MR source")
        loaded[split] = _dedupe(mrs)

    if "train" in loaded and "test" in loaded:
        train_keys = {format_mr(mr) for mr in loaded["train"]}
        overlap = [
            format_mr(mr) for mr in loaded["test"] if format_mr(mr) in train_keys
        ]
        if overlap:
            raise CorpusError(
                f"{len(overlap)} test MRs also appear in train, e.g. {overlap[0]}"
            )

    summary: dict = {
        "seed": spec.seed,
        "traits": list(spec.traits),
        "registry_version": REGISTRY_VERSION,
        "splits": {},
    }
    for split, split_spec in spec.splits.items():
        mrs = loaded[split]
        allocation = split_spec.allocation(len(mrs))
        jobs = []
        for trait in spec.traits:
            for mr_index, mr in enumerate(mrs):
                for ref_index in range(allocation[mr_index]):
                    jobs.append((mr_index, mr, trait, ref_index))
        # Canonical record order: (mr index, trait index, ref index).
        trait_pos = {trait: i for i, trait in enumerate(spec.traits)}
        jobs.sort(key=lambda j: (j[0], trait_pos[j[2]], j[3]))

        def _run(job: tuple) -> CorpusRecord:
            mr_index, mr, trait, ref_index = job
            seed = derive_seed(spec.seed, split, mr_index, trait, ref_index)
            realization = generate(
                mr, profile_for[trait], seed=seed,
                lexicon=lexicon, registry=registry,
            )
            ref_delex = ""
            if spec.delexicalize:
                _, ref_delex, _ = delexicalize(mr, realization.text)
            return CorpusRecord(
                mr_text=format_mr(mr),
                personalities=(trait,),
                ref=realization.text,
                ref_delex=ref_delex,
                style_vector=realization.style_vector.as_string(),
                seed=seed,
                registry_version=realization.style_vector.registry_version,
                split=split,
            )

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                records = list(pool.map(_run, jobs))
        else:
            records = [_run(job) for job in jobs]

        out_path = out_dir / f"{split}.jsonl"
        write_atomic(out_path, "".join(r.to_json() + "\n" for r in records))

        per_trait: dict[str, int] = {trait: 0 for trait in spec.traits}
        for record in records:
            per_trait[record.personalities[0]] += 1
        summary["splits"][split] = {
            "file": str(out_path),
            "unique_mrs": len(mrs),
            "records": len(records),
            "per_trait": per_trait,
        }

    write_atomic(
        out_dir / "summary.json",
        json.dumps(summary, indent=2, ensure_ascii=False) + "\n",
    )
    return summary


def mr_length_histogram(path_or_mrs: str | Path | Iterable[MeaningRepresentation]
                        ) -> dict[int, float]:
    """Fraction of MRs per slot count; fractions sum to 1."""
    if isinstance(path_or_mrs, (str, Path)):
        mrs = load_mrs(path_or_mrs)
    else:
        mrs = list(path_or_mrs)
    if not mrs:
        raise CorpusError("no MRs to histogram")
    counts: dict[int, int] = {}
    for mr in mrs:
        counts[len(mr.slots)] = counts.get(len(mr.slots), 0) + 1
    total = len(mrs)
    return {length: counts[length] / total for length in sorted(counts)}


# --- sample MR construction -------------------------------------------------

# Slot-count proportions used for the shipped sample MR files.
TRAIN_LENGTH_DISTRIBUTION = {3: 0.13, 4: 0.30, 5: 0.29, 6: 0.22, 7: 0.06, 8: 0.01}
TEST_LENGTH_DISTRIBUTION = {3: 0.02, 4: 0.04, 5: 0.06, 6: 0.15, 7: 0.35, 8: 0.37}

_NAME_ADJECTIVES = (
    "Golden", "Silver", "Blue", "Green", "Red", "Royal", "Old", "Rustic",
    "Quiet", "Merry", "Lazy", "Hungry",
)
_NAME_NOUNS = (
    "Fox", "Eagle", "Anchor", "Lantern", "Orchard", "Harvest", "Kettle",
    "Crown", "Garden", "Mill", "Harbour", "Sparrow",
)
NAME_POOL = tuple(
    f"The {adj} {noun}" for adj in _NAME_ADJECTIVES for noun in _NAME_NOUNS
) + ("Fitzbillies", "Browns Cambridge", "The Eagle")
NEAR_POOL = tuple(
    f"The {adj} {noun}" for adj in _NAME_ADJECTIVES[:4] for noun in _NAME_NOUNS[6:]
) + ("The Sorrento", "Burger King", "Adriatic", "Cafe Rouge")

VALUE_POOLS = {
    "eatType": ("pub", "coffee shop", "restaurant"),
    "food": ("Italian", "English", "French", "Chinese", "Indian", "Japanese"),
    "priceRange": ("cheap", "moderate", "high", "less than £20", "£20-25",
                   "more than £30"),
    "customerRating": ("low", "average", "decent", "excellent", "high",
                       "1 out of 5", "3 out of 5", "5 out of 5"),
    "area": ("riverside", "city centre"),
    "familyFriendly": ("yes", "no"),
}
_OPTIONAL_ATTRS = tuple(VALUE_POOLS) + ("near",)


def _counts_for(n: int, distribution: dict[int, float]) -> dict[int, int]:
    """Largest-remainder rounding of a distribution onto n items.

    The published proportions need not sum exactly to 1 (they are rounded
    to two decimals), so the difference may be of either sign; it is
    spread round-robin over the largest buckets.
    """
    raw = {k: n * p for k, p in distribution.items()}
    counts = {k: int(v) for k, v in raw.items()}
    diff = n - sum(counts.values())
    if diff > 0:
        order = sorted(
            distribution, key=lambda k: (raw[k] - counts[k], raw[k]), reverse=True
        )
        for i in range(diff):
            counts[order[i % len(order)]] += 1
    elif diff < 0:
        order = sorted(
            distribution, key=lambda k: (raw[k] - counts[k], -raw[k])
        )
        i = 0
        while diff < 0:
            key = order[i % len(order)]
            if counts[key] > 0:
                counts[key] -= 1
                diff += 1
            i += 1
    return counts


def sample_mrs(
    n: int,
    distribution: dict[int, float] | None = None,
    seed: int = 0,
    exclude: set[str] | None = None,
) -> list[MeaningRepresentation]:
    """Deterministically build n unique MRs with the given length mix.

    Every MR carries a name slot; ``exclude`` keeps the result disjoint
    from a previously generated set (canonical MR strings).
    """
    distribution = distribution or TRAIN_LENGTH_DISTRIBUTION
    rng = random.Random(seed)
    counts = _counts_for(n, distribution)
    taken = set(exclude or ())
    out: list[MeaningRepresentation] = []
    lengths: list[int] = []
    for length, count in sorted(counts.items()):
        lengths.extend([length] * count)
    rng.shuffle(lengths)
    for length in lengths:
        for _ in range(10_000):
            name = rng.choice(NAME_POOL)
            attrs = rng.sample(_OPTIONAL_ATTRS, length - 1)
            slots = [("name", name)]
            for attr in attrs:
                if attr == "near":
                    near = rng.choice(NEAR_POOL)
                    while near == name:
                        near = rng.choice(NEAR_POOL)
                    slots.append(("near", near))
                else:
                    slots.append((attr, rng.choice(VALUE_POOLS[attr])))
            mr = MeaningRepresentation(tuple(slots))
            key = format_mr(mr)
            if key not in taken:
                taken.add(key)
                out.append(mr)
                break
        else:
            raise CorpusError(
                f"could not find a fresh MR of length {length} after 10000 tries"
            )
    return out


def paper_scale_spec(out_seed: int = 0) -> tuple[CorpusSpec, dict[str, list[MeaningRepresentation]]]:
    """The full-scale setup: 3784 train MRs x 5 traits totalling 17771
    references per trait (88855 records), and 278 test MRs x 5 traits x 1
    reference (1390 records)."""
    train = sample_mrs(3784, TRAIN_LENGTH_DISTRIBUTION, seed=11)
    exclude = {format_mr(mr) for mr in train}
    test = sample_mrs(278, TEST_LENGTH_DISTRIBUTION, seed=13, exclude=exclude)
    spec = CorpusSpec(
        splits={
            "train": SplitSpec(target_total_per_trait=17771),
            "test": SplitSpec(refs_per_mr=1),
        },
        seed=out_seed,
    )
    return spec, {"train": train, "test": test}
