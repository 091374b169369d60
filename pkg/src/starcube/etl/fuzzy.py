"""Approximate string lookup for cleaning misspelled dimension values.

Similarity is normalized Levenshtein over normalized text:

    similarity(a, b) = 1 - levenshtein(norm(a), norm(b)) / max(|norm(a)|, |norm(b)|)

where norm = trim + casefold + collapse internal whitespace. Ties resolve
to the lexicographically smallest reference.
"""

from __future__ import annotations

from ..errors import EmptyReferenceSet


def normalize(text: str) -> str:
    return " ".join(text.split()).casefold()


def levenshtein(a: str, b: str) -> int:
    """Classic edit distance (insert/delete/substitute, unit costs)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cost = 0 if ca == cb else 1
            cur.append(min(cur[-1] + 1, prev[j] + 1, prev[j - 1] + cost))
        prev = cur
    return prev[-1]


def similarity(a: str, b: str) -> float:
    na, nb = normalize(a), normalize(b)
    longest = max(len(na), len(nb))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(na, nb) / longest


def fuzzy_match(value: str, references, threshold: float):
    """Best reference for ``value`` or None (a miss).

    Returns ``(reference, similarity)`` for the most similar reference when
    that similarity reaches ``threshold``; exact matches score 1.0 and
    always win.
    """
    refs = sorted(references)
    if not refs:
        raise EmptyReferenceSet("fuzzy_match needs at least one reference")
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    best = None
    best_sim = -1.0
    for ref in refs:
        sim = similarity(value, ref)
        if sim > best_sim:
            best, best_sim = ref, sim
            if sim == 1.0:
                break
    if best_sim >= threshold:
        return best, best_sim
    return None
