"""Free-group words, finitely presented groups and Fox calculus.

Words are tuples of ``(symbol, sign)`` letters with ``sign`` in ``{+1, -1}``.
A :class:`Presentation` keeps its relators freely reduced and remembers an
optional meridian generator, which the knot-group code relies on.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Letter = Tuple[str, int]
Word = Tuple[Letter, ...]

DEFAULT_TIETZE_BUDGET = 10_000

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*([+-]?\d+))?\s*")


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

def free_reduce(w: Sequence[Letter]) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    out: List[Letter] = []
    for sym, e in w:
        if out and out[-1][0] == sym and out[-1][1] == -e:
            out.pop()
        else:
            out.append((sym, e))
    return tuple(out)


def cyclic_reduce(w: Sequence[Letter]) -> Word:
    """Free reduction followed by stripping inverse pairs at the two ends."""
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i][0] == w[j][0] and w[i][1] == -w[j][1]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def inverse(w: Sequence[Letter]) -> Word:
    return tuple((s, -e) for s, e in reversed(w))


def power(w: Sequence[Letter], n: int) -> Word:
    if n < 0:
        return free_reduce(inverse(w) * (-n))
    return free_reduce(tuple(w) * n)


def concat(*words: Sequence[Letter]) -> Word:
    out: List[Letter] = []
    for w in words:
        out.extend(w)
    return free_reduce(out)


def gen(sym: str, exp: int = 1) -> Word:
    """The word ``sym^exp``."""
    e = 1 if exp > 0 else -1
    return tuple((sym, e) for _ in range(abs(exp)))


def exponent_sum(w: Sequence[Letter], sym: str) -> int:
    return sum(e for s, e in w if s == sym)


def symbols(w: Sequence[Letter]) -> List[str]:
    seen: Dict[str, None] = {}
    for s, _ in w:
        seen.setdefault(s, None)
    return list(seen)


def parse_word(text: str) -> Word:
    """Parse ``x^2*mu^3*x^-1`` (``*`` or whitespace separated) into a word.

    The literal ``1`` (or an empty string) is the empty word.
    """
    text = text.strip()
    if text in ("", "1"):
        return ()
    letters: List[Letter] = []
    for chunk in re.split(r"[*\s]+", text):
        if not chunk:
            continue
        pos = 0
        while pos < len(chunk):
            m = _TOKEN.match(chunk, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse word {text!r} near {chunk[pos:]!r}")
            sym = m.group(1)
            exp = int(m.group(2)) if m.group(2) is not None else 1
            letters.extend(gen(sym, exp))
            pos = m.end()
            # a bare symbol glued to the next one is ambiguous; forbid it
            if pos < len(chunk) and m.group(2) is None:
                raise ValueError(f"ambiguous word {text!r}; separate letters with '*'")
    return free_reduce(letters)


def format_word(w: Sequence[Letter]) -> str:
    """Syllable form: ``x^2*mu^3*x^-1``; the empty word prints as ``1``."""
    if not w:
        return "1"
    parts: List[str] = []
    run_sym, run_exp = w[0][0], 0
    for s, e in w:
        if s == run_sym and (run_exp == 0 or (run_exp > 0) == (e > 0)):
            run_exp += e
        else:
            parts.append(run_sym if run_exp == 1 else f"{run_sym}^{run_exp}")
            run_sym, run_exp = s, e
    parts.append(run_sym if run_exp == 1 else f"{run_sym}^{run_exp}")
    return "*".join(parts)


def substitute(w: Sequence[Letter], sym: str, replacement: Sequence[Letter]) -> Word:
    """Replace every occurrence of ``sym`` by ``replacement``."""
    inv = inverse(replacement)
    out: List[Letter] = []
    for s, e in w:
        if s == sym:
            out.extend(replacement if e > 0 else inv)
        else:
            out.append((s, e))
    return free_reduce(out)


def rename(w: Sequence[Letter], mapping: Dict[str, str]) -> Word:
    return tuple((mapping.get(s, s), e) for s, e in w)


def _word_key(w: Word):
    return (len(w), [(s, -e) for s, e in w])


def canonical_relator(w: Sequence[Letter]) -> Word:
    """Least representative of ``w`` up to cyclic permutation and inversion."""
    w = cyclic_reduce(w)
    if not w:
        return ()
    best = None
    for cand in (w, inverse(w)):
        for i in range(len(cand)):
            rot = tuple(cand[i:] + cand[:i])
            if best is None or _word_key(rot) < _word_key(best):
                best = rot
    return best


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    generators: Tuple[str, ...]
    relators: Tuple[Word, ...] = ()
    meridian: Optional[str] = None

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generator names in {gens}")
        rels = tuple(free_reduce(r) for r in self.relators)
        known = set(gens)
        for r in rels:
            for s, _ in r:
                if s not in known:
                    raise ValueError(f"relator uses unknown generator {s!r}")
        if self.meridian is not None and self.meridian not in known:
            raise ValueError(f"meridian {self.meridian!r} is not a generator")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)

    @property
    def deficiency(self) -> int:
        return len(self.generators) - len(self.relators)

    def with_relators(self, *extra: Sequence[Letter]) -> "Presentation":
        return Presentation(self.generators, self.relators + tuple(extra), self.meridian)

    def with_generators(self, *extra: str) -> "Presentation":
        return Presentation(self.generators + tuple(extra), self.relators, self.meridian)

    def is_empty(self) -> bool:
        return not self.generators and not self.relators

    def canonical(self) -> "Presentation":
        """Relators in canonical cyclic form, sorted and deduplicated."""
        rels = sorted({canonical_relator(r) for r in self.relators} - {()}, key=_word_key)
        return Presentation(tuple(sorted(self.generators)), tuple(rels), self.meridian)

    def to_text(self) -> str:
        gens = ",".join(self.generators)
        rels = ", ".join(format_word(r) for r in self.relators)
        return f"gens: {gens} ; rels: {rels}"

    def __str__(self) -> str:
        gens = ", ".join(self.generators)
        rels = ", ".join(format_word(r) for r in self.relators)
        return f"< {gens} | {rels} >"


def parse_presentation(text: str, meridian: Optional[str] = None) -> Presentation:
    """Parse ``gens: x,y,mu ; rels: x^2*mu^3*x^-1*mu^-3``."""
    m = re.fullmatch(r"\s*gens:\s*(.*?)\s*;\s*rels:\s*(.*?)\s*", text, flags=re.S)
    if not m:
        raise ValueError("presentation must look like 'gens: a,b ; rels: w1, w2'")
    gens = tuple(g.strip() for g in m.group(1).split(",") if g.strip())
    rels = tuple(parse_word(r) for r in m.group(2).split(",") if r.strip())
    if meridian is None and "mu" in gens:
        meridian = "mu"
    return Presentation(gens, rels, meridian)


# ---------------------------------------------------------------------------
# Tietze simplification
# ---------------------------------------------------------------------------

def _occurrences(w: Word, sym: str) -> int:
    return sum(1 for s, _ in w if s == sym)


def _solve_for(w: Word, sym: str) -> Word:
    """Given a relator containing ``sym`` exactly once, express ``sym``.

    Writing ``w = a sym^e b`` the relation ``w = 1`` gives
    ``sym^e = a^-1 b^-1``.
    """
    i = next(k for k, (s, _) in enumerate(w) if s == sym)
    a, e, b = w[:i], w[i][1], w[i + 1:]
    value = concat(inverse(a), inverse(b))
    return value if e > 0 else inverse(value)


def _tidy(rels: Iterable[Word]) -> List[Word]:
    out: Dict[Word, None] = {}
    for r in rels:
        c = canonical_relator(r)
        if c:
            out.setdefault(c, None)
    return sorted(out, key=_word_key)


def tietze_simplify(p: Presentation, budget: int = DEFAULT_TIETZE_BUDGET,
                    protect: Iterable[str] = (), max_growth: int = 4
                    ) -> Tuple[Presentation, bool]:
    """Shrink ``p`` by deterministic Tietze moves.

    Each step scans relators from the shortest up (lexicographic tie-break)
    and removes the first generator that occurs exactly once in one of them,
    substituting its solved value everywhere.  The meridian and any names in
    ``protect`` are removed only when nothing else can go.  A substitution
    that would grow the total relator length by more than ``max_growth``
    times the solved relator's length is skipped, which keeps the process
    bounded.  Every scanned relator costs one step of ``budget``.

    Returns the simplified presentation and a flag that is true exactly when
    the result has no generators and no relators, i.e. a proof that the
    group is trivial.
    """
    guarded = set(protect)
    if p.meridian is not None:
        guarded.add(p.meridian)
    gens = list(p.generators)
    rels = _tidy(p.relators)
    steps = 0
    changed = True
    while changed and steps < budget:
        changed = False
        for allow_guarded in (False, True):
            for r in rels:
                steps += 1
                if steps > budget:
                    break
                once = sorted({s for s, _ in r if _occurrences(r, s) == 1})
                candidates = [s for s in once if (s in guarded) == allow_guarded]
                if not candidates:
                    continue
                total = sum(len(x) for x in rels)
                for sym in candidates:
                    value = _solve_for(r, sym)
                    new_rels = [substitute(x, sym, value) for x in rels if x is not r]
                    new_total = sum(len(x) for x in new_rels)
                    if len(r) > 2 and new_total > total + max_growth * len(r):
                        continue
                    rels = _tidy(new_rels)
                    gens.remove(sym)
                    changed = True
                    break
                if changed:
                    break
            if changed:
                break
    meridian = p.meridian if p.meridian in gens else None
    result = Presentation(tuple(gens), tuple(rels), meridian)
    return result, result.is_empty()


# ---------------------------------------------------------------------------
# Fox calculus
# ---------------------------------------------------------------------------

FoxSum = Dict[Word, int]


def fox_derivative(w: Sequence[Letter], sym: str) -> FoxSum:
    """Fox derivative of ``w`` with respect to ``sym``.

    The result is a formal integer combination of group-ring words, stored as
    ``{word: coefficient}`` with zero coefficients dropped.  Each word is the
    freely reduced prefix produced by the product rule.
    """
    acc: Counter = Counter()
    prefix: List[Letter] = []
    for s, e in w:
        if s == sym:
            if e > 0:
                acc[free_reduce(prefix)] += 1
            else:
                acc[free_reduce(prefix + [(s, -1)])] -= 1
        prefix.append((s, e))
    return {k: v for k, v in acc.items() if v}


def fox_add(a: FoxSum, b: FoxSum) -> FoxSum:
    acc = Counter(a)
    acc.update(b)
    return {k: v for k, v in acc.items() if v}


def fox_left_multiply(u: Sequence[Letter], a: FoxSum) -> FoxSum:
    acc: Counter = Counter()
    for word, c in a.items():
        acc[concat(u, word)] += c
    return {k: v for k, v in acc.items() if v}
