"""Slow, independent reference implementations used only by the tests.

None of these import the code paths they check.
"""
from __future__ import annotations

import heapq
import math
from collections import Counter
from functools import lru_cache
from itertools import product


# --- alignment ------------------------------------------------------------

def weighted_alignment_cost(src, hyp):
    """Uniform-cost search over alignment states; costs in edit units."""
    n, m = len(src), len(hyp)
    dist = {(0, 0): 0.0}
    heap = [(0.0, 0, 0)]
    while heap:
        d, i, j = heapq.heappop(heap)
        if (i, j) == (n, m):
            return d
        if d > dist.get((i, j), math.inf):
            continue
        moves = []
        if i < n and j < m:
            a, b = src[i], hyp[j]
            if a == b:
                moves.append((i + 1, j + 1, 0.0))
            else:
                moves.append((i + 1, j + 1, 0.5 if a.lower() == b.lower() else 1.0))
        if i < n:
            moves.append((i + 1, j, 1.0))
        if j < m:
            moves.append((i, j + 1, 1.0))
        if i + 1 < n and j + 1 < m and src[i] == hyp[j + 1] and src[i + 1] == hyp[j] and src[i] != src[i + 1]:
            moves.append((i + 2, j + 2, 1.0))
        for ni, nj, c in moves:
            nd = d + c
            if nd < dist.get((ni, nj), math.inf):
                dist[(ni, nj)] = nd
                heapq.heappush(heap, (nd, ni, nj))
    raise AssertionError("unreachable")


def unit_osa_distance(a, b):
    """Plain unit-cost optimal-string-alignment distance (no case discount)."""
    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0 or j == 0:
            return i + j
        best = min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))
        if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
            best = min(best, d(i - 2, j - 2) + 1)
        return best
    return d(len(a), len(b))


def ops_cost(ops, src, hyp):
    """Cost of an operation list produced by gec_lab.alignment.align."""
    total = 0.0
    for kind, s0, s1, h0, h1 in ops:
        if kind == "M":
            assert src[s0] == hyp[h0]
        elif kind == "S":
            total += 0.5 if src[s0].lower() == hyp[h0].lower() else 1.0
        else:
            total += 1.0
    return total


def apply_naive(src, edits):
    """Apply (start, end, replacement) edits right to left."""
    out = list(src)
    for start, end, rep in sorted(edits, key=lambda e: (e[0], e[1]), reverse=True):
        out[start:end] = list(rep)
    return out


# --- M2 -------------------------------------------------------------------

def _levenshtein(a, b):
    @lru_cache(maxsize=None)
    def d(i, j):
        if i == len(a) or j == len(b):
            return (len(a) - i) + (len(b) - j)
        return min(d(i + 1, j + 1) + (a[i] != b[j]), d(i + 1, j) + 1, d(i, j + 1) + 1)
    return d(0, 0)


def optimal_paths(src, hyp):
    """Every minimum unit-cost Levenshtein path, as lists of (u, v, is_match) arcs."""
    n, m = len(src), len(hyp)
    target = _levenshtein(tuple(src), tuple(hyp))
    paths = []

    def walk(i, j, cost, arcs):
        if cost + abs((n - i) - (m - j)) > target:
            return
        if (i, j) == (n, m):
            if cost == target:
                paths.append(list(arcs))
            return
        if i < n and j < m:
            same = src[i] == hyp[j]
            arcs.append(((i, j), (i + 1, j + 1), same))
            walk(i + 1, j + 1, cost + (not same), arcs)
            arcs.pop()
        if i < n:
            arcs.append(((i, j), (i + 1, j), False))
            walk(i + 1, j, cost + 1, arcs)
            arcs.pop()
        if j < m:
            arcs.append(((i, j), (i, j + 1), False))
            walk(i, j + 1, cost + 1, arcs)
            arcs.pop()

    walk(0, 0, 0, [])
    return paths


def edit_sequences(src, hyp, max_unchanged):
    """All edit sequences reachable by grouping arcs of some optimal path."""
    seqs = set()
    for path in optimal_paths(src, hyp):
        @lru_cache(maxsize=None)
        def groups(k):
            if k == len(path):
                return {()}
            out = set()
            if path[k][2]:
                out |= groups(k + 1)
            matches = 0
            changed = False
            for end in range(k, len(path)):
                if path[end][2]:
                    matches += 1
                else:
                    changed = True
                if matches > max_unchanged:
                    break
                if changed:
                    u, v = path[k][0], path[end][1]
                    edit = (u[0], v[0], tuple(hyp[u[1]:v[1]]))
                    out |= {(edit,) + rest for rest in groups(end + 1)}
            return out
        seqs |= {seq for seq in groups(0) if _valid(seq)}
    return seqs


def _valid(seq):
    """No two insertions at the same source offset."""
    inserts = [e[0] for e in seq if e[0] == e[1]]
    return len(inserts) == len(set(inserts))


def m2_bruteforce(src, hyp, gold_keys, max_unchanged=2):
    """(tp, fp, fn) of the best sequence: most gold matches, then fewest edits."""
    gold = set(gold_keys)
    best = None
    for seq in edit_sequences(src, hyp, max_unchanged):
        tp = len(set(seq) & gold)
        key = (tp, -len(seq))
        if best is None or key > best:
            best = key
    tp, neg = best
    return tp, -neg - tp, len(gold) - tp


def fbeta_counts(tp, fp, fn, beta=0.5):
    p = tp / (tp + fp) if tp + fp else 1.0
    r = tp / (tp + fn) if tp + fn else 1.0
    if p == 0 and r == 0:
        return 0.0
    return (1 + beta ** 2) * p * r / (beta ** 2 * p + r)


def best_assignment(per_sentence_options, beta=0.5):
    """Exhaustive max corpus F over every choice of one option per sentence."""
    best = -1.0
    best_totals = None
    for combo in product(*per_sentence_options):
        tp = sum(c[0] for c in combo)
        fp = sum(c[1] for c in combo)
        fn = sum(c[2] for c in combo)
        f = fbeta_counts(tp, fp, fn, beta)
        if f > best:
            best, best_totals = f, (tp, fp, fn)
    return best, best_totals


# --- GLEU -----------------------------------------------------------------

def _ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def gleu_sentence_reference(src, hyp, ref, order=4):
    row = [len(hyp), len(ref)]
    for n in range(1, order + 1):
        h, r, s = _ngrams(hyp, n), _ngrams(ref, n), _ngrams(src, n)
        total = 0
        for g in h:
            total += min(h[g], r[g])
            total -= max(0, min(h[g], s[g]) - r[g])
        row += [max(total, 0), max(len(hyp) + 1 - n, 0)]
    return row


def gleu_corpus_reference(sources, hyps, refsets, order, iterations, draws):
    """``draws(t)`` yields the uniform variates used for iteration ``t``."""
    scores = []
    for t in range(iterations):
        u = iter(draws(t))
        totals = [0] * (2 + 2 * order)
        for src, hyp, refs in zip(sources, hyps, refsets):
            pick = 0 if len(refs) == 1 else math.floor(next(u) * len(refs))
            row = gleu_sentence_reference(src, hyp, refs[pick], order)
            totals = [a + b for a, b in zip(totals, row)]
        c, r = totals[0], totals[1]
        if c == 0 or 0 in totals[2:]:
            scores.append(0.0)
            continue
        logp = 0.0
        for k in range(order):
            logp += math.log(totals[2 + 2 * k] / totals[3 + 2 * k])
        bp = math.exp(min(0.0, 1 - r / c))
        scores.append(bp * math.exp(logp / order))
    return sum(scores) / len(scores)


# --- BPE / strings --------------------------------------------------------

def bpe_learn_naive(freqs, num_merges):
    """Recount every pair from scratch at every step."""
    words = {tuple(w): f for w, f in freqs.items()}
    merges = []
    for _ in range(num_merges):
        counts = Counter()
        for sym, f in words.items():
            for k in range(len(sym) - 1):
                counts[(sym[k], sym[k + 1])] += f
        if not counts:
            break
        top = max(counts.values())
        if top < 2:
            break
        pair = sorted(p for p, c in counts.items() if c == top)[0]
        merges.append(pair)
        new = {}
        for sym, f in words.items():
            out, k = [], 0
            while k < len(sym):
                if k + 1 < len(sym) and (sym[k], sym[k + 1]) == pair:
                    out.append(sym[k] + sym[k + 1])
                    k += 2
                else:
                    out.append(sym[k])
                    k += 1
            new[tuple(out)] = new.get(tuple(out), 0) + f
        words = new
    return merges


def char_distance(a, b):
    """Full-matrix Levenshtein distance."""
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        table[i][0] = i
    for j in range(len(b) + 1):
        table[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            table[i][j] = min(table[i - 1][j] + 1, table[i][j - 1] + 1,
                              table[i - 1][j - 1] + (a[i - 1] != b[j - 1]))
    return table[-1][-1]


def all_sequences(alphabet, max_len):
    """Every sequence over ``alphabet`` with length <= max_len, shortest first."""
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        frontier = [s + (a,) for s in frontier for a in alphabet]
        out.extend(frontier)
    return out


def costs_to_all(src, alphabet, max_len):
    """Weighted OSA cost from ``src`` to every hypothesis up to ``max_len`` tokens.

    Walks the trie of hypotheses depth first, extending one DP column per
    trie node, so each (src, hyp) cost is the textbook recurrence evaluated
    once. Costs are in edit units, matching ``weighted_alignment_cost``.
    """
    n = len(src)
    out = {}
    first = [float(i) for i in range(n + 1)]

    def sub(a, b):
        if a == b:
            return 0.0
        return 0.5 if a.lower() == b.lower() else 1.0

    def walk(hyp, prev2, prev):
        out[hyp] = prev[n]
        if len(hyp) == max_len:
            return
        j = len(hyp) + 1
        for b in alphabet:
            col = [float(j)] + [0.0] * n
            for i in range(1, n + 1):
                best = min(col[i - 1] + 1, prev[i] + 1, prev[i - 1] + sub(src[i - 1], b))
                if (i > 1 and j > 1 and src[i - 1] == hyp[-1] and src[i - 2] == b
                        and src[i - 1] != src[i - 2]):
                    best = min(best, prev2[i - 2] + 1)
                col[i] = best
            walk(hyp + (b,), prev, col)

    walk((), None, first)
    return out
