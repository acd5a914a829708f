"""Slow, obviously-correct reference implementations used by the tests."""

from itertools import accumulate, groupby


def kolakoski(n):
    """Self-reading generator over plain lists."""
    s = [1, 2, 2]
    i = 2
    while len(s) < n:
        digit = 1 if s[-1] == 2 else 2
        s.extend([digit] * s[i])
        i += 1
    return s[:n]


def runs(word):
    return [len(list(g)) for _, g in groupby(word)]


def integrate(word, mirrored=False):
    out = []
    for i, d in enumerate(word):
        sym = 1 if i % 2 == 0 else 2
        if mirrored:
            sym = 3 - sym
        out.extend([sym] * d)
    return out


def prefix_sums(seq):
    return [0] + list(accumulate(seq))


def trim(word):
    if len(word) <= 1:
        return []
    lo = 1 if word[0] != word[1] else 0
    hi = len(word) - 1 if word[-1] != word[-2] else len(word)
    return word[lo:hi]


def history(seq, start, end, depth):
    """Parity history by materialising integrals of u and u w (u = s_1..s_{start-1})."""
    u, uw = seq[: start - 1], seq[:end]
    bits = []
    for _ in range(depth + 1):
        bits.append((len(uw) - len(u)) % 2)
        u, uw = integrate(u), integrate(uw)
    return bits


def as_str(word):
    return "".join(map(str, word))
